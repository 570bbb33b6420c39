"""``tropglue``: JSON in, JSON out.

Exit codes: 0 success, 1 malformed input, 2 domain failure (the JSON body
then carries an ``"error"`` object).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from . import jsonio as J
from .errors import (
    InvalidStratumError,
    MalformedInputError,
    NonTransverseError,
    TropGlueError,
    UnbalancedError,
)
from .graphs import add_marked_point, automorphisms, balance, curve_violations, genus, localize, validate
from .lattice import cokernel_order, hnf, kernel_basis, snf
from .moduli import (
    INFEASIBLE,
    NON_TRANSVERSE,
    NONPOSITIVE,
    POSITIVE_DIMENSIONAL,
    enumerate_assignments,
    gluing_data,
    moduli_presentation,
    solve_points,
)
from .polyhedra import (
    Stratum,
    complex_violations,
    continue_direction,
    end_component,
    refinement_check,
    transition,
    tropical_completion,
)


def load(source: str):
    """Parse inline JSON, ``-`` (stdin) or a file path."""
    text = source.strip()
    try:
        if text.startswith(("{", "[")):
            return json.loads(text)
        if source == "-":
            return json.load(sys.stdin)
        return json.loads(Path(source).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"invalid JSON in {source!r}: {exc}") from None
    except OSError as exc:
        raise MalformedInputError(f"cannot read {source!r}: {exc.strerror}") from None


def _graph(args):
    g = J.graph_from_json(load(args.input))
    problems = validate(g)
    if problems:
        raise MalformedInputError("; ".join(problems))
    return g


# --- subcommands -----------------------------------------------------------


def cmd_validate(args):
    g = J.graph_from_json(load(args.input))
    problems = validate(g)
    return {"ok": not problems, "violations": problems}


def cmd_balance(args):
    g = _graph(args)
    defects = balance(g)
    if defects:
        raise UnbalancedError("graph violates the momentum condition", defects={v: list(d) for v, d in defects.items()})
    return {"ok": True}


def cmd_genus(args):
    return {"genus": genus(_graph(args))}


def cmd_autos(args):
    g = _graph(args)
    autos = automorphisms(g)
    return {"order": len(autos), "automorphisms": [a.describe(g) for a in autos]}


def cmd_moduli(args):
    g = _graph(args)
    p = moduli_presentation(g)
    return {
        "dimension": p.dimension,
        "surjective": p.surjective,
        "components": J.count(p.component_count),
        "rank": p.rank,
        "matrix": J.matrix_to_json(p.a) if p.a.rows else [],
        "shape": [p.a.rows, p.a.cols],
        "variables": [list(v) for v in p.variables],
        "kernel": [list(k) for k in p.kernel],
        "positive_cell_nonempty": p.positive_cell_nonempty,
        "degenerate_edges": list(p.degenerate_edges),
    }


def cmd_glue(args):
    g = _graph(args)
    d = gluing_data(g, args.genus)
    return {
        "k_gamma": J.q(d.k_gamma),
        "aut_order": d.aut_order,
        "g_gamma": d.g_gamma,
        "gluing_choices": d.gluing_choices,
        "genus_splits": [list(s) for s in d.genus_splits],
    }


def cmd_mark(args):
    g = add_marked_point(_graph(args), args.edge, args.label)
    return {"graph": J.graph_to_json(g)}


def cmd_localize(args):
    c = J.curve_from_json(load(args.input))
    problems = validate(c.graph) + curve_violations(c)
    if problems:
        raise MalformedInputError("; ".join(problems))
    if args.vertex not in c.graph.vertices:
        raise MalformedInputError(f"unknown vertex {args.vertex!r}")
    return {"curve": J.curve_to_json(localize(c, args.vertex))}


def cmd_complete(args):
    p = J.polyhedron_from_json(load(args.input))
    tight = load(args.stratum)
    if not isinstance(tight, list):
        raise MalformedInputError("--stratum must be a JSON list of inequality indices")
    tight = [J.integer(i) for i in tight]
    if any(not 0 <= i < len(p.ineqs) for i in tight):
        raise InvalidStratumError(f"inequality indices out of range: {tight}")
    return {"polyhedron": J.polyhedron_to_json(tropical_completion(p, Stratum(p, frozenset(tight))))}


def cmd_end(args):
    p = J.polyhedron_from_json(load(args.input))
    v = J.int_vector(load(args.dir), p.dim)
    return {"direction": list(v), "identity_component": not any(v), "polyhedron": J.polyhedron_to_json(end_component(p, v))}


def cmd_continue(args):
    c = J.complex_from_json(load(args.input))
    problems = complex_violations(c)
    if problems:
        raise MalformedInputError("; ".join(problems))
    raw = load(args.path)
    if not isinstance(raw, list) or not all(isinstance(s, list) and len(s) == 2 for s in raw):
        raise MalformedInputError("--path must be a JSON list of [chart, gluing] pairs")
    path = [(J.integer(a), J.integer(b)) for a, b in raw]
    dim = c.charts[0].dim if c.charts else 0
    d = J.int_vector(load(args.dir), dim)
    out = {"direction": list(continue_direction(c, path, d))}
    if path:
        m = transition(c, path)
        out["transition"] = J.matrix_to_json(m)
        out["closed_loop"] = c.gluings[path[-1][1]].chart_b == path[0][0]
        out["identity"] = m.entries == tuple(int(i == j) for i in range(m.rows) for j in range(m.cols))
    return out


def _solution_json(s):
    out = {"status": s.status, "assignment": [list(p) for p in s.assignment]}
    if s.curve is not None:
        out["curve"] = J.curve_to_json(s.curve)
    if s.multiplicity is not None:
        out["multiplicity"] = J.count(s.multiplicity)
    if s.violating_lengths:
        out["violating_lengths"] = {e: J.q(l) for e, l in s.violating_lengths}
    if s.status == POSITIVE_DIMENSIONAL:
        out["family_dimension"] = s.family_dimension
    return out


def cmd_solve(args):
    g = _graph(args)
    points = J.points_from_json(load(args.points), g.ambient_dim)
    if args.assign is None:
        en = enumerate_assignments(g, points, threads=_threads())
        return {
            "total": en.total,
            "positive_dimensional": en.positive_dimensional,
            "non_transverse": en.non_transverse,
            "solutions": [_solution_json(s) for s in en.solutions],
        }
    raw = load(args.assign)
    if not isinstance(raw, dict) or not all(isinstance(v, str) for v in raw.values()):
        raise MalformedInputError("--assign must map labels to edge or vertex ids")
    s = solve_points(g, raw, points)
    body = _solution_json(s)
    if s.status == INFEASIBLE:
        raise _Domain("OVERDETERMINED_INFEASIBLE", "no rational solution", body)
    if s.status == NONPOSITIVE:
        raise _Domain("NONPOSITIVE_LENGTH", "solution has non-positive edge lengths", body)
    if s.status == NON_TRANSVERSE:
        raise _Domain(NonTransverseError.code, "augmented map is not surjective", body)
    return body


def cmd_refine_check(args):
    r = J.refinement_from_json(load(args.input))
    v = refinement_check(r)
    return {"ok": not v, "violations": [J.violation_to_json(x) for x in v]}


def _matrix_arg(args):
    return J.matrix_from_json(load(args.input))


def cmd_hnf(args):
    h, u = hnf(_matrix_arg(args))
    return {"h": J.matrix_to_json(h), "u": J.matrix_to_json(u)}


def cmd_snf(args):
    r = snf(_matrix_arg(args))
    return {"d": list(r.d), "u": J.matrix_to_json(r.u), "v": J.matrix_to_json(r.v)}


def cmd_cokernel(args):
    return {"order": J.count(cokernel_order(_matrix_arg(args)))}


def cmd_kernel(args):
    return {"kernel": [list(k) for k in kernel_basis(_matrix_arg(args))]}


class _Domain(TropGlueError):
    def __init__(self, code, message, body):
        super().__init__(message)
        self.code = code
        self.body = body


def _threads() -> int:
    raw = os.environ.get("TROPGLUE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise MalformedInputError(f"TROPGLUE_THREADS must be an integer, got {raw!r}") from None


# --- driver ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tropglue", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="op", required=True)

    def add(name, fn, help, input_help="graph JSON (path, '-' or inline)"):
        p = sub.add_parser(name, help=help)
        p.add_argument("input", help=input_help)
        p.add_argument("-o", "--output", help="write JSON here instead of stdout")
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate, "check graph invariants")
    add("balance", cmd_balance, "check the momentum condition")
    add("genus", cmd_genus, "first Betti number")
    add("autos", cmd_autos, "automorphisms fixing labeled ends")
    add("moduli", cmd_moduli, "moduli map, dimension, component count")
    add("glue", cmd_glue, "gluing constant and genus splittings").add_argument("--genus", type=int, required=True)
    p = add("mark", cmd_mark, "insert a zero-momentum marked end")
    p.add_argument("--edge", required=True)
    p.add_argument("--label", required=True)
    add("localize", cmd_localize, "star of a vertex with ends made infinite", "curve JSON").add_argument(
        "--vertex", required=True
    )
    add("complete", cmd_complete, "tropical completion at a stratum", "polyhedron JSON").add_argument(
        "--stratum", required=True, help="JSON list of tight inequality indices"
    )
    add("end", cmd_end, "End-space projection along a direction", "polyhedron JSON").add_argument(
        "--dir", required=True, help="JSON integer vector"
    )
    p = add("continue", cmd_continue, "continue a direction through chart gluings", "charted complex JSON")
    p.add_argument("--path", required=True, help="JSON list of [chart, gluing] pairs")
    p.add_argument("--dir", required=True, help="JSON integer vector")
    p = add("solve", cmd_solve, "curves through marked points")
    p.add_argument("--points", required=True, help="JSON object label -> point")
    p.add_argument("--assign", help="JSON object label -> edge or vertex id (default: enumerate over edges)")
    add("refine-check", cmd_refine_check, "validate a refinement", "refinement JSON")
    for name, fn in (("hnf", cmd_hnf), ("snf", cmd_snf), ("cokernel", cmd_cokernel), ("kernel", cmd_kernel)):
        add(name, fn, f"{name} of an integer matrix", "matrix JSON (list of rows)")
    return ap


def _execute(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
        return (0 if code == 0 else 1), "", None
    out = {"op": args.op, "version": __version__}
    try:
        body = args.fn(args)
        code = 0
    except MalformedInputError as exc:
        body, code = {"error": exc.to_json()}, 1
    except _Domain as exc:
        body = dict(exc.body)
        body["error"] = {"code": exc.code, "message": str(exc)}
        code = 2
    except TropGlueError as exc:
        body, code = {"error": exc.to_json()}, 2
    out.update(body)
    return code, J.dumps(out), args.output


def run(argv=None) -> tuple[int, str]:
    """Execute one command; returns ``(exit_code, json_text)``."""
    code, text, _ = _execute(argv)
    return code, text


def main(argv=None) -> int:
    code, text, target = _execute(argv)
    if text:
        if target:
            Path(target).write_text(text + "\n")
        else:
            sys.stdout.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
