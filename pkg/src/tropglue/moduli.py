"""Moduli of tropical curves of a fixed combinatorial type.

For a balanced graph the curves of its type are the solutions of one
linear equation per internal edge, ``x_tail + l_e * alpha_e - x_head = 0``,
with ``l_e > 0``. :func:`assemble_A` writes that integral map down;
everything else here is lattice algebra and exact LP on top of it.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Mapping, Sequence

from . import lp
from .errors import GenusTooSmallError, UnbalancedError
from .graphs import (
    TropicalCurve,
    TropicalGraph,
    add_marked_point,
    automorphisms,
    balance,
    genus,
    validate,
)
from .lattice import (
    INFINITE,
    IntMatrix,
    LatticeVector,
    cokernel_order,
    content,
    kernel_basis,
    rank,
    solve_rational,
)
from .errors import InfeasibleError, MalformedInputError

Variable = tuple  # ("l", edge_id) or ("x", vertex_id, coordinate)


def _require_balanced(g: TropicalGraph) -> None:
    problems = validate(g)
    if problems:
        raise MalformedInputError("; ".join(problems))
    defects = balance(g)
    if defects:
        raise UnbalancedError(
            "graph violates the momentum condition",
            defects={v: list(d) for v, d in defects.items()},
        )


def assemble_A(g: TropicalGraph) -> tuple[IntMatrix, list[Variable]]:
    """The integral map whose kernel (with positive lengths) is the moduli space.

    Columns are the internal edge lengths followed by the vertex coordinates,
    both in input order; each internal edge contributes ``n`` rows.
    """
    _require_balanced(g)
    n = g.ambient_dim
    internal = g.internal_edges
    variables: list[Variable] = [("l", e.id) for e in internal]
    variables += [("x", v, k) for v in g.vertices for k in range(n)]
    col_of_vertex = {v: len(internal) + n * i for i, v in enumerate(g.vertices)}
    ncols = len(variables)
    rows = []
    for j, e in enumerate(internal):
        for k in range(n):
            row = [0] * ncols
            row[j] = e.direction[k]
            row[col_of_vertex[e.tail] + k] += 1
            row[col_of_vertex[e.head] + k] -= 1
            rows.append(row)
    return IntMatrix.from_rows(rows, ncols), variables


@dataclass(frozen=True)
class ModuliPresentation:
    a: IntMatrix
    variables: tuple[Variable, ...]
    rank: int
    dimension: int
    surjective: bool
    component_count: object  # int or INFINITE
    kernel: tuple[LatticeVector, ...]
    positive_cell_nonempty: bool
    degenerate_edges: tuple[str, ...] = ()


def positive_lengths_feasible(kernel: Sequence[LatticeVector], n_lengths: int):
    """A kernel combination with every length coordinate >= 1, or ``None``.

    The kernel is a linear space, so some point has all lengths positive iff
    some point has all lengths at least one (rescale).
    """
    if n_lengths == 0:
        return ()
    if not kernel:
        return None
    dim = len(kernel)
    ineqs = [([k[e] for k in kernel], Fraction(1)) for e in range(n_lengths)]
    res = lp.maximize([0] * dim, ineqs)
    if res.status != lp.OPTIMAL:
        return None
    return res.point


def moduli_presentation(g: TropicalGraph) -> ModuliPresentation:
    a, variables = assemble_A(g)
    r = rank(a)
    kernel = tuple(kernel_basis(a))
    n_lengths = len(g.internal_edges)
    return ModuliPresentation(
        a=a,
        variables=tuple(variables),
        rank=r,
        dimension=a.cols - r,
        surjective=r == a.rows,
        component_count=cokernel_order(a),
        kernel=kernel,
        positive_cell_nonempty=positive_lengths_feasible(kernel, n_lengths) is not None,
        degenerate_edges=tuple(e.id for e in g.internal_edges if not any(e.direction)),
    )


# ---------------------------------------------------------------------------
# Gluing constants


@dataclass(frozen=True)
class GluingData:
    k_gamma: Fraction
    g_gamma: int
    gluing_choices: int
    aut_order: int
    genus_splits: tuple[tuple[int, ...], ...]


def compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """All ways to write ``total`` as an ordered sum of ``parts`` nonnegative ints, lexicographic."""
    if parts == 0:
        return [()] if total == 0 else []
    if parts == 1:
        return [(total,)]
    return [(first,) + rest for first in range(total + 1) for rest in compositions(total - first, parts - 1)]


def gluing_data(g: TropicalGraph, total_genus: int) -> GluingData:
    _require_balanced(g)
    g_gamma = genus(g)
    if total_genus < g_gamma:
        raise GenusTooSmallError(f"total genus {total_genus} is below the graph genus {g_gamma}")
    mults = [content(e.direction) for e in g.internal_edges]
    choices = prod(mults)
    aut_order = len(automorphisms(g))
    return GluingData(
        k_gamma=Fraction(choices, aut_order),
        g_gamma=g_gamma,
        gluing_choices=choices,
        aut_order=aut_order,
        genus_splits=tuple(compositions(total_genus - g_gamma, len(g.vertices))),
    )


# ---------------------------------------------------------------------------
# Point constraints

OK = "ok"
INFEASIBLE = "infeasible"
NONPOSITIVE = "nonpositive"
NON_TRANSVERSE = "non_transverse"
POSITIVE_DIMENSIONAL = "positive_dimensional"


@dataclass(frozen=True)
class PointSolution:
    status: str
    assignment: tuple[tuple[str, str], ...]
    curve: TropicalCurve | None = None
    multiplicity: int | None = None
    violating_lengths: tuple[tuple[str, Fraction], ...] = ()
    family_dimension: int = 0

    @property
    def counted(self) -> bool:
        return self.status == OK and self.multiplicity is not None


def _on_vertex(g: TropicalGraph, target: str) -> bool:
    return target in g.vertices and not any(e.id == target for e in g.edges)


def marked_graph(g: TropicalGraph, assignment: Sequence[tuple[str, str]]) -> TropicalGraph:
    """Insert the marked points in order; a later label on the same edge lands nearer its tail.

    Targets naming a vertex (and no edge) leave the graph alone: that vertex is pinned directly.
    """
    out = g
    for label, target in assignment:
        if not _on_vertex(g, target):
            out = add_marked_point(out, target, label)
    return out


def solve_points(
    g: TropicalGraph,
    assignment: Mapping[str, str] | Sequence[tuple[str, str]],
    points: Mapping[str, Sequence],
) -> PointSolution:
    """Curves of type ``g`` with marked point ``label`` on edge ``assignment[label]`` at ``points[label]``.

    Solves ``A z = 0`` together with pinning rows ``x_marked = point``. A
    target that is a vertex id pins that vertex instead of splitting an edge. The
    multiplicity is the cokernel order of the augmented integer matrix and
    is reported only when that matrix is surjective.
    """
    _require_balanced(g)
    pairs = tuple(assignment.items()) if isinstance(assignment, Mapping) else tuple(tuple(p) for p in assignment)
    if sorted(lab for lab, _ in pairs) != sorted(points):
        raise MalformedInputError("every marked label needs exactly one point and one edge")
    known = set(g.vertices) | {e.id for e in g.edges}
    for label, target in pairs:
        if target not in known:
            raise MalformedInputError(f"marked point {label!r} refers to unknown edge or vertex {target!r}")
    gm = marked_graph(g, pairs)
    a, variables = assemble_A(gm)
    n = g.ambient_dim
    col = {v: i for i, v in enumerate(variables)}
    pins, rhs = [], [Fraction(0)] * a.rows
    for label, target in pairs:
        pinned = target if _on_vertex(g, target) else "@" + label
        pt = [Fraction(x) for x in points[label]]
        if len(pt) != n:
            raise MalformedInputError(f"point {label!r} has the wrong dimension")
        for k in range(n):
            row = [0] * a.cols
            row[col[("x", pinned, k)]] = 1
            pins.append(row)
            rhs.append(pt[k])
    aug = a.stack(IntMatrix.from_rows(pins, a.cols)) if pins else a
    try:
        sol = solve_rational(aug, rhs)
    except InfeasibleError:
        return PointSolution(INFEASIBLE, pairs)
    surjective = rank(aug) == aug.rows
    mult = cokernel_order(aug) if surjective else None
    if sol.kernel:
        return PointSolution(POSITIVE_DIMENSIONAL, pairs, multiplicity=mult, family_dimension=len(sol.kernel))
    z = sol.particular
    lengths = {e.id: z[col[("l", e.id)]] for e in gm.internal_edges}
    positions = {v: tuple(z[col[("x", v, k)]] for k in range(n)) for v in gm.vertices}
    bad = tuple((e, l) for e, l in lengths.items() if l <= 0)
    if bad:
        return PointSolution(NONPOSITIVE, pairs, violating_lengths=bad)
    curve = TropicalCurve(gm, positions, lengths)
    if not surjective:
        return PointSolution(NON_TRANSVERSE, pairs, curve=curve)
    return PointSolution(OK, pairs, curve=curve, multiplicity=mult)


@dataclass(frozen=True)
class Enumeration:
    solutions: tuple[PointSolution, ...]
    total: int | None
    positive_dimensional: bool = False
    non_transverse: bool = False
    attempts: tuple[PointSolution, ...] = field(default=(), repr=False)


def _assignments(g: TropicalGraph, labels: Sequence[str]):
    """Every map labels -> edges, with every ordering of labels that share an edge."""
    ids = [e.id for e in g.edges]
    for choice in itertools.product(ids, repeat=len(labels)):
        groups: dict[str, list[str]] = {}
        for lab, eid in zip(labels, choice):
            groups.setdefault(eid, []).append(lab)
        per_edge = [[(eid, p) for p in itertools.permutations(labs)] for eid, labs in groups.items()]
        for combo in itertools.product(*per_edge):
            yield tuple((lab, eid) for eid, perm in combo for lab in perm)


def _underlying_key(g: TropicalGraph, s: PointSolution, points):
    """Identify a solution by the curve it draws, ignoring how markers split edges."""
    c = s.curve
    pos = tuple(c.positions[v] for v in g.vertices)
    lens = []
    for e in g.internal_edges:
        total = sum((l for eid, l in c.lengths.items() if eid == e.id or eid.startswith(e.id + "/")), Fraction(0))
        lens.append(total)
    return pos, tuple(lens), tuple(sorted((k, tuple(Fraction(x) for x in v)) for k, v in points.items()))


def enumerate_assignments(g: TropicalGraph, points: Mapping[str, Sequence], threads: int | None = None) -> Enumeration:
    """Run :func:`solve_points` over all placements of the marked points and count.

    ``total`` is the sum of multiplicities of the distinct positive-length
    transverse solutions, or ``None`` when some placement yields a
    positive-dimensional or non-transverse family.
    """
    _require_balanced(g)
    labels = sorted(points)
    if not labels:
        pres = moduli_presentation(g)
        if pres.dimension == 0 and pres.positive_cell_nonempty:
            return Enumeration((), pres.component_count if pres.component_count is not INFINITE else None)
        return Enumeration((), None, positive_dimensional=True)
    if threads is None:
        threads = int(os.environ.get("TROPGLUE_THREADS", "1") or 1)
    jobs = list(_assignments(g, labels))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda asg: solve_points(g, asg, points), jobs))
    else:
        results = [solve_points(g, asg, points) for asg in jobs]
    kept, seen = [], set()
    posdim = any(r.status == POSITIVE_DIMENSIONAL for r in results)
    nontrans = any(r.status == NON_TRANSVERSE for r in results)
    for r in results:
        if r.status != OK:
            continue
        key = _underlying_key(g, r, points)
        if key in seen:
            continue
        seen.add(key)
        kept.append(r)
    total = None if posdim or nontrans else sum(r.multiplicity for r in kept)
    return Enumeration(tuple(kept), total, posdim, nontrans, tuple(results))
