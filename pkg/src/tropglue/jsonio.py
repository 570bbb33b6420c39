"""JSON schemas for polyhedra, graphs, curves, complexes and refinements.

Rationals are always written as ``"p/q"`` strings (``"3"`` when the
denominator is one) and never as floats. Parsers raise
:class:`MalformedInputError` on any schema violation.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .errors import MalformedInputError
from .graphs import EXTERNAL, INTERNAL, Edge, TropicalCurve, TropicalGraph
from .lattice import INFINITE, IntMatrix
from .polyhedra import ChartedComplex, Gluing, RationalPolyhedron, Refinement, Violation

_RATIONAL = re.compile(r"^[+-]?\d+(/[+-]?\d+)?$")


def rational(x) -> Fraction:
    if isinstance(x, bool):
        raise MalformedInputError(f"expected a rational, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str) and _RATIONAL.match(x.strip()):
        try:
            return Fraction(x.strip())
        except ZeroDivisionError:
            raise MalformedInputError(f"zero denominator in {x!r}") from None
    raise MalformedInputError(f"expected an integer or 'p/q' string, got {x!r}")


def integer(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise MalformedInputError(f"expected an integer, got {x!r}")
    return x


def int_vector(x, dim=None) -> tuple[int, ...]:
    if not isinstance(x, list):
        raise MalformedInputError(f"expected a list of integers, got {x!r}")
    v = tuple(integer(a) for a in x)
    if dim is not None and len(v) != dim:
        raise MalformedInputError(f"expected {dim} entries, got {len(v)}")
    return v


def rational_vector(x, dim=None) -> tuple[Fraction, ...]:
    if not isinstance(x, list):
        raise MalformedInputError(f"expected a list of rationals, got {x!r}")
    v = tuple(rational(a) for a in x)
    if dim is not None and len(v) != dim:
        raise MalformedInputError(f"expected {dim} entries, got {len(v)}")
    return v


def q(x: Fraction) -> str:
    return str(Fraction(x))


def count(x):
    return "INFINITE" if x is INFINITE else x


def _obj(d, what):
    if not isinstance(d, dict):
        raise MalformedInputError(f"{what} must be a JSON object")
    return d


def _field(d, key, what):
    if key not in d:
        raise MalformedInputError(f"{what} is missing {key!r}")
    return d[key]


# --- polyhedra ---------------------------------------------------------------


def polyhedron_from_json(d) -> RationalPolyhedron:
    d = _obj(d, "polyhedron")
    dim = integer(_field(d, "dim", "polyhedron"))
    if dim < 0:
        raise MalformedInputError("dim must be nonnegative")

    def cons(items, key):
        if not isinstance(items, list):
            raise MalformedInputError(f"{key!r} must be a list")
        out = []
        for c in items:
            c = _obj(c, "constraint")
            out.append((int_vector(_field(c, "normal", "constraint"), dim), rational(_field(c, "offset", "constraint"))))
        return tuple(out)

    return RationalPolyhedron(dim, cons(d.get("ineqs", []), "ineqs"), cons(d.get("eqs", []), "eqs"))


def polyhedron_to_json(p: RationalPolyhedron) -> dict:
    return {
        "dim": p.dim,
        "ineqs": [{"normal": list(n), "offset": q(b)} for n, b in p.ineqs],
        "eqs": [{"normal": list(n), "offset": q(b)} for n, b in p.eqs],
    }


def matrix_from_json(x) -> IntMatrix:
    if not isinstance(x, list) or not x:
        raise MalformedInputError("matrix must be a nonempty list of rows")
    rows = [int_vector(r) for r in x]
    try:
        return IntMatrix.from_rows(rows)
    except ValueError as exc:
        raise MalformedInputError(str(exc)) from None


def matrix_to_json(m: IntMatrix) -> list:
    return m.to_rows()


def complex_from_json(d) -> ChartedComplex:
    d = _obj(d, "complex")
    charts = _field(d, "charts", "complex")
    gluings = d.get("gluings", [])
    if not isinstance(charts, list) or not isinstance(gluings, list):
        raise MalformedInputError("'charts' and 'gluings' must be lists")
    cs = tuple(polyhedron_from_json(c) for c in charts)
    gs = []
    for g in gluings:
        g = _obj(g, "gluing")
        lin = matrix_from_json(_field(g, "linear", "gluing"))
        t = rational_vector(g["translate"], lin.cols) if "translate" in g else ()
        gs.append(
            Gluing(
                integer(_field(g, "chart_a", "gluing")),
                integer(_field(g, "facet_a", "gluing")),
                integer(_field(g, "chart_b", "gluing")),
                integer(_field(g, "facet_b", "gluing")),
                lin,
                t,
            )
        )
    return ChartedComplex(cs, tuple(gs))


def complex_to_json(c: ChartedComplex) -> dict:
    return {
        "charts": [polyhedron_to_json(p) for p in c.charts],
        "gluings": [
            {
                "chart_a": g.chart_a,
                "facet_a": g.facet_a,
                "chart_b": g.chart_b,
                "facet_b": g.facet_b,
                "linear": matrix_to_json(g.linear),
                "translate": [q(x) for x in g.translate],
            }
            for g in c.gluings
        ],
    }


def refinement_from_json(d) -> Refinement:
    d = _obj(d, "refinement")
    coarse = _field(d, "coarse", "refinement")
    fine = _field(d, "fine", "refinement")
    assignment = _field(d, "assignment", "refinement")
    if not all(isinstance(x, list) for x in (coarse, fine, assignment)):
        raise MalformedInputError("'coarse', 'fine' and 'assignment' must be lists")
    return Refinement(
        tuple(polyhedron_from_json(p) for p in coarse),
        tuple(polyhedron_from_json(p) for p in fine),
        tuple(integer(a) for a in assignment),
    )


def refinement_to_json(r: Refinement) -> dict:
    return {
        "coarse": [polyhedron_to_json(p) for p in r.coarse],
        "fine": [polyhedron_to_json(p) for p in r.fine],
        "assignment": list(r.assignment),
    }


def violation_to_json(v: Violation) -> dict:
    out = {"kind": v.kind, "cells": list(v.cells), "detail": v.detail}
    if v.witness is not None:
        out["witness"] = [q(x) for x in v.witness]
    return out


# --- graphs ------------------------------------------------------------------


def graph_from_json(d) -> TropicalGraph:
    d = _obj(d, "graph")
    n = integer(_field(d, "ambient_dim", "graph"))
    vertices = _field(d, "vertices", "graph")
    edges = _field(d, "edges", "graph")
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise MalformedInputError("'vertices' must be a list of strings")
    if not isinstance(edges, list):
        raise MalformedInputError("'edges' must be a list")
    out = []
    for e in edges:
        e = _obj(e, "edge")
        kind = e.get("kind", EXTERNAL if e.get("head") is None else INTERNAL)
        if kind not in (INTERNAL, EXTERNAL):
            raise MalformedInputError(f"unknown edge kind {kind!r}")
        for key in ("id", "tail"):
            if not isinstance(_field(e, key, "edge"), str):
                raise MalformedInputError(f"edge {key!r} must be a string")
        head = e.get("head")
        label = e.get("label")
        if head is not None and not isinstance(head, str):
            raise MalformedInputError("edge 'head' must be a string")
        if label is not None and not isinstance(label, str):
            raise MalformedInputError("edge 'label' must be a string")
        out.append(Edge(e["id"], e["tail"], head, int_vector(_field(e, "dir", "edge"), n), kind, label))
    return TropicalGraph(n, tuple(vertices), tuple(out))


def graph_to_json(g: TropicalGraph) -> dict:
    edges = []
    for e in g.edges:
        item = {"id": e.id, "tail": e.tail, "dir": list(e.direction), "kind": e.kind}
        if e.head is not None:
            item["head"] = e.head
        if e.label is not None:
            item["label"] = e.label
        edges.append(item)
    return {"ambient_dim": g.ambient_dim, "vertices": list(g.vertices), "edges": edges}


def curve_from_json(d) -> TropicalCurve:
    d = _obj(d, "curve")
    g = graph_from_json(_field(d, "graph", "curve"))
    pos = _obj(_field(d, "positions", "curve"), "positions")
    lengths = _obj(d.get("lengths", {}), "lengths")
    return TropicalCurve(
        g,
        {v: rational_vector(p, g.ambient_dim) for v, p in pos.items()},
        {e: rational(l) for e, l in lengths.items()},
    )


def curve_to_json(c: TropicalCurve) -> dict:
    return {
        "graph": graph_to_json(c.graph),
        "positions": {v: [q(x) for x in c.positions[v]] for v in c.graph.vertices},
        "lengths": {e.id: q(c.lengths[e.id]) for e in c.graph.internal_edges},
    }


def points_from_json(d, dim) -> dict:
    d = _obj(d, "points")
    return {lab: rational_vector(p, dim) for lab, p in d.items()}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
