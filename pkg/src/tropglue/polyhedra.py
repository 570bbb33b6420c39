"""Rational polyhedra in H-representation and integral affine charts.

A :class:`RationalPolyhedron` is ``{x : <n_i, x> >= b_i, <m_j, x> = c_j}``
with primitive integer normals and rational offsets. Everything that needs a
decision (emptiness, containment, relative interiors) goes through the exact
simplex in :mod:`tropglue.lp`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import lp
from .errors import (
    BrokenPathError,
    EmptyPolyhedronError,
    InvalidStratumError,
    NoRayError,
    ZeroVectorError,
)
from .lattice import IntMatrix, LatticeVector, content, hnf, primitive

Constraint = tuple[LatticeVector, Fraction]


def _normalize(normal, offset) -> Constraint:
    normal = tuple(int(x) for x in normal)
    offset = Fraction(offset)
    c = content(normal)
    if c > 1:
        return tuple(x // c for x in normal), offset / c
    return normal, offset


def _dot(a, x):
    return sum((ai * xi for ai, xi in zip(a, x)), Fraction(0))


@dataclass(frozen=True)
class RationalPolyhedron:
    dim: int
    ineqs: tuple[Constraint, ...] = ()
    eqs: tuple[Constraint, ...] = ()

    def __post_init__(self):
        ineqs = tuple(_normalize(n, b) for n, b in self.ineqs)
        eqs = tuple(_normalize(n, b) for n, b in self.eqs)
        for n, _ in ineqs + eqs:
            if len(n) != self.dim:
                raise ValueError(f"normal {n} does not have dimension {self.dim}")
        object.__setattr__(self, "ineqs", ineqs)
        object.__setattr__(self, "eqs", eqs)

    @classmethod
    def box(cls, lower: Sequence, upper: Sequence) -> RationalPolyhedron:
        dim = len(lower)
        ineqs = []
        for i in range(dim):
            e = tuple(int(i == j) for j in range(dim))
            ineqs.append((e, Fraction(lower[i])))
            ineqs.append((tuple(-x for x in e), -Fraction(upper[i])))
        return cls(dim, tuple(ineqs))

    @classmethod
    def orthant(cls, dim: int) -> RationalPolyhedron:
        return cls(dim, tuple((tuple(int(i == j) for j in range(dim)), Fraction(0)) for i in range(dim)))

    def contains(self, x: Sequence) -> bool:
        return all(_dot(n, x) >= b for n, b in self.ineqs) and all(_dot(n, x) == b for n, b in self.eqs)

    def point(self):
        """Some point of the polyhedron, or ``None`` if it is empty."""
        return lp.feasible_point(self.dim, self.ineqs, self.eqs)

    def is_empty(self) -> bool:
        return self.point() is None

    def minimum(self, objective: Sequence):
        """Exact ``min <objective, x>`` over the polyhedron (``None`` if unbounded below)."""
        res = lp.maximize([-Fraction(c) for c in objective], self.ineqs, self.eqs)
        if res.status == lp.INFEASIBLE:
            raise EmptyPolyhedronError("polyhedron is empty")
        return None if res.status == lp.UNBOUNDED else -res.value

    def implicit_equalities(self) -> frozenset[int]:
        """Indices of inequalities that hold with equality on the whole polyhedron."""
        out = set()
        for i, (n, b) in enumerate(self.ineqs):
            res = lp.maximize(n, self.ineqs, self.eqs)
            if res.status == lp.OPTIMAL and res.value == b:
                out.add(i)
        return frozenset(out)

    def relative_interior_point(self):
        """A point of the relative interior, or ``None`` if empty."""
        implicit = self.implicit_equalities()
        strict = [c for i, c in enumerate(self.ineqs) if i not in implicit]
        eqs = list(self.eqs) + [self.ineqs[i] for i in sorted(implicit)]
        got = lp.max_slack(self.dim, strict, eqs)
        if got is None:
            return None
        return got[1]

    def transformed(self, linear: IntMatrix, translate: Sequence = ()) -> RationalPolyhedron:
        """Image under ``x -> linear @ x + translate`` for unimodular ``linear``."""
        inv = linear.inverse_unimodular()
        t = [Fraction(x) for x in translate] or [Fraction(0)] * self.dim

        def move(n, b):
            # <n, inv (y - t)> = <inv^T n, y> - <inv^T n, t>
            m = tuple(sum(n[i] * inv[i, j] for i in range(self.dim)) for j in range(self.dim))
            return m, b + _dot(m, t)

        return RationalPolyhedron(
            self.dim,
            tuple(move(n, b) for n, b in self.ineqs),
            tuple(move(n, b) for n, b in self.eqs),
        )

    def with_equalities(self, indices) -> RationalPolyhedron:
        """The face where the inequalities at ``indices`` are tight."""
        indices = set(indices)
        return RationalPolyhedron(
            self.dim,
            tuple(c for i, c in enumerate(self.ineqs) if i not in indices),
            self.eqs + tuple(self.ineqs[i] for i in sorted(indices)),
        )


def contained_in(a: RationalPolyhedron, b: RationalPolyhedron) -> bool:
    """Exact test of ``a`` being a subset of ``b``."""
    if a.is_empty():
        return True
    for n, off in b.ineqs:
        low = a.minimum(n)
        if low is None or low < off:
            return False
    for n, off in b.eqs:
        low = a.minimum(n)
        high = a.minimum([-x for x in n])
        if low is None or high is None or low != off or -high != off:
            return False
    return True


def same_set(a: RationalPolyhedron, b: RationalPolyhedron) -> bool:
    return contained_in(a, b) and contained_in(b, a)


# ---------------------------------------------------------------------------
# Strata and tropical completion


@dataclass(frozen=True)
class Stratum:
    """The open face of ``parent`` on which exactly ``tight`` inequalities are equalities."""

    parent: RationalPolyhedron
    tight: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "tight", frozenset(int(i) for i in self.tight))

    @classmethod
    def at_point(cls, p: RationalPolyhedron, x: Sequence) -> Stratum:
        if not p.contains(x):
            raise InvalidStratumError("point is not in the polyhedron")
        return cls(p, frozenset(i for i, (n, b) in enumerate(p.ineqs) if _dot(n, x) == b))

    def relative_interior_point(self):
        """A point where the tight inequalities are equalities and all others strict."""
        p = self.parent
        bad = [i for i in self.tight if not 0 <= i < len(p.ineqs)]
        if bad:
            raise InvalidStratumError(f"inequality indices out of range: {sorted(bad)}")
        eqs = list(p.eqs) + [p.ineqs[i] for i in sorted(self.tight)]
        loose = [c for i, c in enumerate(p.ineqs) if i not in self.tight]
        got = lp.max_slack(p.dim, loose, eqs)
        if got is None or (loose and got[0] <= 0):
            raise InvalidStratumError(
                f"tight set {sorted(self.tight)} does not define a face with nonempty relative interior"
            )
        return got[1]

    def validate(self) -> None:
        self.relative_interior_point()


def tropical_completion(p: RationalPolyhedron, s: Stratum) -> RationalPolyhedron:
    """Union of the rays starting in ``s`` that meet ``p`` in more than one point.

    For a convex polyhedron this is the cone cut out by the constraints that
    are tight on ``s``; non-tight inequalities are dropped.
    """
    if s.parent != p:
        raise InvalidStratumError("stratum belongs to a different polyhedron")
    s.validate()
    return RationalPolyhedron(p.dim, tuple(p.ineqs[i] for i in sorted(s.tight)), p.eqs)


# ---------------------------------------------------------------------------
# End spaces


def recession_contains(p: RationalPolyhedron, v: Sequence[int]) -> bool:
    if p.is_empty():
        raise EmptyPolyhedronError("polyhedron is empty")
    return all(_dot(n, v) >= 0 for n, _ in p.ineqs) and all(_dot(n, v) == 0 for n, _ in p.eqs)


def extension_basis(v: Sequence[int]) -> IntMatrix:
    """Unimodular ``u`` with ``u @ v == (0, ..., 0, content(v))``."""
    w = primitive(v)
    _, u0 = hnf(IntMatrix.column(w))
    rows = u0.to_rows()
    return IntMatrix.from_rows(rows[1:] + rows[:1], len(w))


def fourier_motzkin(ineqs, eqs, j: int):
    """Eliminate coordinate ``j`` exactly.

    Returns the (ineqs, eqs) of the projection, with coordinate ``j`` removed
    from every normal. Normals are made primitive and syntactic duplicates
    are pruned; no other redundancy removal is attempted.
    """
    ineqs = [(tuple(n), Fraction(b)) for n, b in ineqs]
    eqs = [(tuple(n), Fraction(b)) for n, b in eqs]
    pivot = next((e for e in eqs if e[0][j] != 0), None)
    if pivot is not None:
        pn, pb = pivot
        a = pn[j]
        sa = 1 if a > 0 else -1

        def sub(n, b):
            c = n[j]
            if c == 0:
                return n, b
            return (
                tuple(abs(a) * x - sa * c * y for x, y in zip(n, pn)),
                abs(a) * b - sa * c * pb,
            )

        new_ineqs = [sub(n, b) for n, b in ineqs]
        new_eqs = [sub(n, b) for n, b in eqs if (n, b) != pivot]
    else:
        pos = [(n, b) for n, b in ineqs if n[j] > 0]
        neg = [(n, b) for n, b in ineqs if n[j] < 0]
        new_ineqs = [(n, b) for n, b in ineqs if n[j] == 0]
        for (pn, pb), (nn, nb) in ((p, q) for p in pos for q in neg):
            p, q = pn[j], -nn[j]
            new_ineqs.append((tuple(q * x + p * y for x, y in zip(pn, nn)), q * pb + p * nb))
        new_eqs = list(eqs)
    drop = lambda n: n[:j] + n[j + 1:]
    return _clean([(drop(n), b) for n, b in new_ineqs], [(drop(n), b) for n, b in new_eqs])


def _clean(ineqs, eqs):
    out_i, out_e = [], []
    for n, b in ineqs:
        n, b = _normalize(n, b)
        if not any(n):
            if b > 0:
                # 0 >= b > 0: the projection is empty; keep one witness constraint
                out_i.append((n, b))
            continue
        out_i.append((n, b))
    for n, b in eqs:
        n, b = _normalize(n, b)
        if not any(n):
            if b != 0:
                out_e.append((n, b))
            continue
        lead = next(x for x in n if x)
        if lead < 0:
            n, b = tuple(-x for x in n), -b
        out_e.append((n, b))
    return tuple(sorted(set(out_i))), tuple(sorted(set(out_e)))


def project_along(p: RationalPolyhedron, u: IntMatrix) -> RationalPolyhedron:
    """Apply unimodular ``u`` then forget the last coordinate."""
    moved = p.transformed(u)
    ineqs, eqs = fourier_motzkin(moved.ineqs, moved.eqs, p.dim - 1)
    return RationalPolyhedron(p.dim - 1, ineqs, eqs)


def end_projection(p: RationalPolyhedron, v: Sequence[int]) -> tuple[IntMatrix, RationalPolyhedron]:
    """Tropical part of the End component of ``p`` in direction ``v``.

    Returns ``(u, p_v)`` where ``u @ v = (0, ..., 0, content(v))`` and ``p_v``
    is the image of ``u(p)`` after forgetting the last coordinate.
    """
    v = tuple(int(x) for x in v)
    if len(v) != p.dim:
        raise ValueError("direction has the wrong dimension")
    if not any(v):
        raise ZeroVectorError("v = 0 is the identity component; use end_component")
    if not recession_contains(p, v):
        raise NoRayError(f"no infinite ray in direction {list(v)}")
    u = extension_basis(v)
    return u, project_along(p, u)


def end_component(p: RationalPolyhedron, v: Sequence[int]) -> RationalPolyhedron:
    """``p`` itself for ``v = 0``, otherwise the projection from :func:`end_projection`."""
    if not any(v):
        if p.is_empty():
            raise EmptyPolyhedronError("polyhedron is empty")
        return p
    return end_projection(p, v)[1]


# ---------------------------------------------------------------------------
# Refinements


@dataclass(frozen=True)
class Refinement:
    coarse: tuple[RationalPolyhedron, ...]
    fine: tuple[RationalPolyhedron, ...]
    assignment: tuple[int, ...]


@dataclass(frozen=True)
class Violation:
    kind: str  # "bad_assignment" | "not_contained" | "interior_overlap" | "cover_gap"
    cells: tuple[int, ...]
    detail: str = ""
    witness: tuple[Fraction, ...] | None = None


def _relint_form(p: RationalPolyhedron):
    implicit = p.implicit_equalities()
    strict = [c for i, c in enumerate(p.ineqs) if i not in implicit]
    eqs = list(p.eqs) + [p.ineqs[i] for i in sorted(implicit)]
    return strict, eqs


def interiors_meet(a: RationalPolyhedron, b: RationalPolyhedron):
    """A point in both relative interiors, or ``None``."""
    sa, ea = _relint_form(a)
    sb, eb = _relint_form(b)
    got = lp.max_slack(a.dim, sa + sb, ea + eb)
    if got is None or ((sa or sb) and got[0] <= 0):
        return None
    return got[1]


def uncovered_point(cell: RationalPolyhedron, pieces: Sequence[RationalPolyhedron]):
    """A relative-interior point of ``cell`` outside every piece, or ``None``.

    Exact region subtraction: the part of ``cell`` not yet covered is kept
    as a list of regions (extra constraints); subtracting a piece splits each
    region along the piece's constraints. Regions with empty interior
    (relative to ``cell``) are pruned, so lower-dimensional slivers never
    count as gaps. Closed pieces that cover ``cell`` up to measure zero cover
    it entirely, so this is a complete test.
    """
    strict, eqs = _relint_form(cell)
    if lp.max_slack(cell.dim, strict, eqs) is None:
        return None  # empty cell

    def interior(extra):
        got = lp.max_slack(cell.dim, strict + extra, eqs)
        if got is None or ((strict or extra) and got[0] <= 0):
            return None
        return got[1]

    regions = [[]]
    for piece in pieces:
        halves = list(piece.ineqs)
        for n, b in piece.eqs:
            halves.append((n, b))
            halves.append((tuple(-x for x in n), -b))
        nxt = []
        for extra in regions:
            prefix = []
            for n, b in halves:
                cand = extra + prefix + [(tuple(-x for x in n), -b)]
                if interior(cand) is not None:
                    nxt.append(cand)
                prefix.append((n, b))
        regions = nxt
        if not regions:
            return None
    for extra in regions:
        pt = interior(extra)
        if pt is not None:
            return pt
    return None


def refinement_check(r: Refinement) -> list[Violation]:
    """All violated refinement invariants (empty list means OK)."""
    out = []
    if len(r.assignment) != len(r.fine):
        out.append(Violation("bad_assignment", (), "assignment length differs from number of fine cells"))
        return out
    groups: dict[int, list[int]] = {i: [] for i in range(len(r.coarse))}
    for f, c in enumerate(r.assignment):
        if c not in groups:
            out.append(Violation("bad_assignment", (f,), f"fine cell {f} assigned to missing coarse cell {c}"))
            continue
        if r.fine[f].dim != r.coarse[c].dim:
            out.append(Violation("bad_assignment", (f, c), "dimension mismatch"))
            continue
        groups[c].append(f)
        if not contained_in(r.fine[f], r.coarse[c]):
            out.append(Violation("not_contained", (f, c), f"fine cell {f} is not inside coarse cell {c}"))
    for c, members in groups.items():
        for f, g in combinations(members, 2):
            pt = interiors_meet(r.fine[f], r.fine[g])
            if pt is not None:
                out.append(Violation("interior_overlap", (f, g), f"fine cells {f} and {g} overlap", pt))
        pt = uncovered_point(r.coarse[c], [r.fine[f] for f in members])
        if pt is not None:
            out.append(Violation("cover_gap", (c,), f"coarse cell {c} is not covered", pt))
    return out


# ---------------------------------------------------------------------------
# Charted integral affine complexes


@dataclass(frozen=True)
class Gluing:
    """Identify facet ``facet_a`` of chart ``chart_a`` with facet ``facet_b`` of chart ``chart_b``
    via ``x -> linear @ x + translate``."""

    chart_a: int
    facet_a: int
    chart_b: int
    facet_b: int
    linear: IntMatrix
    translate: tuple[Fraction, ...] = ()

    def __post_init__(self):
        t = tuple(Fraction(x) for x in self.translate) or (Fraction(0),) * self.linear.cols
        object.__setattr__(self, "translate", t)

    def inverse(self) -> Gluing:
        inv = self.linear.inverse_unimodular()
        t = tuple(-x for x in _matvec(inv, self.translate))
        return Gluing(self.chart_b, self.facet_b, self.chart_a, self.facet_a, inv, t)


def _matvec(m: IntMatrix, x):
    return tuple(sum((m[i, j] * x[j] for j in range(m.cols)), Fraction(0)) for i in range(m.rows))


@dataclass(frozen=True)
class ChartedComplex:
    charts: tuple[RationalPolyhedron, ...]
    gluings: tuple[Gluing, ...]

    def with_reverses(self) -> ChartedComplex:
        """Append the inverse of every gluing that lacks one."""
        extra = []
        for g in self.gluings:
            if not any((h.chart_a, h.facet_a, h.chart_b, h.facet_b) == (g.chart_b, g.facet_b, g.chart_a, g.facet_a)
                       for h in self.gluings + tuple(extra)):
                extra.append(g.inverse())
        return ChartedComplex(self.charts, self.gluings + tuple(extra))


def complex_violations(c: ChartedComplex) -> list[str]:
    out = []
    for k, g in enumerate(c.gluings):
        if not (0 <= g.chart_a < len(c.charts) and 0 <= g.chart_b < len(c.charts)):
            out.append(f"gluing {k}: chart index out of range")
            continue
        pa, pb = c.charts[g.chart_a], c.charts[g.chart_b]
        if not (0 <= g.facet_a < len(pa.ineqs) and 0 <= g.facet_b < len(pb.ineqs)):
            out.append(f"gluing {k}: facet index out of range")
            continue
        if not g.linear.is_unimodular():
            out.append(f"gluing {k}: linear part is not unimodular")
            continue
        fa = pa.with_equalities([g.facet_a]).transformed(g.linear, g.translate)
        fb = pb.with_equalities([g.facet_b])
        if not same_set(fa, fb):
            out.append(f"gluing {k}: facet {g.facet_a} of chart {g.chart_a} is not carried onto "
                       f"facet {g.facet_b} of chart {g.chart_b}")
        for j, h in enumerate(c.gluings):
            if (h.chart_a, h.facet_a, h.chart_b, h.facet_b) == (g.chart_b, g.facet_b, g.chart_a, g.facet_a):
                inv = g.inverse()
                if h.linear != inv.linear or h.translate != inv.translate:
                    out.append(f"gluings {k} and {j} are not mutually inverse")
    return out


def transition(c: ChartedComplex, path: Sequence[tuple[int, int]]) -> IntMatrix:
    """Composite linear part along ``path`` of ``(chart, gluing)`` steps."""
    dim = c.charts[0].dim if c.charts else 0
    total = IntMatrix.identity(dim)
    current = path[0][0] if path else None
    for step, (chart, gi) in enumerate(path):
        if not 0 <= gi < len(c.gluings):
            raise BrokenPathError(f"step {step}: no gluing {gi}")
        g = c.gluings[gi]
        if chart != current or g.chart_a != chart:
            raise BrokenPathError(
                f"step {step}: gluing {gi} starts in chart {g.chart_a}, path is in chart {current}"
            )
        total = g.linear @ total
        current = g.chart_b
    return total


def continue_direction(c: ChartedComplex, path: Sequence[tuple[int, int]], d: Sequence[int]) -> LatticeVector:
    """Carry the integral direction ``d`` across the gluings of ``path``."""
    if not path:
        return tuple(int(x) for x in d)
    return transition(c, path) @ tuple(int(x) for x in d)


def cut_plane_complex() -> ChartedComplex:
    """The plane cut along the ray through (1,0), subdivided by rays through (0,1) and (-1,-1).

    Charts: 0 = cone((1,0),(0,1)), 1 = cone((0,1),(-1,-1)), 2 = cone((-1,-1),(1,0)).
    Crossing the cut from chart 2 into chart 0 fixes (1,0) and sends (0,1) to
    (1,1), so chart 2 becomes cone((1,0),(-2,-1)) next to chart 0.
    Gluings 0..2 go 0->1->2->0; gluings 3..5 are their inverses.
    """
    f = Fraction
    charts = (
        RationalPolyhedron(2, (((1, 0), f(0)), ((0, 1), f(0)))),
        RationalPolyhedron(2, (((-1, 0), f(0)), ((-1, 1), f(0)))),
        RationalPolyhedron(2, (((0, -1), f(0)), ((1, -1), f(0)))),
    )
    ident = IntMatrix.identity(2)
    shear = IntMatrix.from_rows([[1, 1], [0, 1]])
    forward = (
        Gluing(0, 0, 1, 0, ident),
        Gluing(1, 1, 2, 1, ident),
        Gluing(2, 0, 0, 1, shear),
    )
    return ChartedComplex(charts, forward).with_reverses()
