"""Exact rational linear programming (two-phase tableau simplex, Bland's rule).

Problems are stated over free variables ``x in Q^dim``::

    maximize  <objective, x>
    s.t.      <a, x> >= b   for (a, b) in ineqs
              <a, x>  = b   for (a, b) in eqs

Bland's rule guarantees termination; all arithmetic is in ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None


Constraint = tuple[Sequence, Fraction]


def maximize(objective: Sequence, ineqs: Sequence[Constraint] = (), eqs: Sequence[Constraint] = ()) -> LPResult:
    dim = len(objective)
    rows = []
    # columns: x+ (dim), x- (dim), surplus (len(ineqs))
    nsur = len(ineqs)
    for k, (a, b) in enumerate(ineqs):
        row = _split(a, dim) + [Fraction(-1) if j == k else Fraction(0) for j in range(nsur)]
        rows.append((row, Fraction(b)))
    for a, b in eqs:
        rows.append((_split(a, dim) + [Fraction(0)] * nsur, Fraction(b)))
    nvar = 2 * dim + nsur
    cost = [Fraction(-c) for c in objective] + [Fraction(c) for c in objective] + [Fraction(0)] * nsur

    status, tab, basis = _phase_one(rows, nvar)
    if status == INFEASIBLE:
        return LPResult(INFEASIBLE)
    status = _simplex(tab, basis, cost, nvar)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    z = [Fraction(0)] * nvar
    for i, j in enumerate(basis):
        if j < nvar:
            z[j] = tab[i][-1]
    x = tuple(z[j] - z[dim + j] for j in range(dim))
    value = sum((Fraction(c) * xi for c, xi in zip(objective, x)), Fraction(0))
    return LPResult(OPTIMAL, value, x)


def feasible_point(dim: int, ineqs: Sequence[Constraint] = (), eqs: Sequence[Constraint] = ()):
    """A point satisfying the constraints, or ``None``."""
    res = maximize([0] * dim, ineqs, eqs)
    return res.point if res.status == OPTIMAL else None


def max_slack(dim: int, ineqs: Sequence[Constraint], eqs: Sequence[Constraint] = (), cap=1):
    """Maximize ``t`` subject to ``<a,x> >= b + t`` for every inequality, ``t <= cap``.

    Returns ``(t, x)`` or ``None`` if infeasible even at ``t`` unbounded below.
    The strict system ``<a,x> > b`` is feasible iff the returned ``t`` is positive.
    """
    lifted = [(list(a) + [-1], b) for a, b in ineqs]
    lifted.append(([0] * dim + [-1], -Fraction(cap)))
    res = maximize([0] * dim + [1], lifted, [(list(a) + [0], b) for a, b in eqs])
    if res.status != OPTIMAL:
        return None
    return res.value, res.point[:dim]


def _split(a, dim):
    a = [Fraction(x) for x in a]
    if len(a) != dim:
        raise ValueError("constraint dimension mismatch")
    return a + [-x for x in a]


def _phase_one(rows, nvar):
    m = len(rows)
    tab = []
    for i, (row, b) in enumerate(rows):
        if b < 0:
            row, b = [-x for x in row], -b
        tab.append(row + [Fraction(int(i == k)) for k in range(m)] + [b])
    basis = [nvar + i for i in range(m)]
    cost = [Fraction(0)] * nvar + [Fraction(1)] * m
    _simplex(tab, basis, cost, nvar + m)
    if any(tab[i][-1] != 0 for i, j in enumerate(basis) if j >= nvar):
        return INFEASIBLE, None, None
    # drive remaining (zero-level) artificials out of the basis
    keep = []
    for i, j in enumerate(basis):
        if j >= nvar:
            c = next((c for c in range(nvar) if tab[i][c] != 0), None)
            if c is None:
                continue  # redundant row
            _pivot(tab, basis, i, c)
        keep.append(i)
    tab = [tab[i][:nvar] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    return OPTIMAL, tab, basis


def _simplex(tab, basis, cost, ncols):
    """Minimize ``cost`` over the tableau in place; columns >= ncols are frozen."""
    while True:
        cb = [cost[j] for j in basis]
        entering = None
        for j in range(ncols):
            if j in basis:
                continue
            red = cost[j] - sum((cb[i] * tab[i][j] for i in range(len(tab)) if tab[i][j]), Fraction(0))
            if red < 0:
                entering = j
                break
        if entering is None:
            return OPTIMAL
        best = None
        for i, row in enumerate(tab):
            if row[entering] > 0:
                ratio = row[-1] / row[entering]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return UNBOUNDED
        _pivot(tab, basis, best[1], entering)


def _pivot(tab, basis, r, c):
    piv = tab[r][c]
    tab[r] = [x / piv for x in tab[r]]
    pr = tab[r]
    for i, row in enumerate(tab):
        if i != r and row[c] != 0:
            f = row[c]
            tab[i] = [x - f * y if y else x for x, y in zip(row, pr)]
    basis[r] = c
