"""Exact integer and rational linear algebra.

Everything here works on Python ints (arbitrary precision) and
``fractions.Fraction``; there is no floating point anywhere. Matrices are
immutable :class:`IntMatrix` values and vectors are plain tuples of ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, prod
from typing import Iterable, Sequence

from .errors import InfeasibleError

LatticeVector = tuple[int, ...]
RationalVector = tuple[Fraction, ...]


class _Infinite:
    """Sentinel for an infinite cokernel / component count."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix shape must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def column(cls, v: Sequence[int]) -> IntMatrix:
        return cls(len(v), 1, tuple(int(x) for x in v))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> LatticeVector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> LatticeVector:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(x for j in range(self.cols) for x in self.col(j)))

    T = property(transpose)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
            cols = [other.col(j) for j in range(other.cols)]
            return IntMatrix(
                self.rows,
                other.cols,
                tuple(_dot(self.row(i), c) for i in range(self.rows) for c in cols),
            )
        v = tuple(other)
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(_dot(self.row(i), v) for i in range(self.rows))

    def stack(self, other: IntMatrix) -> IntMatrix:
        """Vertical concatenation."""
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det(self.to_rows())

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.det()) == 1

    def inverse_unimodular(self) -> IntMatrix:
        """Exact inverse of a unimodular matrix (raises if not unimodular)."""
        if not self.is_unimodular():
            raise ValueError("matrix is not unimodular")
        inv = rational_inverse(self.to_rows())
        return IntMatrix.from_rows([[int(x) for x in r] for r in inv], cols=self.cols)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def bareiss_det(rows: list[list[int]]) -> int:
    """Fraction-free determinant."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rational_inverse(rows: list[list[int]]) -> list[list[Fraction]]:
    n = len(rows)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [r[n:] for r in aug]


def content(v: Iterable[int]) -> int:
    """gcd of the absolute values of the entries; 0 for the zero vector."""
    return reduce(gcd, (abs(int(x)) for x in v), 0)


def primitive(v: Sequence[int]) -> LatticeVector:
    c = content(v)
    return tuple(v) if c == 0 else tuple(int(x) // c for x in v)


# ---------------------------------------------------------------------------
# Normal forms


def hnf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``h == u @ m``, ``u`` unimodular, ``h`` in row
    echelon form with positive pivots and the entries above each pivot
    reduced into ``[0, pivot)``.
    """
    a = m.to_rows()
    u = IntMatrix.identity(m.rows).to_rows()
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        while True:
            nz = [i for i in range(r, m.rows) if a[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(a[i][c]), i))
            a[r], a[p] = a[p], a[r]
            u[r], u[p] = u[p], u[r]
            clean = True
            for i in range(r + 1, m.rows):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    _axpy(a[i], a[r], -q)
                    _axpy(u[i], u[r], -q)
                    if a[i][c]:
                        clean = False
            if clean:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                _axpy(a[i], a[r], -q)
                _axpy(u[i], u[r], -q)
        r += 1
    return IntMatrix.from_rows(a, m.cols), IntMatrix.from_rows(u, m.rows)


def _axpy(y, x, k):
    for j, xv in enumerate(x):
        if xv:
            y[j] += k * xv


@dataclass(frozen=True)
class SnfResult:
    """``d`` is the invariant-factor diagonal, ``u @ m @ v`` is diagonal with it."""

    d: tuple[int, ...]
    u: IntMatrix
    v: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for x in self.d if x)

    def diagonal_matrix(self) -> IntMatrix:
        rows, cols = self.u.rows, self.v.cols
        return IntMatrix(
            rows,
            cols,
            tuple(self.d[i] if i == j else 0 for i in range(rows) for j in range(cols)),
        )


def snf(m: IntMatrix) -> SnfResult:
    """Smith normal form with transforms: ``u @ m @ v == diag(d)``."""
    rows, cols = m.rows, m.cols
    a = m.to_rows()
    u = IntMatrix.identity(rows).to_rows()
    vt = IntMatrix.identity(cols).to_rows()  # transpose of v: column ops become row ops

    def col_op(dst, src, k):
        # column dst += k * column src
        for row in a:
            row[dst] += k * row[src]
        _axpy(vt[dst], vt[src], k)

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        vt[i], vt[j] = vt[j], vt[i]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        u[t], u[pi] = u[pi], u[t]
        col_swap(t, pj)
        while True:
            changed = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    _axpy(a[i], a[t], -q)
                    _axpy(u[i], u[t], -q)
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        u[t], u[i] = u[i], u[t]
                        changed = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_op(j, t, -q)
                    if a[t][j]:
                        col_swap(t, j)
                        changed = True
            if changed:
                continue
            piv = a[t][t]
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            _axpy(a[t], a[bad], 1)
            _axpy(u[t], u[bad], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    d = tuple(a[i][i] for i in range(min(rows, cols)))
    return SnfResult(d, IntMatrix.from_rows(u, rows), IntMatrix.from_rows(vt, cols).transpose())


def rank(m: IntMatrix) -> int:
    h, _ = hnf(m)
    return sum(1 for i in range(h.rows) if any(h.row(i)))


def cokernel_order(m: IntMatrix):
    """Order of ``Z^rows / m(Z^cols)``: an int, or :data:`INFINITE`."""
    res = snf(m)
    if res.rank < m.rows:
        return INFINITE
    return prod(x for x in res.d if x)


def kernel_basis(m: IntMatrix) -> list[LatticeVector]:
    """Basis of the saturated kernel ``{x in Z^cols : m x = 0}``, in HNF."""
    h, u = hnf(m.transpose())
    r = sum(1 for i in range(h.rows) if any(h.row(i)))
    if r == h.rows:
        return []
    k = IntMatrix.from_rows([u.row(i) for i in range(r, h.rows)], m.cols)
    kh, _ = hnf(k)
    return [kh.row(i) for i in range(kh.rows)]


# ---------------------------------------------------------------------------
# Rational solving


@dataclass(frozen=True)
class RationalSolution:
    particular: RationalVector
    kernel: tuple[LatticeVector, ...]


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    a = [list(r) for r in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def solve_rational(m: IntMatrix, b: Sequence) -> RationalSolution:
    """Solve ``m x = b`` over Q.

    Free variables are set to zero in the particular solution. Raises
    :class:`InfeasibleError` when the system is inconsistent.
    """
    b = [Fraction(x) for x in b]
    if len(b) != m.rows:
        raise ValueError("right-hand side length mismatch")
    aug = [[Fraction(x) for x in m.row(i)] + [b[i]] for i in range(m.rows)]
    red, pivots = rref(aug)
    if m.cols in pivots:
        raise InfeasibleError("inconsistent linear system")
    x = [Fraction(0)] * m.cols
    for i, c in enumerate(pivots):
        x[c] = red[i][m.cols]
    return RationalSolution(tuple(x), tuple(kernel_basis(m)))
