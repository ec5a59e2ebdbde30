"""Exact rational linear algebra: dense matrices, echelon forms, subspaces.

Everything is over Q using :class:`fractions.Fraction`.  Elimination is
fraction-free (Bareiss) on integer-scaled rows followed by back-substitution,
and the pivot is always the first nonzero entry in column order, so results
are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Q = Fraction


def q(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(c in s for c in ".eE"):
            raise ValueError(f"not an exact rational: {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def fmt_q(x) -> str:
    x = q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_q(s: str) -> Fraction:
    if not isinstance(s, str):
        raise ValueError(f"rationals must be strings, got {s!r}")
    return q(s)


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple  # row-major tuple of Fractions

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError("entries length does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionError("cannot infer column count of an empty matrix")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
        return cls(len(rows), cols, tuple(q(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, (Q(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, tuple(Q(int(i == j)) for i in range(n) for j in range(n)))

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows,
                           tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def matvec(self, v: Sequence) -> list[Fraction]:
        if len(v) != self.cols:
            raise DimensionError("vector length does not match column count")
        return [sum((a * b for a, b in zip(self.row(i), v) if a and b), Q(0))
                for i in range(self.rows)]

    def matmul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise DimensionError("inner dimensions differ")
        cols = [other.transpose().row(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(sum((a * b for a, b in zip(r, c) if a and b), Q(0)) for c in cols)
        return ExactMatrix(self.rows, other.cols, tuple(out))


def _as_rows(m) -> list[list[Fraction]]:
    if isinstance(m, ExactMatrix):
        return m.to_rows()
    return [[q(x) for x in r] for r in m]


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    d = lcm(*(x.denominator for x in row)) if row else 1
    return [int(x * d) for x in row]


def echelon(rows: Sequence[Sequence], cols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row-echelon form (nonzero rows only) and the pivot columns."""
    rows = [list(r) for r in _as_rows(rows)]
    if not rows:
        return [], []
    ncols = len(rows[0]) if cols is None else cols
    a = [_integer_row(r) for r in rows]
    # fraction-free forward elimination
    pivots: list[int] = []
    r = 0
    prev = 1
    nrows = len(a)
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pr = a[r]
        pv = pr[c]
        for i in range(r + 1, nrows):
            ri = a[i]
            f = ri[c]
            if f == 0:
                if pv != prev:
                    a[i] = [(x * pv) // prev for x in ri]
                continue
            a[i] = [(x * pv - f * y) // prev for x, y in zip(ri, pr)]
        prev = pv
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    # back-substitution to reduced form
    red = [[Q(x, a[i][pivots[i]]) for x in a[i]] for i in range(len(pivots))]
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        ri = red[i]
        for j in range(i):
            f = red[j][c]
            if f:
                red[j] = [x - f * y for x, y in zip(red[j], ri)]
    return red, pivots


def rank(m) -> int:
    return len(echelon(m)[1])


def nullspace(m) -> "Subspace":
    rows = _as_rows(m)
    cols = m.cols if isinstance(m, ExactMatrix) else (len(rows[0]) if rows else 0)
    red, pivots = echelon(rows, cols)
    pivset = set(pivots)
    free = [c for c in range(cols) if c not in pivset]
    basis = []
    for f in free:
        v = [Q(0)] * cols
        v[f] = Q(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(v)
    return Subspace.span(basis, cols)


def solve(m, b: Sequence) -> list[Fraction] | None:
    """Some x with m x = b, free variables set to zero; None if inconsistent."""
    rows = _as_rows(m)
    cols = m.cols if isinstance(m, ExactMatrix) else (len(rows[0]) if rows else 0)
    if len(b) != len(rows):
        raise DimensionError("right-hand side length does not match row count")
    aug = [r + [q(x)] for r, x in zip(rows, b)]
    red, pivots = echelon(aug, cols + 1)
    if pivots and pivots[-1] == cols:
        return None
    x = [Q(0)] * cols
    for i, p in enumerate(pivots):
        x[p] = red[i][cols]
    return x


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple  # tuple of row tuples in reduced echelon form
    pivots: tuple

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        vecs = [[q(x) for x in v] for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise DimensionError("vector length does not match ambient dimension")
        if not vecs:
            return cls(ambient_dim, (), ())
        red, piv = echelon(vecs, ambient_dim)
        return cls(ambient_dim, tuple(tuple(r) for r in red), tuple(piv))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(tuple(Q(int(i == j)) for j in range(n)) for i in range(n)), tuple(range(n)))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, (), ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> ExactMatrix:
        return ExactMatrix(self.dim, self.ambient_dim, tuple(x for r in self.basis for x in r))

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError("ambient dimensions differ")

    def reduce(self, v: Sequence) -> list[Fraction]:
        """Remainder of v after clearing the pivot coordinates of this subspace."""
        v = [q(x) for x in v]
        for row, p in zip(self.basis, self.pivots):
            f = v[p]
            if f:
                v = [x - f * y for x, y in zip(v, row)]
        return v

    def contains_vector(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionError("vector length does not match ambient dimension")
        return not any(self.reduce(v))

    def coordinates(self, v: Sequence) -> list[Fraction] | None:
        """Coefficients of v in the echelon basis, or None if v is outside."""
        if not self.contains_vector(v):
            return None
        return [q(v[p]) for p in self.pivots]

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains_vector(v) for v in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(list(self.basis) + list(other.basis), self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if not self.basis or not other.basis:
            return Subspace.zero(self.ambient_dim)
        # x A = y B  <=>  (x, -y) in the left kernel of [A; B]
        stacked = [list(r) for r in self.basis] + [[-x for x in r] for r in other.basis]
        ker = nullspace(ExactMatrix.from_rows(stacked).transpose())
        vecs = []
        for coeffs in ker.basis:
            vecs.append([sum((c * r[j] for c, r in zip(coeffs, self.basis) if c), Q(0))
                         for j in range(self.ambient_dim)])
        return Subspace.span(vecs, self.ambient_dim)

    def quotient_dim(self, other: "Subspace") -> int:
        """dim(self / other); other must be contained in self."""
        self._check(other)
        if not self.contains(other):
            raise DimensionError("quotient of a subspace by a non-contained subspace")
        return self.dim - other.dim

    def complement_by_standard_vectors(self) -> list[int]:
        """Indices of standard basis vectors completing this subspace (greedy)."""
        return [i for i in range(self.ambient_dim) if i not in set(self.pivots)]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))
