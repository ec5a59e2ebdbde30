"""Exact rational tensors stored as integer arrays over a common denominator.

A :class:`ZT` holds ``data / den`` with ``data`` an int64 array whenever every
intermediate result is provably below 2**62 in absolute value, and an object
array of Python ints otherwise.  The bound is checked before each operation,
so the fast path never wraps around.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm, prod

import numpy as np

LIMIT = 1 << 62


def _maxabs(data: np.ndarray) -> int:
    if data.size == 0:
        return 0
    if data.dtype == object:
        return int(max(abs(int(x)) for x in data.flat))
    return int(np.abs(data).max())


def _to_object(data: np.ndarray) -> np.ndarray:
    if data.dtype == object:
        return data
    out = np.empty(data.shape, dtype=object)
    out.flat[:] = [int(x) for x in data.flat]
    return out


def _shrink(data: np.ndarray) -> np.ndarray:
    if data.dtype == object and _maxabs(data) < LIMIT:
        return data.astype(np.int64)
    return data


class ZT:
    __slots__ = ("data", "den")

    def __init__(self, data: np.ndarray, den: int = 1):
        if den <= 0:
            raise ValueError("denominator must be positive")
        self.data = data
        self.den = int(den)

    # -- construction -----------------------------------------------------

    @classmethod
    def zeros(cls, shape) -> "ZT":
        return cls(np.zeros(tuple(shape), dtype=np.int64))

    @classmethod
    def from_exact(cls, values) -> "ZT":
        """From a nested list / array of ints, Fractions or rational strings."""
        arr = np.array(values, dtype=object)
        flat = [x if isinstance(x, (int, Fraction)) else Fraction(x) for x in arr.flat]
        den = lcm(*(x.denominator if isinstance(x, Fraction) else 1 for x in flat)) if flat else 1
        ints = [int(x * den) for x in flat]
        data = np.empty(arr.shape, dtype=object)
        data.flat[:] = ints
        return cls(_shrink(data), den).reduced()

    # -- basic properties ---------------------------------------------------

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    def is_zero(self) -> bool:
        return not self.data.any()

    def nonzero_count(self) -> int:
        return int(np.count_nonzero(self.data))

    def to_fractions(self) -> np.ndarray:
        out = np.empty(self.shape, dtype=object)
        d = self.den
        out.flat[:] = [Fraction(int(x), d) for x in self.data.flat]
        return out

    def item(self, idx) -> Fraction:
        return Fraction(int(self.data[idx]), self.den)

    def reduced(self) -> "ZT":
        if self.den == 1 or self.data.size == 0:
            return self if self.data.size else ZT(self.data, 1)
        if self.data.dtype == object:
            g = 0
            for x in self.data.flat:
                g = gcd(g, int(x))
                if g == 1:
                    return self
        else:
            g = int(np.gcd.reduce(self.data, axis=None))
        g = gcd(g, self.den)
        if g <= 1:
            return self
        return ZT(self.data // g, self.den // g)

    # -- arithmetic ------------------------------------------------------------

    def _rescaled_pair(self, other: "ZT"):
        L = lcm(self.den, other.den)
        fa, fb = L // self.den, L // other.den
        a, b = self.data, other.data
        if a.dtype != object and b.dtype != object:
            if _maxabs(a) * fa + _maxabs(b) * fb >= LIMIT:
                a, b = _to_object(a), _to_object(b)
        else:
            a, b = _to_object(a), _to_object(b)
        if fa != 1:
            a = a * fa
        if fb != 1:
            b = b * fb
        return a, b, L

    def __add__(self, other: "ZT") -> "ZT":
        a, b, L = self._rescaled_pair(other)
        return ZT(a + b, L)

    def __sub__(self, other: "ZT") -> "ZT":
        a, b, L = self._rescaled_pair(other)
        return ZT(a - b, L)

    def __neg__(self) -> "ZT":
        return ZT(-self.data, self.den)

    def scale(self, c) -> "ZT":
        c = Fraction(c)
        if c == 0:
            return ZT(np.zeros(self.shape, dtype=np.int64))
        num, den = c.numerator, c.denominator
        data = self.data
        if data.dtype != object and _maxabs(data) * abs(num) >= LIMIT:
            data = _to_object(data)
        return ZT(data * num if num != 1 else data, self.den * den)

    def tdot(self, other: "ZT", axes) -> "ZT":
        """Exact ``np.tensordot(self, other, axes)``."""
        ax_a, ax_b = axes
        if isinstance(ax_a, int):
            ax_a, ax_b = [ax_a], [ax_b]
        k = prod(self.shape[i] for i in ax_a)
        a, b = self.data, other.data
        if a.dtype != object and b.dtype != object:
            if _maxabs(a) * _maxabs(b) * max(k, 1) >= LIMIT:
                a, b = _to_object(a), _to_object(b)
        else:
            a, b = _to_object(a), _to_object(b)
        return ZT(np.tensordot(a, b, axes=(list(ax_a), list(ax_b))), self.den * other.den)

    # -- shape manipulation ------------------------------------------------------

    def moveaxis(self, src, dst) -> "ZT":
        return ZT(np.moveaxis(self.data, src, dst), self.den)

    def transpose(self, perm) -> "ZT":
        return ZT(np.transpose(self.data, perm), self.den)

    def reshape(self, shape) -> "ZT":
        return ZT(self.data.reshape(shape), self.den)

    def __getitem__(self, idx) -> "ZT":
        return ZT(self.data[idx], self.den)

    def take(self, indices, axis) -> "ZT":
        return ZT(np.take(self.data, indices, axis=axis), self.den)

    def contiguous(self) -> "ZT":
        return ZT(np.ascontiguousarray(self.data), self.den)

    def __repr__(self):
        return f"ZT(shape={self.shape}, den={self.den}, dtype={self.data.dtype})"


def zsum(terms, shape) -> ZT:
    """Sum of ZT terms with a common shape; zero tensor if empty."""
    out = None
    for t in terms:
        out = t if out is None else out + t
    if out is None:
        return ZT.zeros(shape)
    return out.reduced()


def stack(ts: list[ZT], axis: int = 0) -> ZT:
    L = lcm(*(t.den for t in ts)) if ts else 1
    parts = []
    obj = any(t.data.dtype == object for t in ts)
    for t in ts:
        f = L // t.den
        d = _to_object(t.data) if obj else t.data
        if not obj and _maxabs(d) * f >= LIMIT:
            return stack([ZT(_to_object(x.data), x.den) for x in ts], axis)
        parts.append(d * f if f != 1 else d)
    return ZT(np.stack(parts, axis=axis), L)


def assemble(shape, pieces) -> ZT:
    """A tensor of the given shape filled from (index, ZT) pieces; the rest is zero."""
    pieces = list(pieces)
    L = lcm(*(t.den for _, t in pieces)) if pieces else 1
    obj = any(t.data.dtype == object for _, t in pieces)
    if not obj:
        obj = any(_maxabs(t.data) * (L // t.den) >= LIMIT for _, t in pieces)
    out = np.zeros(tuple(shape), dtype=object if obj else np.int64)
    if obj:
        out[...] = 0
    for idx, t in pieces:
        d = _to_object(t.data) if obj else t.data
        f = L // t.den
        out[idx] = d * f if f != 1 else d
    return ZT(out, L).reduced()
