"""Small Leibniz algebras used throughout the tests and the CLI examples."""

from __future__ import annotations

from dataclasses import dataclass

from .exactla import Subspace
from .leibniz import LeftRepresentation, LeibnizAlgebra, LieAlgebra


@dataclass(frozen=True)
class LeibnizTriple:
    """A Leibniz algebra with an isotropic ideal H and an H-trivial representation."""
    name: str
    algebra: LeibnizAlgebra
    h: Subspace
    rep: LeftRepresentation


def _tensor(n):
    return [[[0] * n for _ in range(n)] for _ in range(n)]


def nilpotent2() -> LeibnizTriple:
    """e1 o e1 = e2, everything else zero; H = span{e2}, trivial V = k."""
    c = _tensor(2)
    c[0][0][1] = 1
    L = LeibnizAlgebra(2, c, ("e1", "e2"))
    return LeibnizTriple("nilpotent2", L, Subspace.span([[0, 1]], 2), LeftRepresentation.trivial(2))


def heisenberg() -> LeibnizTriple:
    """[x, y] = z with H the center and trivial V = k."""
    c = _tensor(3)
    c[0][1][2] = 1
    c[1][0][2] = -1
    L = LeibnizAlgebra(3, c, ("x", "y", "z"))
    return LeibnizTriple("heisenberg", L, Subspace.span([[0, 0, 1]], 3), LeftRepresentation.trivial(3))


def omni_lie(d: int) -> LeibnizTriple:
    """gl(V) + V with (A + v) o (B + w) = [A, B] + A w, V the standard module."""
    n = d * d + d
    gl = [(a, b) for a in range(d) for b in range(d)]
    idx = {ab: i for i, ab in enumerate(gl)}
    c = _tensor(n)
    for (a, b), i in idx.items():
        for (cc, dd), j in idx.items():
            if b == cc:
                c[i][j][idx[(a, dd)]] += 1
            if dd == a:
                c[i][j][idx[(cc, b)]] -= 1
        for k in range(d):
            if b == k:
                c[i][d * d + k][d * d + a] += 1
    labels = tuple(f"E{a + 1}{b + 1}" for a, b in gl) + tuple(f"v{k + 1}" for k in range(d))
    L = LeibnizAlgebra(n, c, labels)
    h = Subspace.span([[int(i == d * d + k) for i in range(n)] for k in range(d)], n)
    action = []
    for (a, b) in gl:
        action.append([[int(r == a and s == b) for s in range(d)] for r in range(d)])
    for _ in range(d):
        action.append([[0] * d for _ in range(d)])
    return LeibnizTriple(f"omni{d}", L, h, LeftRepresentation(d, tuple(action)))


def abelian_lie(n: int, dim_v: int = 1) -> LieAlgebra:
    z = [[[0] * n for _ in range(n)] for _ in range(n)]
    return LieAlgebra(n, z, dim_v, tuple([[0] * dim_v for _ in range(dim_v)] for _ in range(n)))


def sl2() -> LieAlgebra:
    """Basis e, f, h with [e,f]=h, [h,e]=2e, [h,f]=-2f; trivial coefficients."""
    c = _tensor(3)
    e, f, h = 0, 1, 2
    c[e][f][h], c[f][e][h] = 1, -1
    c[h][e][e], c[e][h][e] = 2, -2
    c[h][f][f], c[f][h][f] = -2, 2
    return LieAlgebra(3, c, 1, tuple([[0]] for _ in range(3)))


def line_identity() -> LieAlgebra:
    """One-dimensional Lie algebra acting on k by the identity."""
    return LieAlgebra(1, [[[0]]], 1, ([[1]],))


def leibniz_fixtures() -> list[LeibnizTriple]:
    return [nilpotent2(), omni_lie(1), omni_lie(2), heisenberg()]
