"""Finite-dimensional Leibniz algebras given by structure constants.

A bracket tensor ``c`` means ``e_i o e_j = sum_k c[i][j][k] e_k`` and the
identity checked is the left Leibniz rule
``x o (y o z) = (x o y) o z + y o (x o z)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exactla import ExactMatrix, Subspace, echelon, nullspace, q, solve
from .report import ValidationError, ValidationReport

Vec = list


def _zero(n: int) -> Vec:
    return [Fraction(0)] * n


def _axpy(acc: Vec, a, x: Sequence) -> None:
    if a:
        for i, xi in enumerate(x):
            if xi:
                acc[i] += a * xi


def _matvec(m: Sequence[Sequence], v: Sequence) -> Vec:
    return [sum((a * b for a, b in zip(row, v) if a and b), Fraction(0)) for row in m]


def _matmul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][t] * b[t][j] for t in range(k) if a[i][t] and b[t][j]), Fraction(0))
             for j in range(m)] for i in range(n)]


def _freeze3(c) -> tuple:
    return tuple(tuple(tuple(q(x) for x in row) for row in plane) for plane in c)


def _freeze2(m) -> tuple:
    return tuple(tuple(q(x) for x in row) for row in m)


@dataclass(frozen=True)
class LeibnizAlgebra:
    dim: int
    bracket: tuple
    basis_labels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "bracket", _freeze3(self.bracket))
        _check_shape3(self.bracket, self.dim)

    def mul(self, x: Sequence, y: Sequence) -> Vec:
        out = _zero(self.dim)
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj:
                    _axpy(out, xi * yj, self.bracket[i][j])
        return out

    def basis_vector(self, i: int) -> Vec:
        v = _zero(self.dim)
        v[i] = Fraction(1)
        return v

    def left_matrix(self, x: Sequence) -> list[list[Fraction]]:
        """Matrix of y -> x o y (columns indexed by y)."""
        cols = [self.mul(x, self.basis_vector(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]


def _check_shape3(c, n):
    if len(c) != n or any(len(p) != n or any(len(r) != n for r in p) for p in c):
        raise ValueError(f"bracket tensor must have shape {n}x{n}x{n}")


@dataclass(frozen=True)
class LeftRepresentation:
    dim_v: int
    action: tuple  # action[i] is the dim_v x dim_v matrix of tau(e_i)

    def __post_init__(self):
        object.__setattr__(self, "action", tuple(_freeze2(m) for m in self.action))
        for m in self.action:
            if len(m) != self.dim_v or any(len(r) != self.dim_v for r in m):
                raise ValueError("representation matrices must be dim_v x dim_v")

    def act(self, x: Sequence) -> list[list[Fraction]]:
        out = [_zero(self.dim_v) for _ in range(self.dim_v)]
        for i, xi in enumerate(x):
            if xi:
                for r in range(self.dim_v):
                    _axpy(out[r], xi, self.action[i][r])
        return out

    @classmethod
    def trivial(cls, dim_l: int, dim_v: int = 1) -> "LeftRepresentation":
        z = [[0] * dim_v for _ in range(dim_v)]
        return cls(dim_v, tuple(z for _ in range(dim_l)))


@dataclass(frozen=True)
class LieAlgebra:
    dim: int
    bracket: tuple
    dim_v: int
    action_on_v: tuple
    # optional scalar layer for Lie-Rinehart quotients: R-action on g and on V
    r_action_g: tuple | None = None
    r_action_v: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "bracket", _freeze3(self.bracket))
        object.__setattr__(self, "action_on_v", tuple(_freeze2(m) for m in self.action_on_v))
        if self.r_action_g is not None:
            object.__setattr__(self, "r_action_g", tuple(_freeze2(m) for m in self.r_action_g))
            object.__setattr__(self, "r_action_v", tuple(_freeze2(m) for m in self.r_action_v))


# -- validation -------------------------------------------------------------

def validate_leibniz(c, dim: int | None = None) -> ValidationReport:
    """Report every basis triple violating the left Leibniz identity."""
    if isinstance(c, LeibnizAlgebra):
        alg = c
    else:
        n = len(c) if dim is None else dim
        alg = LeibnizAlgebra(n, c)
    rep = ValidationReport("leibniz")
    n = alg.dim
    b = alg.bracket
    rep.check("leibniz identity")
    bad = []
    for i in range(n):
        for j in range(n):
            bij = b[i][j]
            for k in range(n):
                bjk, bik = b[j][k], b[i][k]
                lhs = _zero(n)
                for l, t in enumerate(bjk):
                    _axpy(lhs, t, b[i][l])
                for l, t in enumerate(bij):
                    _axpy(lhs, -t, b[l][k])
                for l, t in enumerate(bik):
                    _axpy(lhs, -t, b[j][l])
                ok = not any(lhs)
                rep.record("leibniz identity", ok, (i, j, k))
                if not ok:
                    bad.append((i, j, k))
    rep.violations = bad
    return rep


def left_center(L: LeibnizAlgebra) -> Subspace:
    """Z = {z : z o e = 0 for every e}."""
    n = L.dim
    rows = []
    # z o e_j = sum_i z_i c[i][j]; one equation per (j, k)
    for j in range(n):
        for k in range(n):
            rows.append([L.bracket[i][j][k] for i in range(n)])
    if not rows:
        return Subspace.zero(0)
    z = nullspace(ExactMatrix.from_rows(rows, n))
    assert is_ideal(L, z), "left center is not an ideal"
    return z


def is_ideal(L: LeibnizAlgebra, s: Subspace) -> bool:
    return _ideal_witness(L, s) is None


def _ideal_witness(L: LeibnizAlgebra, s: Subspace):
    for hi, h in enumerate(s.basis):
        for j in range(L.dim):
            e = L.basis_vector(j)
            if not s.contains_vector(L.mul(e, h)):
                return ("left", j, hi)
            if not s.contains_vector(L.mul(h, e)):
                return ("right", hi, j)
    return None


def sym_pairing(L: LeibnizAlgebra, x: Sequence, y: Sequence) -> Vec:
    """(x, y) = x o y + y o x."""
    a, b = L.mul(x, y), L.mul(y, x)
    return [s + t for s, t in zip(a, b)]


def validate_h_ideal(L: LeibnizAlgebra, H: Subspace) -> ValidationReport:
    if H.ambient_dim != L.dim:
        raise ValueError("H lives in a space of the wrong dimension")
    rep = ValidationReport("h-ideal")
    z = left_center(L)
    for zi, v in enumerate(z.basis):
        if not rep.record("contains left center", H.contains_vector(v), ("center vector", zi)):
            break
    rep.check("contains left center")
    rep.check("isotropic")
    for a, u in enumerate(H.basis):
        for b, w in enumerate(H.basis[a:], start=a):
            if not rep.record("isotropic", not any(sym_pairing(L, u, w)), ("H basis", a, b)):
                break
    rep.check("two-sided ideal")
    w = _ideal_witness(L, H)
    rep.record("two-sided ideal", w is None, w)
    return rep


def validate_h_representation(L: LeibnizAlgebra, H: Subspace, V: LeftRepresentation) -> ValidationReport:
    if len(V.action) != L.dim:
        raise ValueError("representation has the wrong number of matrices")
    rep = ValidationReport("h-representation")
    rep.check("homomorphism")
    for i in range(L.dim):
        for j in range(L.dim):
            lhs = V.act(L.bracket[i][j])
            ti, tj = V.action[i], V.action[j]
            a, b = _matmul(ti, tj), _matmul(tj, ti)
            ok = all(lhs[r][s] == a[r][s] - b[r][s] for r in range(V.dim_v) for s in range(V.dim_v))
            rep.record("homomorphism", ok, (i, j))
    rep.check("H-trivial")
    for hi, h in enumerate(H.basis):
        rep.record("H-trivial", not any(x for r in V.act(h) for x in r), ("H basis", hi))
    return rep


def validate_lie(g: LieAlgebra) -> ValidationReport:
    """Antisymmetry and Jacobi (the Leibniz rule for an antisymmetric bracket)."""
    rep = ValidationReport("lie")
    n, c = g.dim, g.bracket
    rep.check("antisymmetric")
    for i in range(n):
        for j in range(n):
            rep.record("antisymmetric", all(c[i][j][k] == -c[j][i][k] for k in range(n)), (i, j))
    jac = validate_leibniz(LeibnizAlgebra(n, c)).check("leibniz identity")
    ch = rep.check("jacobi")
    ch.checked, ch.passed, ch.witness = jac.checked, jac.passed, jac.witness
    return rep


# -- quotient -----------------------------------------------------------------

def complement_indices(H: Subspace) -> list[int]:
    return H.complement_by_standard_vectors()


def quotient_lie(L: LeibnizAlgebra, H: Subspace, V: LeftRepresentation) -> LieAlgebra:
    """L/H with the greedy standard-vector complement and the induced action."""
    comp = complement_indices(H)
    n = L.dim
    full = list(H.basis) + [L.basis_vector(i) for i in comp]
    basis_m = ExactMatrix.from_rows(full, n).transpose()

    def coords_mod_h(v):
        x = solve(basis_m, v)
        assert x is not None
        return x[H.dim:]

    # well-definedness: brackets with H land in H
    w = _ideal_witness(L, H)
    if w is not None:
        rep = ValidationReport("quotient")
        rep.fail("induced bracket well defined", w)
        raise ValidationError(rep)
    m = len(comp)
    br = [[coords_mod_h(L.bracket[a][b]) for b in comp] for a in comp]
    act = [V.action[a] for a in comp]
    g = LieAlgebra(m, br, V.dim_v, act)
    rep = validate_lie(g)
    if not rep.ok:
        raise ValidationError(rep)
    return g


# -- Chevalley-Eilenberg oracle ------------------------------------------------

def _sort_sign(seq):
    """Sign of the permutation sorting seq, or 0 if entries repeat."""
    seq = list(seq)
    if len(set(seq)) < len(seq):
        return 0, None
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign, tuple(sorted(seq))


def _ce_index(g: LieAlgebra, n: int):
    combos = list(combinations(range(g.dim), n))
    pos = {c: i for i, c in enumerate(combos)}
    return combos, pos


def ce_differential(g: LieAlgebra, n: int) -> list[list[Fraction]]:
    """Matrix of d: Hom(Lambda^n g, V) -> Hom(Lambda^{n+1} g, V).

    Coordinates are (sorted index tuple, V index), tuple-major.
    """
    dv = g.dim_v
    src, spos = _ce_index(g, n)
    dst, _ = _ce_index(g, n + 1)
    cols = len(src) * dv
    mat = []
    for t in dst:
        rows = [_zero(cols) for _ in range(dv)]
        for a in range(n + 1):
            rest = t[:a] + t[a + 1:]
            col0 = spos[rest] * dv
            sgn = 1 if a % 2 == 0 else -1
            act = g.action_on_v[t[a]]
            for r in range(dv):
                for s in range(dv):
                    if act[r][s]:
                        rows[r][col0 + s] += sgn * act[r][s]
        for a in range(n + 1):
            for b in range(a + 1, n + 1):
                rest = t[:a] + t[a + 1:b] + t[b + 1:]
                sgn = 1 if (a + b) % 2 == 0 else -1
                for l, cl in enumerate(g.bracket[t[a]][t[b]]):
                    if not cl:
                        continue
                    s2, key = _sort_sign((l,) + rest)
                    if not s2:
                        continue
                    col0 = spos[key] * dv
                    for r in range(dv):
                        rows[r][col0 + r] += sgn * s2 * cl
        mat.extend(rows)
    return mat


def ce_rlinear_subspace(g: LieAlgebra, n: int) -> Subspace | None:
    """Cochains that are R-multilinear, when g carries a scalar layer."""
    if g.r_action_g is None:
        return None
    dv = g.dim_v
    src, spos = _ce_index(g, n)
    cols = len(src) * dv
    if n == 0:
        return Subspace.full(cols)
    rows = []
    for fa, fv in zip(g.r_action_g, g.r_action_v):
        for i in range(g.dim):
            for rest in combinations(range(g.dim), n - 1):
                eq = [_zero(cols) for _ in range(dv)]
                # c(f e_i, rest) - f c(e_i, rest)
                for l in range(g.dim):
                    coef = fa[l][i]
                    if not coef:
                        continue
                    s, key = _sort_sign((l,) + rest)
                    if s:
                        for r in range(dv):
                            eq[r][spos[key] * dv + r] += s * coef
                s, key = _sort_sign((i,) + rest)
                if s:
                    for r in range(dv):
                        for t in range(dv):
                            if fv[r][t]:
                                eq[r][spos[key] * dv + t] -= s * fv[r][t]
                rows.extend(e for e in eq if any(e))
    if not rows:
        return Subspace.full(cols)
    return nullspace(ExactMatrix.from_rows(rows, cols))


def _image_rows(d, sub: Subspace | None, cols_src: int):
    """Images of the subspace basis (or the standard basis) under d."""
    basis = sub.basis if sub is not None else [
        [Fraction(int(i == j)) for j in range(cols_src)] for i in range(cols_src)]
    return [[sum((row[j] * v[j] for j in range(cols_src) if v[j] and row[j]), Fraction(0))
             for row in d] for v in basis], basis


def ce_cohomology(g: LieAlgebra, n_max: int) -> list[tuple[int, list[list[Fraction]]]]:
    """Dimensions and representative cocycles of H^0..H^n_max.

    Representatives are coordinate vectors in the (tuple, V index) layout.
    """
    dv = g.dim_v
    out = []
    prev_image = None
    for n in range(n_max + 1):
        src, _ = _ce_index(g, n)
        cols = len(src) * dv
        sub = ce_rlinear_subspace(g, n)
        d = ce_differential(g, n)
        if not src:
            out.append((0, []))
            prev_image = Subspace.zero(0)
            continue
        images, basis = _image_rows(d, sub, cols)
        # kernel inside the cochain space, in ambient coordinates
        if images and images[0]:
            coeffs = nullspace(ExactMatrix.from_rows(images).transpose())
        else:
            coeffs = Subspace.full(len(basis))
        kernel = Subspace.span(
            [[sum((c * b[j] for c, b in zip(cv, basis) if c), Fraction(0)) for j in range(cols)]
             for cv in coeffs.basis], cols)
        image = prev_image if prev_image is not None and prev_image.ambient_dim == cols else Subspace.zero(cols)
        reps = _quotient_reps(kernel, image)
        out.append((kernel.dim - image.dim, reps))
        ncols = len(_ce_index(g, n + 1)[0]) * dv
        prev_image = Subspace.span(images, ncols) if ncols else Subspace.zero(0)
    return out


def _quotient_reps(kernel: Subspace, image: Subspace) -> list[list[Fraction]]:
    """Echelon representatives of kernel / image."""
    if not kernel.basis:
        return []
    rem = [image.reduce(v) for v in kernel.basis]
    rem = [v for v in rem if any(v)]
    if not rem:
        return []
    red, _ = echelon(rem, kernel.ambient_dim)
    return [list(r) for r in red]


def ce_dims(g: LieAlgebra, n_max: int) -> list[int]:
    return [d for d, _ in ce_cohomology(g, n_max)]
