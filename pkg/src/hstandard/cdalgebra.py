"""Courant-Dorfman algebras over a finite-dimensional commutative algebra R.

All structure is stored as exact tensors on k-bases.  Matrices act on
coordinate columns: ``module_action[s][l][i]`` is the e_l-coefficient of
``f_s * e_i`` and ``partial[l][a]`` the e_l-coefficient of ``d f_a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactla import Subspace
from .report import ValidationError, ValidationReport
from .ztensor import ZT


def _zt(x) -> ZT:
    return x if isinstance(x, ZT) else ZT.from_exact(x)


def _same(a: ZT, b: ZT) -> bool:
    return (a - b).is_zero()


@dataclass(frozen=True, eq=False)
class CommutativeAlgebra:
    dim_r: int
    mult: ZT  # (r, r, r): f_a f_b = sum_c mult[a, b, c] f_c
    unit: ZT  # (r,)

    def __post_init__(self):
        object.__setattr__(self, "mult", _zt(self.mult))
        object.__setattr__(self, "unit", _zt(self.unit))
        r = self.dim_r
        if self.mult.shape != (r, r, r) or self.unit.shape != (r,):
            raise ValueError("commutative algebra tensors have the wrong shape")

    @classmethod
    def ground_field(cls) -> "CommutativeAlgebra":
        return cls(1, [[[1]]], [1])


@dataclass(frozen=True, eq=False)
class CourantDorfmanAlgebra:
    r: CommutativeAlgebra
    dim_e: int
    module_action: ZT  # (r, e, e)
    pairing: ZT  # (e, e, r)
    partial: ZT  # (e, r)
    bracket: ZT  # (e, e, e)
    basis_labels: tuple | None = None

    def __post_init__(self):
        for name in ("module_action", "pairing", "partial", "bracket"):
            object.__setattr__(self, name, _zt(getattr(self, name)))
        n, r = self.dim_e, self.r.dim_r
        expect = {"module_action": (r, n, n), "pairing": (n, n, r), "partial": (n, r), "bracket": (n, n, n)}
        for name, shape in expect.items():
            if getattr(self, name).shape != shape:
                raise ValueError(f"{name} must have shape {shape}")

    @classmethod
    def from_lie(cls, bracket) -> "CourantDorfmanAlgebra":
        """R = k, zero pairing and zero derivation around a Lie bracket."""
        b = _zt(bracket)
        n = b.shape[0]
        return cls(CommutativeAlgebra.ground_field(), n, [np.eye(n, dtype=int).tolist()],
                   np.zeros((n, n, 1), dtype=int).tolist(), np.zeros((n, 1), dtype=int).tolist(), b)

    def anchor_tensor(self) -> ZT:
        """(e, r, r): rho(e_i) f_a = <e_i, d f_a>."""
        return self.pairing.tdot(self.partial, ([1], [0])).moveaxis(2, 1)


@dataclass(frozen=True, eq=False)
class CDHData:
    h: Subspace
    dim_v: int
    r_action: ZT  # (r, v, v)
    nabla: ZT  # (e, v, v)

    def __post_init__(self):
        object.__setattr__(self, "r_action", _zt(self.r_action))
        object.__setattr__(self, "nabla", _zt(self.nabla))


def anchor(cd: CourantDorfmanAlgebra, e, f) -> list[Fraction]:
    """rho(e) f = <e, d f> for coordinate vectors e (in E) and f (in R)."""
    ev, fv = ZT.from_exact([list(e)]), ZT.from_exact([list(f)])
    df = cd.partial.tdot(fv, ([1], [1]))[:, 0]  # (e,)
    val = ev.tdot(cd.pairing, ([1], [0]))[0].tdot(df, ([0], [0]))
    return list(val.to_fractions())


# -- residual checking with optional degree guard -----------------------------------


class _Checker:
    def __init__(self, report: ValidationReport, grading=None, guard=None):
        self.report = report
        self.grading = grading  # dict kind -> numpy int array of degrees
        self.guard = guard

    def __call__(self, name: str, residual: ZT, kinds: tuple, extra: int = 0):
        """Record residual == 0 on each tuple; kinds name the leading tuple axes."""
        rep = self.report
        ch = rep.check(name)
        lead = residual.shape[:len(kinds)]
        nz = residual.data.reshape(lead + (-1,)).astype(bool).any(axis=-1) if residual.data.size else np.zeros(lead, bool)
        mask = np.ones(lead, dtype=bool)
        if self.guard is not None and self.grading is not None:
            total = np.zeros(lead, dtype=np.int64) + extra
            for ax, kind in enumerate(kinds):
                shape = [1] * len(kinds)
                shape[ax] = lead[ax]
                total = total + self.grading[kind].reshape(shape)
            mask = total <= self.guard
        ch.checked += int(mask.sum())
        ch.skipped += int(mask.size - mask.sum())
        bad = np.argwhere(nz & mask)
        if len(bad) and ch.passed:
            ch.passed = False
            ch.witness = tuple(int(x) for x in bad[0])


def validate_cd(cd: CourantDorfmanAlgebra, grading=None, guard_degree=None) -> ValidationReport:
    """Commutative algebra, module, derivation, pairing and axioms (1)-(6).

    ``grading`` maps "e" and "r" to integer degree arrays; when ``guard_degree``
    is given, tuples whose total input degree exceeds it are skipped and counted.
    """
    rep = ValidationReport("courant-dorfman")
    chk = _Checker(rep, grading, guard_degree)
    R = cd.r
    m, u = R.mult, R.unit
    r, n = R.dim_r, cd.dim_e
    M, g, D, b = cd.module_action, cd.pairing, cd.partial, cd.bracket
    eye_r = ZT.from_exact(np.eye(r, dtype=int).tolist())
    eye_e = ZT.from_exact(np.eye(n, dtype=int).tolist())

    chk("R commutative", m - m.transpose((1, 0, 2)), ("r", "r"))
    left = m.tdot(m, ([2], [0]))  # (a,b,c,e) = (f_a f_b) f_c
    right = m.tdot(m, ([2], [1])).transpose((2, 0, 1, 3))  # f_a (f_b f_c)
    chk("R associative", left - right, ("r", "r", "r"))
    chk("R unital", u.tdot(m, ([0], [0])) - eye_r, ("r",))

    prod_act = m.tdot(M, ([2], [0]))  # (a,b,l,i) action of f_a f_b
    comp = M.tdot(M, ([2], [1])).transpose((0, 2, 1, 3))  # (a,b,l,i) = M_a M_b
    chk("module action multiplicative", prod_act - comp, ("r", "r"))
    chk("module action unital", u.tdot(M, ([0], [0])) - eye_e, ())

    d_prod = m.tdot(D, ([2], [1]))  # (a,b,l) d(f_a f_b)
    f_db = M.tdot(D, ([2], [0])).transpose((0, 2, 1))  # (a,b,l) f_a d f_b
    chk("derivation", d_prod - f_db - f_db.transpose((1, 0, 2)), ("r", "r"))

    chk("pairing symmetric", g - g.transpose((1, 0, 2)), ("e", "e"))
    fe_pair = M.tdot(g, ([1], [0]))  # (s,i,j,t) = <f_s e_i, e_j>
    f_pair = g.tdot(m, ([2], [1])).transpose((2, 0, 1, 3))  # (s,i,j,t) = f_s <e_i, e_j>
    chk("pairing R-bilinear", fe_pair - f_pair, ("r", "e", "e"))

    anc = cd.anchor_tensor()  # (i, s, t)
    # (1) e_i o (f_s e_j) = f_s (e_i o e_j) + <e_i, d f_s> e_j
    lhs = M.tdot(b, ([1], [1])).transpose((2, 0, 1, 3))  # (i,s,j,k)
    t1 = M.tdot(b, ([2], [2])).transpose((2, 0, 3, 1))  # (s,k,i,j)->(i,s,j,k)
    t2 = anc.tdot(M, ([2], [0])).transpose((0, 1, 3, 2))  # (i,s,k,j)->(i,s,j,k)
    chk("axiom 1", lhs - t1 - t2, ("e", "r", "e"))
    # (2) <e_i, d<e_j,e_k>> = <e_i o e_j, e_k> + <e_j, e_i o e_k>
    lhs = g.tdot(anc, ([2], [1])).transpose((2, 0, 1, 3))  # (j,k,i,r)->(i,j,k,r)
    t1 = b.tdot(g, ([2], [0]))  # (i,j,k,r)
    t2 = b.tdot(g, ([2], [1])).transpose((0, 2, 1, 3))  # (i,k,j,r)->(i,j,k,r)
    chk("axiom 2", lhs - t1 - t2, ("e", "e", "e"))
    # (3) e_i o e_j + e_j o e_i = d<e_i, e_j>
    chk("axiom 3", b + b.transpose((1, 0, 2)) - g.tdot(D, ([2], [1])), ("e", "e"))
    # (4) left Leibniz rule
    t_a = b.tdot(b, ([2], [1])).transpose((2, 0, 1, 3))  # e_i o (e_j o e_k): (j,k,i,m)->(i,j,k,m)
    t_b = b.tdot(b, ([2], [0]))  # (e_i o e_j) o e_k: (i,j,k,m)
    t_c = b.tdot(b, ([2], [1])).transpose((0, 2, 1, 3))  # e_j o (e_i o e_k): (i,k,j,m)->(i,j,k,m)
    chk("axiom 4", t_a - t_b - t_c, ("e", "e", "e"))
    # (5) d f o e = 0
    chk("axiom 5", D.tdot(b, ([0], [0])), ("r", "e"))
    # (6) <d f, d g> = 0
    chk("axiom 6", D.tdot(g, ([0], [0])).tdot(D, ([1], [0])).transpose((0, 2, 1)), ("r", "r"))
    return rep


# -- H and its representation ------------------------------------------------------


def h_coordinates(h: Subspace, vecs: ZT) -> tuple[ZT, ZT]:
    """Coordinates in the echelon basis of h and the residual outside h.

    ``vecs`` has shape (..., ambient); the residual is zero exactly on h.
    """
    if h.dim == 0:
        return ZT.zeros(vecs.shape[:-1] + (0,)), vecs
    coords = vecs.take(list(h.pivots), axis=-1)
    basis = ZT.from_exact([list(r) for r in h.basis])
    recon = coords.tdot(basis, ([coords.ndim - 1], [0]))
    return coords, vecs - recon


def _h_basis_zt(h: Subspace) -> ZT:
    return ZT.from_exact([list(r) for r in h.basis]) if h.dim else ZT.zeros((0, h.ambient_dim))


def validate_h_ideal_cd(cd: CourantDorfmanAlgebra, h: Subspace) -> ValidationReport:
    if h.ambient_dim != cd.dim_e:
        raise ValueError("H lives in a space of the wrong dimension")
    rep = ValidationReport("h-ideal")
    chk = _Checker(rep)
    hb = _h_basis_zt(h)
    M, g, D, b = cd.module_action, cd.pairing, cd.partial, cd.bracket
    fh = M.tdot(hb, ([2], [1])).transpose((0, 2, 1))  # (s, j, l)
    chk("R-submodule", h_coordinates(h, fh)[1], ("r", "h"))
    chk("contains dR", h_coordinates(h, D.transpose((1, 0)))[1], ("r",))
    iso = hb.tdot(g, ([1], [0])).tdot(hb, ([1], [1])).transpose((0, 2, 1))
    chk("isotropic", iso, ("h", "h"))
    he = hb.tdot(b, ([1], [0]))  # (j, i, k) = h_j o e_i
    eh = b.tdot(hb, ([1], [1])).transpose((0, 2, 1))  # (i, j, k) = e_i o h_j
    chk("right ideal", h_coordinates(h, he)[1], ("h", "e"))
    chk("left ideal", h_coordinates(h, eh)[1], ("e", "h"))
    return rep


def validate_h_rep_cd(cd: CourantDorfmanAlgebra, hd: CDHData) -> ValidationReport:
    rep = ValidationReport("h-representation")
    chk = _Checker(rep)
    R = cd.r
    r, n, dv = R.dim_r, cd.dim_e, hd.dim_v
    if hd.r_action.shape != (r, dv, dv) or hd.nabla.shape != (n, dv, dv):
        raise ValueError("representation tensors have the wrong shape")
    A, N = hd.r_action, hd.nabla
    M, b = cd.module_action, cd.bracket
    eye_v = ZT.from_exact(np.eye(dv, dtype=int).tolist()) if dv else ZT.zeros((0, 0))
    chk("V unital", R.unit.tdot(A, ([0], [0])) - eye_v, ())
    prod_act = R.mult.tdot(A, ([2], [0]))
    comp = A.tdot(A, ([2], [1])).transpose((0, 2, 1, 3))
    chk("V multiplicative", prod_act - comp, ("r", "r"))
    hb = _h_basis_zt(hd.h)
    chk("H-trivial", hb.tdot(N, ([1], [0])), ("h",))
    # nabla_{f e} = f nabla_e
    lhs = M.tdot(N, ([1], [0]))  # (s, i, v, w)
    rhs = A.tdot(N, ([2], [1])).transpose((0, 2, 1, 3))  # (s, v, i, w)->(s, i, v, w)
    chk("R-linear in E", lhs - rhs, ("r", "e"))
    # nabla_e (f v) = (rho(e) f) v + f nabla_e v
    anc = cd.anchor_tensor()
    lhs = N.tdot(A, ([2], [1])).transpose((0, 2, 1, 3))  # (i, s, v, w)
    t1 = anc.tdot(A, ([2], [0]))  # (i, s, v, w)
    t2 = A.tdot(N, ([2], [1])).transpose((2, 0, 1, 3))  # (s, v, i, w)->(i, s, v, w)
    chk("Leibniz rule in V", lhs - t1 - t2, ("e", "r"))
    # nabla_{e_i o e_j} = [nabla_i, nabla_j]
    lhs = b.tdot(N, ([2], [0]))
    nn = N.tdot(N, ([2], [1])).transpose((0, 2, 1, 3))  # (i, j, v, w) = N_i N_j
    chk("homomorphism", lhs - nn + nn.transpose((1, 0, 2, 3)), ("e", "e"))
    return rep


def as_context(source, name: str = "context", complement=None):
    """Build the unified complex context from (L, H, V) or (cd, CDHData)."""
    from .context import cd_context, leibniz_context
    from .leibniz import LeibnizAlgebra

    first = source[0]
    if isinstance(first, LeibnizAlgebra):
        L, H, V = source
        return leibniz_context(L, H, V, name=name, complement=complement)
    if isinstance(first, CourantDorfmanAlgebra):
        cd, hd = source
        return cd_context(cd, hd, name=name, complement=complement)
    if hasattr(first, "algebra"):
        t = first
        return leibniz_context(t.algebra, t.h, t.rep, name=t.name, complement=complement)
    raise TypeError("expected (LeibnizAlgebra, H, V) or (CourantDorfmanAlgebra, CDHData)")


def quotient_lie_rinehart(cd: CourantDorfmanAlgebra, hd: CDHData, complement=None):
    """E/H as a Lie algebra over k carrying the R-actions (a Lie-Rinehart algebra)."""
    from .leibniz import LieAlgebra

    h = hd.h
    n = cd.dim_e
    comp = list(complement) if complement is not None else [
        [int(i == j) for j in range(n)] for i in h.complement_by_standard_vectors()]
    basis = ZT.from_exact([list(r) for r in h.basis] + [list(c) for c in comp])
    from .exactla import ExactMatrix, solve

    bm = ExactMatrix.from_rows(basis.to_fractions().tolist(), n).transpose()

    def coords(vec):
        x = solve(bm, vec)
        if x is None:
            raise ValueError("complement does not span E together with H")
        return x[h.dim:]

    cz = ZT.from_exact(comp)
    br = cz.tdot(cd.bracket, ([1], [0])).tdot(cz, ([1], [1])).transpose((0, 2, 1)).to_fractions()
    bracket = [[coords(list(br[a, b_])) for b_ in range(len(comp))] for a in range(len(comp))]
    act = cz.tdot(hd.nabla, ([1], [0])).to_fractions().tolist()
    mod = cd.module_action.tdot(cz, ([2], [1])).transpose((0, 2, 1)).to_fractions()  # (s, a, l)
    r_act = []
    for s in range(cd.r.dim_r):
        cols = [coords(list(mod[s, a])) for a in range(len(comp))]
        r_act.append([[cols[a][bb] for a in range(len(comp))] for bb in range(len(comp))])
    return LieAlgebra(len(comp), bracket, hd.dim_v, act,
                      tuple(r_act), tuple(hd.r_action.to_fractions().tolist()))


def require(report: ValidationReport) -> ValidationReport:
    if not report.ok:
        raise ValidationError(report)
    return report
