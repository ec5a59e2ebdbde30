"""Splitting a cochain with (dw)_k = 0 for k >= 1 as w = eta + d lambda, eta in C_nv.

The construction runs in a basis adapted to a split E = H + X: the first p
basis vectors are the H basis, the rest span X.  lambda is built from the top
component down; on each component, ambient slots are filled by H or X basis
vectors, and values are defined per slot pattern.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .context import HContext, ScalarLayer
from .exactla import ExactMatrix, Subspace
from .hcomplex import (
    Cochain,
    _d0_component,
    _dprime_component,
    apply_delta,
    check_conditions,
    raw_coboundary,
)
from .report import ValidationReport
from .ztensor import ZT, assemble


class PreconditionError(ValueError):
    """(dw)_k does not vanish for some k >= 1."""


@dataclass(frozen=True)
class SplitBasis:
    h_basis: tuple  # rows, ambient coordinates
    x_basis: tuple
    to_new: ZT  # (N, N): rows are the new basis vectors in old coordinates
    to_old: ZT  # inverse of to_new

    @classmethod
    def from_context(cls, ctx: HContext, complement=None) -> "SplitBasis":
        n = ctx.dim
        hb = [list(r) for r in ctx.h.basis]
        xb = [list(map(Fraction, r)) for r in (complement if complement is not None else ctx.complement)]
        rows = hb + xb
        if len(rows) != n or Subspace.span(rows, n).dim != n:
            raise ValueError("H and the complement do not split the ambient space")
        if ctx.scalar is not None and xb:
            xs = Subspace.span(xb, n)
            fx = ctx.scalar.modact.tdot(ZT.from_exact(xb), ([2], [1])).to_fractions()  # (s, l, a)
            for s in range(fx.shape[0]):
                for a in range(len(xb)):
                    if not xs.contains_vector(list(fx[s, :, a])):
                        raise ValueError(f"complement is not R-stable (scalar {s}, vector {a})")
        inv_rows = _inverse(rows)
        return cls(tuple(map(tuple, hb)), tuple(map(tuple, xb)), ZT.from_exact(rows) if n else ZT.zeros((0, 0)),
                   ZT.from_exact(inv_rows) if n else ZT.zeros((0, 0)))


def _inverse(rows):
    from .exactla import solve

    n = len(rows)
    m = ExactMatrix.from_rows(rows, n)
    cols = []
    for i in range(n):
        x = solve(m, [Fraction(int(i == j)) for j in range(n)])
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _change_ambient(t: ZT, axes, mat: ZT) -> ZT:
    """Contract each listed axis (an ambient index) with mat[new, old]."""
    for ax in axes:
        t = mat.tdot(t, ([1], [ax])).moveaxis(0, ax)
    return t


def rebase(ctx: HContext, split: SplitBasis) -> HContext:
    """The same context written in the split basis."""
    B, Bi = split.to_new, split.to_old
    n, p = ctx.dim, ctx.p
    bracket = _change_ambient(ctx.bracket, (0, 1), B).tdot(Bi, ([2], [0]))
    nabla = _change_ambient(ctx.nabla, (0,), B)
    pair_h = _change_ambient(ctx.pair_h, (0, 1), B)
    h_amb = ctx.h_amb.tdot(Bi, ([1], [0]))
    h_on_e = _change_ambient(ctx.h_on_e, (1,), B)
    unit = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    h = Subspace.span(unit[:p], n)
    sc = ctx.scalar
    if sc is not None:
        modact = Bi.transpose((1, 0)).tdot(sc.modact, ([1], [1])).moveaxis(0, 1).tdot(B, ([2], [1]))
        sc = ScalarLayer(sc.dim_r, sc.mult, sc.unit, modact, sc.vmod,
                         _change_ambient(sc.pair, (0, 1), B), Bi.tdot(sc.partial, ([0], [0])),
                         sc.dpart_h, sc.hmod, sc.generators)
    return HContext(ctx.name + " (split basis)", ctx.kind, n, h, ctx.dim_v, unit[p:], bracket, nabla,
                    pair_h, h_amb, h_on_e, sc, None, ctx.source)


def _convert(ctx_to: HContext, w: Cochain, mat: ZT) -> Cochain:
    comps = []
    for k, c in enumerate(w.comps):
        m = w.degree - 2 * k
        comps.append(_change_ambient(c, range(1, 1 + m), mat).reduced())
    return Cochain(ctx_to, w.degree, comps)


@dataclass
class LambdaChain:
    """lambda as a degree n-1 cochain, with the split it was built from."""

    cochain: Cochain | None  # None when n = 0
    split: SplitBasis

    @property
    def components(self) -> list[ZT]:
        return self.cochain.comps if self.cochain is not None else []


@dataclass
class Decomposition:
    eta: Cochain
    lam: LambdaChain
    report: ValidationReport


# -- the construction ------------------------------------------------------------------


def _names(pre, m):
    return [f"{pre}{i}" for i in range(m)]


def _arr(t: ZT, names, out) -> ZT:
    return t.transpose([names.index(x) for x in out])


def _block(t: ZT, pattern, p: int, n_h: int, tail: int) -> ZT:
    """Restrict the ambient axes (after the batch axis) to H or X ranges."""
    idx = (slice(None),) + tuple(slice(0, p) if c == "H" else slice(p, None) for c in pattern)
    return t[idx + (slice(None),) * tail]


def _next_component(nctx: HContext, theta: ZT, lam_k: ZT, mp: int, k: int) -> ZT:
    """lambda_{k-1} (mp ambient slots, k-1 H slots) from Theta_k and lambda_k."""
    p, N = nctx.p, nctx.dim
    B = theta.shape[0]
    memo: dict[tuple, ZT] = {}
    pair = nctx.pair_h

    def value(pat: tuple) -> ZT:
        if pat in memo:
            return memo[pat]
        shape = (B,) + tuple(p if c == "H" else N - p for c in pat) + (p,) * (k - 1) + (nctx.dim_v,)
        q = None
        for i, c in enumerate(pat):
            if c == "X" and "H" in pat[i + 1:]:
                q = i
        Hn = _names("K", k - 1)
        if q is None:
            l = pat.count("H")
            if l == 0:
                out = ZT.zeros(shape)
            else:
                blk = _block(theta, ("H",) * (l - 1) + ("X",) * (mp - l), p, k, k + 1)
                T = _names("T", mp - 1)
                tn = ["B"] + T + ["G0"] + Hn + ["V"]
                terms = []
                for j in range(1, l + 1):
                    t = _arr(blk, tn, ["B"] + T[:j - 1] + ["G0"] + T[j - 1:] + Hn + ["V"])
                    terms.append(t if j % 2 == 1 else -t)
                acc = terms[0]
                for t in terms[1:]:
                    acc = acc + t
                out = acc.scale(Fraction(1, k + l - 1))
        else:
            r = 0
            while q + 1 + r < mp and pat[q + 1 + r] == "H":
                r += 1
            tilde = pat[:q] + ("H",) * r + ("X",) + pat[q + 1 + r:]
            S = _names("S", mp)
            src = value(tilde)
            outE = []
            for pos in range(mp):
                if pos == q:
                    outE.append(S[q + r])
                elif q < pos <= q + r:
                    outE.append(S[pos - 1])
                else:
                    outE.append(S[pos])
            out = _arr(src, ["B"] + S + Hn + ["V"], ["B"] + outE + Hn + ["V"])
            if r % 2:
                out = -out
            rest = pat[:q] + ("H",) * (r - 1) + pat[q + 1 + r:]
            lblk = _block(lam_k, rest, p, k, k + 1)
            pblk = pair[p:, :p]
            T = pblk.tdot(lblk, ([2], [1 + (mp - 2)]))
            Ln = _names("L", mp - 2)
            tn = ["y", "b", "B"] + Ln + Hn + ["V"]
            for i in range(1, r + 1):
                it = iter(Ln)
                oe = ["y" if pos == q else "b" if pos == q + i else next(it) for pos in range(mp)]
                t = _arr(T, tn, ["B"] + oe + Hn + ["V"])
                out = out + t if i % 2 == 0 else out - t
        memo[pat] = out
        return out

    pieces = []
    for bits in np.ndindex(*(2,) * mp):
        pat = tuple("H" if b == 0 else "X" for b in bits)
        idx = (slice(None),) + tuple(slice(0, p) if c == "H" else slice(p, N) for c in pat)
        pieces.append((idx, value(pat)))
    shape = (B,) + (N,) * mp + (p,) * (k - 1) + (nctx.dim_v,)
    return assemble(shape, pieces)


def _theta(nctx: HContext, w: Cochain, lam: list, k: int) -> ZT:
    """Theta_k = w_k - d0 lambda_k - d' lambda_k (component k, degree n)."""
    n = w.degree
    mk = n - 1 - 2 * k
    X = lam[k]
    return (w.comps[k] - _d0_component(nctx, X, mk, k) - _dprime_component(nctx, X, mk, k)).reduced()


def decompose_cocycle(ctx: HContext, w: Cochain, split: SplitBasis | None = None) -> Decomposition:
    n = w.degree
    split = split or SplitBasis.from_context(ctx)
    if n >= 1:
        dw = raw_coboundary(ctx, w)
        for k in range(1, len(dw.comps)):
            if not dw.comps[k].is_zero():
                raise PreconditionError(f"(dw)_{k} is not zero")
    if n == 0:
        lam = LambdaChain(None, split)
        eta = w
    else:
        nctx = rebase(ctx, split)
        wn = _convert(nctx, w, split.to_new)
        m = (n + 1) // 2
        B, N, p, dv = w.batch, ctx.dim, ctx.p, ctx.dim_v
        lam: list = [None] * m
        top = ZT.zeros((B,) + (N,) * (n - 1 - 2 * (m - 1)) + (p,) * (m - 1) + (dv,))
        if n % 2 == 0:
            # lambda_{m-1}(beta; alphas) = w_m(beta, alphas) / m on H, zero on X
            wm = wn.comps[m].scale(Fraction(1, m))
            top = assemble(top.shape, [((slice(None), slice(0, p)), wm)])
        lam[m - 1] = top
        for k in range(m - 1, 0, -1):
            theta = _theta(nctx, wn, lam, k)
            lam[k - 1] = _next_component(nctx, theta, lam[k], n + 1 - 2 * k, k)
        lam_new = Cochain(nctx, n - 1, lam)
        lam_c = _convert(ctx, lam_new, split.to_old)
        lam = LambdaChain(lam_c, split)
        eta = w - raw_coboundary(ctx, lam_c)
    rep = verify_decomposition(ctx, w, eta, lam)
    return Decomposition(eta, lam, rep)


# -- certificates ---------------------------------------------------------------------------


def verify_lambda_conditions(ctx: HContext, lam: LambdaChain, w: Cochain) -> ValidationReport:
    """Lambda Conditions 1)-5) for every component of lambda."""
    rep = ValidationReport("lambda conditions")
    if lam.cochain is None:
        rep.check("no lambda in degree 0")
        return rep
    lc = lam.cochain
    rep.merge(check_conditions(ctx, lc, full=True), prefix="conditions 1-3: ")
    dl = raw_coboundary(ctx, lc)
    for k in range(1, len(w.comps)):
        ch = rep.check(f"condition 4 (p={k - 1})")
        diff = w.comps[k] - dl.comps[k]
        ch.checked += 1
        if not diff.is_zero():
            ch.passed = False
            ch.witness = tuple(int(x) for x in np.argwhere(diff.data != 0)[0])
    n = w.degree
    for pk in range(len(lc.comps)):
        mk = n - 1 - 2 * pk
        theta = (w.comps[pk] - _d0_component(ctx, lc.comps[pk], mk, pk)
                 - _dprime_component(ctx, lc.comps[pk], mk, pk)).reduced()
        comps = [theta if j == pk else Cochain.zero(ctx, n, w.batch).comps[j] for j in range(len(w.comps))]
        contracted = apply_delta(ctx, Cochain(ctx, n, comps))[pk + 1]
        ch = rep.check(f"condition 5 (p={pk})")
        ch.checked += 1
        if not contracted.is_zero():
            ch.passed = False
            ch.witness = tuple(int(x) for x in np.argwhere(contracted.data != 0)[0])
    return rep


def verify_decomposition(ctx: HContext, w: Cochain, eta: Cochain, lam: LambdaChain) -> ValidationReport:
    rep = ValidationReport("decomposition")
    dl = raw_coboundary(ctx, lam.cochain) if lam.cochain is not None else Cochain.zero(ctx, w.degree, w.batch)
    rep.record("w = eta + d lambda", (eta + dl) == w)
    rep.record("eta_k = 0 for k >= 1", all(c.is_zero() for c in eta.comps[1:]))
    if w.degree >= 1 and ctx.p:
        rep.record("eta vanishes on H", ctx.h_amb.tdot(eta.comps[0], ([1], [1])).is_zero())
    rep.merge(verify_lambda_conditions(ctx, lam, w))
    return rep
