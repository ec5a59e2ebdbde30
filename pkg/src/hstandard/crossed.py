"""Crossed products S(Z) (x) L of a Leibniz algebra, truncated by polynomial degree.

The module is S^{<=N}(Z) (x) L over R = S^{<=N+1}(Z).  This is the quotient of
the untruncated crossed product by the ideal of elements of degree > N (the
pairing raises degree by one, so R needs one more degree than the module).
Every axiom therefore holds exactly; the degree guard is still reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from math import lcm

import numpy as np

from .cdalgebra import CDHData, CommutativeAlgebra, CourantDorfmanAlgebra, validate_cd
from .context import HContext, cd_context, leibniz_context
from .exactla import Subspace
from .hcomplex import Cochain, layout
from .leibniz import LeftRepresentation, left_center, sym_pairing
from .report import ValidationReport
from .ztensor import ZT


@dataclass(frozen=True)
class TruncatedSymmetricAlgebra:
    """Polynomials in n_gens commuting variables modulo monomials of degree > cap."""

    n_gens: int
    cap: int

    @cached_property
    def monomials(self) -> tuple:
        out = []
        for d in range(self.cap + 1):
            for combo in combinations_with_replacement(range(self.n_gens), d):
                e = [0] * self.n_gens
                for g in combo:
                    e[g] += 1
                out.append(tuple(e))
        if self.n_gens == 0:
            out = [()]
        return tuple(out)

    @cached_property
    def index(self) -> dict:
        return {m: i for i, m in enumerate(self.monomials)}

    @property
    def dim(self) -> int:
        return len(self.monomials)

    def degree(self, i: int) -> int:
        return sum(self.monomials[i])

    def count_upto(self, d: int) -> int:
        return sum(1 for m in self.monomials if sum(m) <= d)

    def times(self, a: int, b: int) -> int | None:
        m = tuple(x + y for x, y in zip(self.monomials[a], self.monomials[b]))
        return self.index.get(m)

    def lower(self, a: int, g: int) -> int | None:
        """The monomial divided by generator g, or None."""
        m = list(self.monomials[a])
        if m[g] == 0:
            return None
        m[g] -= 1
        return self.index[tuple(m)]

    def generator(self, g: int) -> int:
        m = [0] * self.n_gens
        m[g] = 1
        return self.index[tuple(m)]

    def label(self, i: int) -> str:
        parts = []
        for g, e in enumerate(self.monomials[i]):
            if e:
                parts.append(f"z{g + 1}" + (f"^{e}" if e > 1 else ""))
        return "*".join(parts) or "1"

    def algebra(self) -> CommutativeAlgebra:
        r = self.dim
        mult = np.zeros((r, r, r), dtype=np.int64)
        for a in range(r):
            for b in range(r):
                c = self.times(a, b)
                if c is not None:
                    mult[a, b, c] = 1
        unit = np.zeros(r, dtype=np.int64)
        unit[0] = 1
        return CommutativeAlgebra(r, ZT(mult), ZT(unit))


@dataclass(eq=False)
class CrossedProduct:
    base: tuple  # (L, H, V)
    n_trunc: int
    z_basis: tuple  # rows: generators of Z in L coordinates
    z_h: tuple  # generators in H coordinates
    r: TruncatedSymmetricAlgebra
    n_monos: int  # monomials of degree <= n_trunc (the module's coefficients)
    cd: CourantDorfmanAlgebra
    hdata: CDHData
    guard_degree: int
    grading: dict
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def dim_l(self) -> int:
        return self.base[0].dim

    def e_index(self, mono: int, i: int) -> int:
        return mono * self.dim_l + i

    def context(self) -> HContext:
        if "ctx" not in self._cache:
            self._cache["ctx"] = cd_context(self.cd, self.hdata, name=f"crossed N={self.n_trunc}", validate=False,
                                           generators=tuple(self.r.generator(g) for g in range(self.r.n_gens)))
            _register_c0(self)
        return self._cache["ctx"]

    def base_context(self) -> HContext:
        """(L, H) with coefficients in the truncated module S^{<=N}(Z) (x) V."""
        if "base" not in self._cache:
            L, H, _ = self.base
            self._cache["base"] = leibniz_context(L, H, vn_representation(self), name="base with V_N")
        return self._cache["base"]

    def plain_context(self) -> HContext:
        L, H, V = self.base
        if "plain" not in self._cache:
            self._cache["plain"] = leibniz_context(L, H, V, name="base")
        return self._cache["plain"]

    def guarded_report(self) -> ValidationReport:
        return validate_cd(self.cd, self.grading, self.guard_degree)


def _z_pair(L, zb: Subspace, i: int, j: int) -> list[Fraction]:
    """(e_i, e_j) in coordinates of the Z basis."""
    vec = sym_pairing(L, L.basis_vector(i), L.basis_vector(j))
    coords = zb.coordinates(vec)
    if coords is None:
        raise ValueError("symmetric pairing leaves the left center")
    return coords


def crossed_product(L, H: Subspace, V: LeftRepresentation, n_trunc: int, validate: bool = True) -> CrossedProduct:
    if n_trunc < 0:
        raise ValueError("truncation degree must be non-negative")
    if validate:
        leibniz_context(L, H, V)
    zs = left_center(L)
    q = zs.dim
    n = L.dim
    R = TruncatedSymmetricAlgebra(q, n_trunc + 1)
    M = R.count_upto(n_trunc)
    dim_e = M * n
    zrows = [list(r) for r in zs.basis]
    zh = [H.coordinates(r) for r in zrows]
    pz = [[_z_pair(L, zs, i, j) for j in range(n)] for i in range(n)]

    mod = np.zeros((R.dim, dim_e, dim_e), dtype=object)
    pair = np.zeros((dim_e, dim_e, R.dim), dtype=object)
    part = np.zeros((dim_e, R.dim), dtype=object)
    br = np.zeros((dim_e, dim_e, dim_e), dtype=object)
    for arr in (mod, pair, part, br):
        arr[...] = Fraction(0)

    def E(mono, i):
        return mono * n + i

    for s in range(R.dim):
        for mu in range(M):
            nu = R.times(s, mu)
            if nu is not None and nu < M:
                for i in range(n):
                    mod[s, E(nu, i), E(mu, i)] = Fraction(1)

    def pair_poly(mu, i, nu, j) -> dict:
        """<mu e_i, nu e_j> as {R index: coeff}."""
        out = {}
        mn = R.times(mu, nu)
        if mn is None:
            return out
        for u, c in enumerate(pz[i][j]):
            t = R.times(mn, R.generator(u)) if c else None
            if t is not None:
                out[t] = out.get(t, 0) + c
        return out

    def d_mono(rho) -> dict:
        """d of a monomial as {(mono, l): coeff} in E."""
        out = {}
        for g in range(q):
            low = R.lower(rho, g)
            if low is None or low >= M:
                continue
            c = R.monomials[rho][g]
            for l, x in enumerate(zrows[g]):
                if x:
                    out[(low, l)] = out.get((low, l), 0) + c * x
        return out

    for mu in range(M):
        for i in range(n):
            for nu in range(M):
                for j in range(n):
                    for t, c in pair_poly(mu, i, nu, j).items():
                        pair[E(mu, i), E(nu, j), t] += c
    for rho in range(R.dim):
        for (mono, l), c in d_mono(rho).items():
            part[E(mono, l), rho] += c

    def add_scaled(target: dict, poly: dict, vec: dict, c=1):
        """target += c * poly * vec, vec in E as {(mono, l): coeff}."""
        for t, a in poly.items():
            for (mono, l), b in vec.items():
                nm = R.times(t, mono)
                if nm is not None and nm < M:
                    key = E(nm, l)
                    target[key] = target.get(key, 0) + c * a * b

    for f1 in range(M):
        for i in range(n):
            for f2 in range(M):
                for j in range(n):
                    out: dict = {}
                    f12 = R.times(f1, f2)
                    if f12 is not None and f12 < M:
                        for k in range(n):
                            c = L.bracket[i][j][k]
                            if c:
                                out[E(f12, k)] = out.get(E(f12, k), 0) + c
                    # <e1, e2> f2 d f1
                    add_scaled(out, pair_poly(f2, i, 0, j), d_mono(f1))
                    # <e1, d f2> f1 e2
                    for (mono, l), c in d_mono(f2).items():
                        add_scaled(out, pair_poly(0, i, mono, l), {(f1, j): c})
                    # - <e2, d f1> f2 e1
                    for (mono, l), c in d_mono(f1).items():
                        add_scaled(out, pair_poly(0, j, mono, l), {(f2, i): c}, -1)
                    for key, c in out.items():
                        br[E(f1, i), E(f2, j), key] += c

    labels = tuple(f"{R.label(mu)}*{L.basis_labels[i] if L.basis_labels else 'e' + str(i)}"
                   for mu in range(M) for i in range(n))
    cd = CourantDorfmanAlgebra(R.algebra(), dim_e, ZT.from_exact(mod), ZT.from_exact(pair),
                               ZT.from_exact(part), ZT.from_exact(br), labels)
    hrows = []
    for mu in range(M):
        for hrow in H.basis:
            row = [Fraction(0)] * dim_e
            for l, x in enumerate(hrow):
                row[E(mu, l)] = x
            hrows.append(row)
    hbig = Subspace.span(hrows, dim_e)
    assert [list(r) for r in hbig.basis] == hrows
    dv = V.dim_v
    dvn = M * dv
    # the action of R on S^{<=N} (x) V and of E on it
    ract = np.zeros((R.dim, dvn, dvn), dtype=object)
    ract[...] = Fraction(0)
    for s in range(R.dim):
        for mu in range(M):
            nu = R.times(s, mu)
            if nu is not None and nu < M:
                for v in range(dv):
                    ract[s, nu * dv + v, mu * dv + v] = Fraction(1)
    nab = np.zeros((dim_e, dvn, dvn), dtype=object)
    nab[...] = Fraction(0)
    for f1 in range(M):
        for i in range(n):
            for f2 in range(M):
                # f1 <e_i, d f2> v
                anchor: dict = {}
                for (mono, l), c in d_mono(f2).items():
                    for t, a in pair_poly(0, i, mono, l).items():
                        anchor[t] = anchor.get(t, 0) + c * a
                for t, a in anchor.items():
                    tgt = R.times(f1, t)
                    if tgt is not None and tgt < M:
                        for v in range(dv):
                            nab[E(f1, i), tgt * dv + v, f2 * dv + v] += a
                # f1 f2 tau(e_i) v
                tgt = R.times(f1, f2)
                if tgt is not None and tgt < M:
                    for v in range(dv):
                        for w in range(dv):
                            nab[E(f1, i), tgt * dv + v, f2 * dv + w] += V.action[i][v][w]
    hd = CDHData(hbig, dvn, ZT.from_exact(ract), ZT.from_exact(nab))
    grading = {
        "e": np.array([R.degree(mu) for mu in range(M) for _ in range(n)], dtype=np.int64),
        "r": np.array([R.degree(t) for t in range(R.dim)], dtype=np.int64),
        "h": np.array([R.degree(mu) for mu in range(M) for _ in range(H.dim)], dtype=np.int64),
    }
    cp = CrossedProduct((L, H, V), n_trunc, tuple(tuple(r) for r in zrows), tuple(tuple(r) for r in zh),
                        R, M, cd, hd, n_trunc - 1, grading)
    if validate:
        from .cdalgebra import require, validate_h_ideal_cd, validate_h_rep_cd

        require(cp.guarded_report())
        require(validate_h_ideal_cd(cd, hbig))
        require(validate_h_rep_cd(cd, hd))
    return cp


def induced_structures(cp: CrossedProduct) -> CDHData:
    return cp.hdata


def vn_representation(cp: CrossedProduct) -> LeftRepresentation:
    """The action of 1 (x) e_i on S^{<=N}(Z) (x) V."""
    nab = cp.hdata.nabla.to_fractions()
    return LeftRepresentation(cp.hdata.dim_v, [nab[i].tolist() for i in range(cp.dim_l)])


# -- the two cochain maps ---------------------------------------------------------------


def restrict_psi(cp: CrossedProduct, w: Cochain) -> Cochain:
    """Restrict every slot to 1 (x) e_i and 1 (x) h_j; values stay in V_N."""
    n, p = cp.dim_l, cp.base[1].dim
    comps = []
    for k, c in enumerate(w.comps):
        m = w.degree - 2 * k
        idx = (slice(None),) + (slice(0, n),) * m + (slice(0, p),) * k + (slice(None),)
        comps.append(c[idx].contiguous())
    return Cochain(cp.base_context(), w.degree, comps)


def _common(ts: list[ZT]):
    L = lcm(*(t.den for t in ts)) if ts else 1
    obj = any(t.data.dtype == object for t in ts)
    out = []
    for t in ts:
        d = t.data.astype(object) if obj and t.data.dtype != object else t.data
        f = L // t.den
        if f != 1:
            if d.dtype != object and np.abs(d).max(initial=0) * f >= (1 << 62):
                return _common([ZT(x.data.astype(object), x.den) for x in ts])
            d = d * f
        out.append(d)
    return out, L, obj


def extend_phi(cp: CrossedProduct, w: Cochain) -> Cochain:
    """Extend a cochain on (L, H, V_N) to the crossed product.

    H slots are extended S(Z)-linearly; ambient slots by weak R-linearity,
    always peeling the monomial off the first slot that carries one.
    """
    ctx = cp.context()
    sc = ctx.scalar
    n, p = cp.dim_l, cp.base[1].dim
    M = cp.n_monos
    pp = M * p
    dvn = cp.hdata.dim_v
    B = w.batch
    vmod = sc.vmod
    dpart = sc.dpart_h  # (r, pp)
    pv = sc.pair[:n].tdot(vmod, ([2], [0]))  # (i_a, E_b, w, w')

    def act(mono: int, t: ZT) -> ZT:
        return vmod[mono].tdot(t, ([1], [t.ndim - 1])).moveaxis(0, -1)

    def expand_h(X: ZT, m: int, k: int) -> ZT:
        """S(Z)-linear extension of the H slots: (B, n^m, p^k, dvn) -> (B, n^m, pp^k, dvn)."""
        for t in range(k):
            ax = 1 + m + t
            parts = [act(mu, X) for mu in range(M)]  # each with the same axes
            st = _stack_axis(parts, ax)  # (..., M, p, ...)
            shp = st.shape[:ax] + (pp,) + st.shape[ax + 2:]
            X = st.reshape(shp)
        return X

    memo: dict = {}

    def F(k: int, mus: tuple) -> ZT:
        key = (k, mus)
        if key in memo:
            return memo[key]
        m = len(mus)
        a = next((i for i, mu in enumerate(mus) if mu != 0), None)
        if a is None:
            val = expand_h(w.comps[k], m, k)
        else:
            f = mus[a]
            base = mus[:a] + (0,) + mus[a + 1:]
            val = act(f, F(k, base))
            for b in range(a + 1, m):
                rest = tuple(mu for i, mu in enumerate(mus) if i not in (a, b))
                G = F(k + 1, rest)
                if G.is_zero():
                    continue
                G = dpart[f].tdot(G, ([0], [1 + (m - 2)]))  # first H slot gets d f
                P = pv[:, mus[b] * n:(mus[b] + 1) * n]
                T = P.tdot(G, ([3], [G.ndim - 1]))  # (ia, ib, w, B, E', H...)
                names = ["ia", "ib", "w", "B"] + [f"F{i}" for i in range(m - 2)] + [f"H{i}" for i in range(k)]
                it = iter(f"F{i}" for i in range(m - 2))
                outE = ["ia" if i == a else "ib" if i == b else next(it) for i in range(m)]
                out = ["B"] + outE + [f"H{i}" for i in range(k)] + ["w"]
                T = T.transpose([names.index(x) for x in out])
                val = val + T if (b - a) % 2 == 0 else val - T
        memo[key] = val
        return val

    lay = layout(ctx, w.degree)
    comps = []
    for k in range(w.degree // 2 + 1):
        m = w.degree - 2 * k
        tuples = list(np.ndindex(*(M,) * m)) if m else [()]
        vals = [F(k, tuple(int(x) for x in t)) for t in tuples]
        datas, den, obj = _common(vals)
        full = np.zeros((B,) + (M, n) * m + (pp,) * k + (dvn,), dtype=object if obj else np.int64)
        for t, d in zip(tuples, datas):
            idx = (slice(None),)
            for mu in t:
                idx += (mu, slice(None))
            full[idx] = d
        comps.append(ZT(full.reshape(lay.comp_shape(k, B)), den).reduced())
    return Cochain(ctx, w.degree, comps)


def _stack_axis(parts: list[ZT], axis: int) -> ZT:
    datas, den, _ = _common(parts)
    return ZT(np.stack(datas, axis=axis), den)


# -- cochains with values in the degree-zero layer -----------------------------------------


def _register_c0(cp: CrossedProduct) -> None:
    ctx = cp._cache["ctx"]
    n, p, dv = cp.dim_l, cp.base[1].dim, cp.base[2].dim_v

    def c0(ctx_, deg, comps):
        for k, c in enumerate(comps):
            m = deg - 2 * k
            idx = (slice(None),) + (slice(0, n),) * m + (slice(0, p),) * k + (slice(dv, None),)
            yield (f"degree-zero values k={k}", c[idx])

    ctx.__dict__.setdefault("_extras", {})["c0"] = c0


def c0_subcomplex(cp: CrossedProduct, n: int):
    from .hcomplex import cochain_space

    return cochain_space(cp.context(), n, "c0")
