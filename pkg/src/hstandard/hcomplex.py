"""The H-standard cochain complex: cochain spaces, d = d0 + delta + d', cohomology.

A degree-n cochain is a list of component tensors, component k of shape
``(B, N,)*m + (p,)*k + (dv,)`` with ``m = n - 2k``: a leading batch axis, m
ambient arguments, k symmetric H arguments (stored in full, symmetric) and the
V coordinate.  Raw coordinates keep each H-multiset once (sorted indices).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import lcm

import numpy as np

from .context import HContext
from .exactla import ExactMatrix, Subspace, echelon, nullspace, solve
from .report import ValidationReport
from .ztensor import ZT


class ClosureError(RuntimeError):
    """The coboundary of a valid cochain violated the cochain conditions."""


# -- raw coordinate layout -------------------------------------------------------------


class Layout:
    def __init__(self, N: int, p: int, dv: int, n: int):
        self.N, self.p, self.dv, self.n = N, p, dv, n
        self.blocks = []
        off = 0
        for k in range(n // 2 + 1):
            m = n - 2 * k
            ms = list(combinations_with_replacement(range(p), k))
            size = N ** m * len(ms) * dv
            pos = {t: i for i, t in enumerate(ms)}
            full = list(product(range(p), repeat=k))
            sym_index = np.array([pos[tuple(sorted(t))] for t in full], dtype=np.int64) \
                if ms else np.zeros(len(full), dtype=np.int64)
            rep_index = np.array([full.index(t) for t in ms], dtype=np.int64) if ms else np.zeros(0, np.int64)
            self.blocks.append(dict(k=k, m=m, multisets=ms, pos=pos, offset=off, size=size,
                                    sym_index=sym_index, rep_index=rep_index))
            off += size
        self.raw_dim = off

    def index(self, k: int, es, hs, v: int) -> int:
        b = self.blocks[k]
        flat = 0
        for e in es:
            flat = flat * self.N + e
        return b["offset"] + (flat * len(b["multisets"]) + b["pos"][tuple(sorted(hs))]) * self.dv + v

    def decode(self, idx: int):
        for b in self.blocks:
            if b["offset"] <= idx < b["offset"] + b["size"]:
                local = idx - b["offset"]
                v = local % self.dv
                local //= self.dv
                s = local % len(b["multisets"])
                flat = local // len(b["multisets"])
                es = []
                for _ in range(b["m"]):
                    es.append(flat % self.N)
                    flat //= self.N
                return b["k"], tuple(reversed(es)), b["multisets"][s], v
        raise IndexError(idx)

    def comp_shape(self, k: int, batch: int) -> tuple:
        m = self.n - 2 * k
        return (batch,) + (self.N,) * m + (self.p,) * k + (self.dv,)

    def to_components(self, raw: ZT) -> list[ZT]:
        B = raw.shape[0]
        comps = []
        for b in self.blocks:
            blk = raw[:, b["offset"]:b["offset"] + b["size"]]
            S = len(b["multisets"])
            if S == 0:
                comps.append(ZT.zeros(self.comp_shape(b["k"], B)))
                continue
            blk = blk.reshape((B, self.N ** b["m"], S, self.dv))
            full = blk.take(b["sym_index"], axis=2)
            comps.append(full.reshape(self.comp_shape(b["k"], B)).contiguous())
        return comps

    def from_components(self, comps: list[ZT]) -> ZT:
        B = comps[0].shape[0]
        parts = []
        for b, c in zip(self.blocks, comps):
            if b["size"] == 0:
                continue
            flat = c.reshape((B, self.N ** b["m"], self.p ** b["k"], self.dv))
            parts.append(flat.take(b["rep_index"], axis=2).reshape((B, b["size"])))
        if not parts:
            return ZT.zeros((B, 0))
        return concat(parts, axis=1)

    def increasing_mask(self) -> np.ndarray:
        """Raw coordinates whose ambient indices are strictly increasing."""
        mask = np.zeros(self.raw_dim, dtype=bool)
        for b in self.blocks:
            S = len(b["multisets"])
            if S == 0:
                continue
            tuples = product(range(self.N), repeat=b["m"])
            inc = np.array([all(t[i] < t[i + 1] for i in range(len(t) - 1)) for t in tuples], dtype=bool)
            mask[b["offset"]:b["offset"] + b["size"]] = np.repeat(inc, S * self.dv)
        return mask


def concat(parts: list[ZT], axis: int) -> ZT:
    L = lcm(*(p.den for p in parts))
    obj = any(p.data.dtype == object for p in parts)
    arrs = []
    for p in parts:
        d = p.data.astype(object) if obj and p.data.dtype != object else p.data
        f = L // p.den
        if f != 1:
            d = ZT(d, 1).scale(f).data
            if d.dtype == object and not obj:
                return concat([ZT(x.data.astype(object), x.den) for x in parts], axis)
        arrs.append(d)
    return ZT(np.concatenate(arrs, axis=axis), L)


# -- cochains ---------------------------------------------------------------------------


class Cochain:
    """A batch of degree-n cochains (batch size 1 for a single cochain)."""

    def __init__(self, ctx: HContext, degree: int, comps: list[ZT]):
        self.ctx = ctx
        self.degree = degree
        self.comps = comps
        lay = layout(ctx, degree)
        for k, c in enumerate(comps):
            if c.shape[1:] != lay.comp_shape(k, 1)[1:]:
                raise ValueError(f"component {k} has shape {c.shape}")

    @property
    def batch(self) -> int:
        return self.comps[0].shape[0]

    @classmethod
    def zero(cls, ctx: HContext, n: int, batch: int = 1) -> "Cochain":
        lay = layout(ctx, n)
        return cls(ctx, n, [ZT.zeros(lay.comp_shape(k, batch)) for k in range(n // 2 + 1)])

    @classmethod
    def from_raw(cls, ctx: HContext, n: int, raw) -> "Cochain":
        lay = layout(ctx, n)
        if not isinstance(raw, ZT):
            raw = ZT.from_exact([list(raw)] if raw and not isinstance(raw[0], (list, tuple)) else raw)
        return cls(ctx, n, lay.to_components(raw))

    @classmethod
    def from_entries(cls, ctx: HContext, n: int, entries) -> "Cochain":
        """entries: iterable of (k, es, hs, value-vector); H slots filled symmetrically."""
        lay = layout(ctx, n)
        raw = [Fraction(0)] * lay.raw_dim
        for k, es, hs, val in entries:
            for v, x in enumerate(val):
                raw[lay.index(k, es, hs, v)] = Fraction(x)
        return cls.from_raw(ctx, n, raw)

    def raw(self) -> ZT:
        return layout(self.ctx, self.degree).from_components(self.comps)

    def raw_vector(self, b: int = 0) -> list[Fraction]:
        return list(self.raw()[b].to_fractions())

    def __getitem__(self, b) -> "Cochain":
        sl = slice(b, b + 1) if isinstance(b, int) else b
        return Cochain(self.ctx, self.degree, [c[sl] for c in self.comps])

    def value(self, k: int, es, hs, b: int = 0) -> list[Fraction]:
        c = self.comps[k]
        idx = (b,) + tuple(es) + tuple(hs)
        return [c.item(idx + (v,)) for v in range(self.ctx.dim_v)]

    def __add__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.ctx, self.degree, [(a + b).reduced() for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.ctx, self.degree, [(a - b).reduced() for a, b in zip(self.comps, other.comps)])

    def __neg__(self) -> "Cochain":
        return Cochain(self.ctx, self.degree, [-a for a in self.comps])

    def scale(self, c) -> "Cochain":
        return Cochain(self.ctx, self.degree, [a.scale(c) for a in self.comps])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def combine(self, coeffs) -> "Cochain":
        """Linear combinations of the batch: coeffs has shape (new_batch, batch)."""
        cz = coeffs if isinstance(coeffs, ZT) else ZT.from_exact(coeffs)
        return Cochain(self.ctx, self.degree, [cz.tdot(c, ([1], [0])).reduced() for c in self.comps])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.degree == other.degree and (self - other).is_zero()

    def __repr__(self):
        return f"Cochain(degree={self.degree}, batch={self.batch})"


def layout(ctx: HContext, n: int) -> Layout:
    cache = ctx.__dict__.setdefault("_layouts", {})
    if n not in cache:
        cache[n] = Layout(ctx.dim, ctx.p, ctx.dim_v, n)
    return cache[n]


# -- axis bookkeeping -------------------------------------------------------------------


def _E(m, pre="E"):
    return [f"{pre}{i}" for i in range(m)]


def _H(k, pre="H"):
    return [f"{pre}{i}" for i in range(k)]


def _arrange(t: ZT, names: list, out: list) -> ZT:
    perm = [names.index(x) for x in out]
    if perm == list(range(len(perm))):
        return t
    return t.transpose(perm)


def _sum(terms: list[ZT], shape) -> ZT:
    out = None
    for t in terms:
        out = t if out is None else out + t
    return ZT.zeros(shape) if out is None else out


# -- the three parts of the differential ---------------------------------------------------


def _d0_component(ctx: HContext, X: ZT, m: int, k: int) -> ZT:
    B = X.shape[0]
    out_shape = (B,) + (ctx.dim,) * (m + 1) + (ctx.p,) * k + (ctx.dim_v,)
    terms = []
    E, H = _E(m), _H(k)
    T = ctx.nabla.tdot(X, ([2], [X.ndim - 1]))
    tn = ["i", "r", "B"] + E + H
    for a0 in range(m + 1):
        t = _arrange(T, tn, ["B"] + E[:a0] + ["i"] + E[a0:] + H + ["r"])
        terms.append(t if a0 % 2 == 0 else -t)
    for b0 in range(1, m + 1):
        q = b0 - 1
        T = ctx.bracket.tdot(X, ([2], [1 + q]))
        tn = ["ia", "ib", "B"] + [E[t] for t in range(m) if t != q] + H + ["V"]
        for a0 in range(b0):
            outE = []
            for pos in range(m + 1):
                if pos == a0:
                    outE.append("ia")
                elif pos == b0:
                    outE.append("ib")
                else:
                    outE.append(E[pos if pos < a0 else pos - 1])
            t = _arrange(T, tn, ["B"] + outE + H + ["V"])
            terms.append(-t if a0 % 2 == 0 else t)
    return _sum(terms, out_shape)


def apply_d0(ctx: HContext, w: Cochain) -> list[ZT]:
    """d0 on each component, H arguments carried along; degree n+1 layout."""
    n = w.degree
    lay = layout(ctx, n + 1)
    out = []
    for k in range((n + 1) // 2 + 1):
        if k <= n // 2:
            out.append(_d0_component(ctx, w.comps[k], n - 2 * k, k))
        else:
            out.append(ZT.zeros(lay.comp_shape(k, w.batch)))
    return out


def apply_delta(ctx: HContext, w: Cochain) -> list[ZT]:
    """(delta w)_k = sum_i w_{k-1}(h_i, e...; ...h_i omitted...), (delta w)_0 = 0."""
    n = w.degree
    lay = layout(ctx, n + 1)
    B = w.batch
    out = [ZT.zeros(lay.comp_shape(0, B))]
    for k in range(1, (n + 1) // 2 + 1):
        X = w.comps[k - 1]
        mx = n - 2 * (k - 1)
        E, H = _E(mx), _H(k - 1)
        U = ctx.h_amb.tdot(X, ([1], [1]))
        tn = ["j", "B"] + E[1:] + H + ["V"]
        terms = [_arrange(U, tn, ["B"] + E[1:] + H[:i] + ["j"] + H[i:] + ["V"]) for i in range(k)]
        out.append(_sum(terms, lay.comp_shape(k, B)))
    return out


def _dprime_component(ctx: HContext, X: ZT, m: int, k: int) -> ZT:
    B = X.shape[0]
    shape = (B,) + (ctx.dim,) * (m + 1) + (ctx.p,) * k + (ctx.dim_v,)
    E, H = _E(m), _H(k)
    terms = []
    for i in range(k):
        T = ctx.h_on_e.tdot(X, ([2], [1 + m + i]))
        tn = ["jn", "ia", "B"] + E + [H[t] for t in range(k) if t != i] + ["V"]
        outH = [H[t] if t != i else "jn" for t in range(k)]
        for a0 in range(m + 1):
            t = _arrange(T, tn, ["B"] + E[:a0] + ["ia"] + E[a0:] + outH + ["V"])
            terms.append(t if a0 % 2 == 0 else -t)
    return _sum(terms, shape)


def apply_dprime(ctx: HContext, w: Cochain) -> list[ZT]:
    """(d'w)_k = sum_{a,i} (-1)^{a+1} w_k(...e_a omitted...; ...h_i o e_a in slot i...)."""
    n = w.degree
    lay = layout(ctx, n + 1)
    out = []
    for k in range((n + 1) // 2 + 1):
        if k > n // 2 or k == 0:
            out.append(ZT.zeros(lay.comp_shape(k, w.batch)))
        else:
            out.append(_dprime_component(ctx, w.comps[k], n - 2 * k, k))
    return out


def raw_coboundary(ctx: HContext, w: Cochain) -> Cochain:
    """d = d0 + delta + d' without the closure check."""
    parts = [apply_d0(ctx, w), apply_delta(ctx, w), apply_dprime(ctx, w)]
    comps = [(a + b + c).reduced() for a, b, c in zip(*parts)]
    return Cochain(ctx, w.degree + 1, comps)


def coboundary(ctx: HContext, w: Cochain, check: bool = True) -> Cochain:
    dw = raw_coboundary(ctx, w)
    if check:
        rep = check_conditions(ctx, dw)
        if not rep.ok:
            raise ClosureError(str(rep.first_failure.name) + f" witness {rep.first_failure.witness}")
    return dw


# -- cochain conditions as residuals ----------------------------------------------------------


def _residuals(ctx: HContext, n: int, comps: list[ZT], generators_only: bool = False):
    """Yield (name, residual) pairs; every residual has the batch axis first.

    With ``generators_only`` weak R-linearity is imposed for algebra
    generators of R only; the products then follow from R-linearity in H and
    the derivation rule for d.
    """
    for k in range(n // 2 + 1):
        m = n - 2 * k
        X = comps[k]
        E, H = _E(m), _H(k)
        base = ["B"] + E + H + ["V"]
        if m >= 2:
            Y = comps[k + 1]
            EY, HY = _E(m - 2, "F"), _H(k + 1, "G")
            T = ctx.pair_h.tdot(Y, ([2], [1 + (m - 2)]))
            tn = ["ia", "ib", "B"] + EY + HY[1:] + ["V"]
            for a0 in range(m - 1):
                swapped = base[:1 + a0] + [E[a0 + 1], E[a0]] + base[3 + a0:]
                S = _arrange(X, base, swapped)
                Q = _arrange(T, tn, ["B"] + EY[:a0] + ["ia", "ib"] + EY[a0:] + HY[1:] + ["V"])
                yield (f"weak skew-symmetry k={k} a={a0}", X + S + Q)
        sc = ctx.scalar
        if sc is None:
            continue
        scalars = sc.generators if generators_only and sc.generators is not None else range(sc.dim_r)
        for s in scalars:
            vm = sc.vmod[s]
            L2 = _arrange(vm.tdot(X, ([1], [X.ndim - 1])), ["r", "B"] + E + H, base[:-1] + ["r"])
            for a0 in range(m):
                T = sc.modact[s].tdot(X, ([0], [1 + a0]))
                tn = ["i", "B"] + [E[t] for t in range(m) if t != a0] + H + ["V"]
                L1 = _arrange(T, tn, ["B"] + E[:a0] + ["i"] + E[a0 + 1:] + H + ["V"])
                res = L1 - L2
                if a0 < m - 1:
                    Y = comps[k + 1]
                    EY, HY = _E(m - 2, "F"), _H(k + 1, "G")
                    Yd = sc.dpart_h[s].tdot(Y, ([0], [1 + (m - 2)]))
                    MV = sc.pair.tdot(sc.vmod, ([2], [0]))
                    W = MV.tdot(Yd, ([3], [Yd.ndim - 1]))
                    tn = ["ia", "ib", "r", "B"] + EY + HY[1:]
                    for b0 in range(a0 + 1, m):
                        outE = []
                        it = iter(EY)
                        for pos in range(m):
                            outE.append("ia" if pos == a0 else "ib" if pos == b0 else next(it))
                        t = _arrange(W, tn, ["B"] + outE + HY[1:] + ["r"])
                        res = res - t if (b0 - a0) % 2 == 0 else res + t
                yield (f"weak R-linearity k={k} f={s} a={a0}", res)
            if k >= 1:
                T = sc.hmod[s].tdot(X, ([1], [1 + m]))
                tn = ["j", "B"] + E + H[1:] + ["V"]
                L1 = _arrange(T, tn, ["B"] + E + ["j"] + H[1:] + ["V"])
                yield (f"R-linearity in H k={k} f={s}", L1 - L2)


def _nv_residuals(ctx: HContext, n: int, comps: list[ZT]):
    for k in range(1, n // 2 + 1):
        yield (f"vanishing component k={k}", comps[k])
    if n >= 1:
        yield ("contraction with H", ctx.h_amb.tdot(comps[0], ([1], [1])).moveaxis(1, 0))


EXTRA = {"nv": _nv_residuals}


def _extra_residuals(ctx: HContext, name: str, n: int, comps: list[ZT]):
    fn = EXTRA.get(name) or ctx.__dict__.get("_extras", {}).get(name)
    if fn is None:
        raise KeyError(f"unknown subcomplex {name!r}")
    return fn(ctx, n, comps)


def check_conditions(ctx: HContext, w: Cochain, extra: str | None = None, full: bool = False) -> ValidationReport:
    """Conditions 1)-3) on every cochain of the batch.

    Unless ``full`` is set, weak R-linearity is checked for algebra generators
    of R only, which implies it for all of R.
    """
    rep = ValidationReport(f"cochain conditions (degree {w.degree})")
    gens = [_residuals(ctx, w.degree, w.comps, generators_only=not full)]
    if extra:
        gens.append(_extra_residuals(ctx, extra, w.degree, w.comps))
    rep.check("conditions")
    for gen in gens:
        for name, r in gen:
            ch = rep.check("conditions")
            ch.checked += 1
            if not r.is_zero() and ch.passed:
                ch.passed = False
                idx = np.argwhere(r.data != 0)[0]
                ch.witness = (name,) + tuple(int(x) for x in idx)
    return rep


# -- solving the constraints ---------------------------------------------------------------


def _priority(lay: Layout) -> np.ndarray:
    """Elimination priority: lower components and later tuples are eliminated first."""
    order = []
    for b in reversed(lay.blocks):
        order.extend(range(b["offset"], b["offset"] + b["size"]))
    prio = np.empty(lay.raw_dim, dtype=np.int64)
    prio[np.array(order, dtype=np.int64)] = np.arange(lay.raw_dim)
    return prio


def _jacobian_rows(ctx: HContext, n: int, extra: str | None, chunk: int = 96) -> list[dict]:
    lay = layout(ctx, n)
    rows: dict[tuple, dict] = {}
    for start in range(0, lay.raw_dim, chunk):
        stop = min(start + chunk, lay.raw_dim)
        units = np.zeros((stop - start, lay.raw_dim), dtype=np.int64)
        units[np.arange(stop - start), np.arange(start, stop)] = 1
        comps = lay.to_components(ZT(units))
        gens = [_residuals(ctx, n, comps, generators_only=True)]
        if extra:
            gens.append(_extra_residuals(ctx, extra, n, comps))
        eq_base = 0
        for gen in gens:
            for name, r in gen:
                size = int(np.prod(r.shape[1:])) if r.ndim > 1 else 1
                flat = r.data.reshape(r.shape[0], -1)
                bs, pos = np.nonzero(flat)
                for b_, p_ in zip(bs.tolist(), pos.tolist()):
                    key = (name, p_)
                    row = rows.get(key)
                    if row is None:
                        row = rows[key] = {}
                    row[start + b_] = Fraction(int(flat[b_, p_]), r.den)
                eq_base += size
    return list(rows.values())


def _eliminate(rows: list[dict], prio: np.ndarray) -> dict:
    pr = prio.tolist()
    key = pr.__getitem__
    pivots: dict[int, dict] = {}
    seen = set()
    rows.sort(key=lambda r: (max(pr[v] for v in r), len(r)))
    for row in rows:
        if not row:
            continue
        lead = max(row, key=key)
        c = row[lead]
        sig = tuple(sorted((v, x / c) for v, x in row.items()))
        if sig in seen:
            continue
        seen.add(sig)
        row = dict(row)
        while row:
            lead = max(row, key=key)
            piv = pivots.get(lead)
            if piv is None:
                break
            f = row[lead]
            for v, x in piv.items():
                y = row.get(v, 0) - f * x
                if y:
                    row[v] = y
                else:
                    row.pop(v, None)
        if not row:
            continue
        c = row[lead]
        pivots[lead] = {v: x / c for v, x in row.items()}
    return pivots


@dataclass(eq=False)
class ComplexBasis:
    ctx: HContext
    degree: int
    layout: Layout
    free: list  # free raw coordinates, in increasing priority
    matrix: ZT  # (dim, raw_dim): basis vectors as rows
    extra: str | None = None
    _cochains: Cochain | None = field(default=None, repr=False)

    @property
    def raw_dim(self) -> int:
        return self.layout.raw_dim

    @property
    def dim(self) -> int:
        return len(self.free)

    def cochains(self) -> Cochain:
        if self._cochains is None:
            if self.dim == 0:
                self._cochains = Cochain.zero(self.ctx, self.degree, 0)
            else:
                self._cochains = Cochain(self.ctx, self.degree, self.layout.to_components(self.matrix))
        return self._cochains

    def coordinates(self, w: Cochain) -> ZT:
        """Coordinates of valid cochains in this basis: their values at the free coordinates."""
        raw = w.raw()
        return raw.take(self.free, axis=1) if self.free else ZT.zeros((w.batch, 0))

    def contains(self, w: Cochain) -> bool:
        coords = self.coordinates(w)
        back = coords.tdot(self.matrix, ([1], [0])) if self.dim else ZT.zeros((w.batch, self.raw_dim))
        return (back - w.raw()).is_zero()

    @property
    def basis(self) -> Subspace:
        rows = self.matrix.to_fractions().tolist() if self.dim else []
        return Subspace.span(rows, self.raw_dim)


def cochain_space(ctx: HContext, n: int, extra: str | None = None) -> ComplexBasis:
    cache = ctx.__dict__.setdefault("_spaces", {})
    key = (n, extra)
    if key in cache:
        return cache[key]
    lay = layout(ctx, n)
    rows = _jacobian_rows(ctx, n, extra) if lay.raw_dim else []
    prio = _priority(lay)
    pivots = _eliminate(rows, prio)
    pr = prio.tolist()
    free = sorted((v for v in range(lay.raw_dim) if v not in pivots), key=pr.__getitem__)
    fpos = {v: i for i, v in enumerate(free)}
    nf: dict[int, dict] = {v: {fpos[v]: Fraction(1)} for v in free}
    for v in sorted(pivots, key=pr.__getitem__):
        acc: dict[int, Fraction] = {}
        for u, x in pivots[v].items():
            if u == v:
                continue
            for j, y in nf[u].items():
                z = acc.get(j, 0) - x * y
                if z:
                    acc[j] = z
                else:
                    acc.pop(j, None)
        nf[v] = acc
    mat = [[Fraction(0)] * lay.raw_dim for _ in free]
    for v, d in nf.items():
        for j, x in d.items():
            mat[j][v] = x
    matrix = ZT.from_exact(mat) if free else ZT.zeros((0, lay.raw_dim))
    cb = ComplexBasis(ctx, n, lay, free, matrix, extra)
    cache[key] = cb
    return cb


def nv_subcomplex(ctx: HContext, n: int) -> ComplexBasis:
    """Cochains with w_k = 0 for k >= 1 and w_0 vanishing when an argument lies in H."""
    return cochain_space(ctx, n, "nv")


# -- cohomology ------------------------------------------------------------------------------


def _fr_rows(z: ZT) -> list[list[Fraction]]:
    return z.to_fractions().tolist() if z.shape[0] else []


def differential_matrix(ctx: HContext, n: int, extra: str | None = None, target=None) -> list[list[Fraction]]:
    """Rows: images of the C^n basis, in target coordinates (C^{n+1} basis, or
    the strictly-increasing raw coordinates when target is None)."""
    src = cochain_space(ctx, n, extra)
    if src.dim == 0:
        return []
    dw = coboundary(ctx, src.cochains())
    if target is not None:
        if not target.contains(dw):
            raise ClosureError(f"image of degree {n} is not in the target cochain space")
        return _fr_rows(target.coordinates(dw))
    lay = layout(ctx, n + 1)
    mask = np.flatnonzero(lay.increasing_mask())
    return _fr_rows(dw.raw().take(mask.tolist(), axis=1))


@dataclass
class CohomologyResult:
    degree: int
    dim: int
    cochain_dim: int
    representatives: Cochain | None


def cohomology(ctx: HContext, n_max: int, extra: str | None = None) -> list[CohomologyResult]:
    results = []
    prev_rows = None  # images of C^{n-1} in C^n coordinates
    for n in range(n_max + 1):
        cn = cochain_space(ctx, n, extra)
        target = cochain_space(ctx, n + 1, extra) if n < n_max else None
        rows = differential_matrix(ctx, n, extra, target)
        if cn.dim == 0:
            results.append(CohomologyResult(n, 0, 0, None))
            prev_rows = rows
            continue
        if rows and rows[0]:
            ker = nullspace(ExactMatrix.from_rows(rows).transpose())
        else:
            ker = Subspace.full(cn.dim)
        image = Subspace.span(prev_rows, cn.dim) if prev_rows else Subspace.zero(cn.dim)
        rem = [image.reduce(v) for v in ker.basis]
        rem = [v for v in rem if any(v)]
        reps_coords, _ = echelon(rem, cn.dim) if rem else ([], [])
        dim = ker.dim - image.dim
        assert dim == len(reps_coords)
        reps = cn.cochains().combine(reps_coords) if reps_coords else None
        results.append(CohomologyResult(n, dim, cn.dim, reps))
        prev_rows = rows
    return results


def cohomology_dims(ctx: HContext, n_max: int, extra: str | None = None) -> list[int]:
    return [r.dim for r in cohomology(ctx, n_max, extra)]


def solve_coboundary(ctx: HContext, w: Cochain, extra: str | None = None) -> Cochain | None:
    """Some mu of degree n-1 with d mu = w (first cochain of the batch), or None.

    Degree 0 has no cochains below it, so the answer there is always None.
    """
    n = w.degree
    if n == 0:
        return None
    src = cochain_space(ctx, n - 1, extra)
    tgt = cochain_space(ctx, n, extra)
    if not tgt.contains(w[0]):
        return None
    rhs = _fr_rows(tgt.coordinates(w[0]))[0]
    if src.dim == 0:
        return Cochain.zero(ctx, n - 1) if not any(rhs) else None
    rows = differential_matrix(ctx, n - 1, extra, tgt)
    x = solve(ExactMatrix.from_rows(rows, tgt.dim).transpose(), rhs) if tgt.dim else [Fraction(0)] * src.dim
    if x is None:
        return None
    return src.cochains().combine([x])


def is_coboundary(ctx: HContext, w: Cochain, extra: str | None = None) -> bool:
    if w.degree == 0:
        return w[0].is_zero()
    return solve_coboundary(ctx, w, extra) is not None


# -- degrees 0, 1, 2 -------------------------------------------------------------------------------


def invariants(ctx: HContext) -> Subspace:
    dv = ctx.dim_v
    rows = ctx.nabla.to_fractions().reshape(ctx.dim * dv, dv).tolist() if ctx.dim else []
    if not rows:
        return Subspace.full(dv)
    return nullspace(ExactMatrix.from_rows(rows, dv))


def outer_derivations(ctx: HContext) -> tuple[int, Subspace]:
    """Derivations E -> V vanishing on H (R-linear when scalars are present) modulo inner ones.

    Returns the dimension and the space of all such derivations (coordinates
    D[i][r] flattened i-major).
    """
    N, dv = ctx.dim, ctx.dim_v
    nvar = N * dv
    if nvar == 0:
        return 0, Subspace.zero(0)
    b = ctx.bracket.to_fractions()
    nab = ctx.nabla.to_fractions()
    hb = ctx.h_amb.to_fractions()
    rows = []

    def var(i, r):
        return i * dv + r

    for i in range(N):
        for j in range(N):
            for r in range(dv):
                row = [Fraction(0)] * nvar
                for l in range(N):
                    if b[i, j, l]:
                        row[var(l, r)] += b[i, j, l]
                for s in range(dv):
                    row[var(j, s)] -= nab[i, r, s]
                    row[var(i, s)] += nab[j, r, s]
                rows.append(row)
    for hj in range(ctx.p):
        for r in range(dv):
            row = [Fraction(0)] * nvar
            for i in range(N):
                row[var(i, r)] += hb[hj, i]
            rows.append(row)
    if ctx.scalar is not None:
        M = ctx.scalar.modact.to_fractions()
        A = ctx.scalar.vmod.to_fractions()
        for s in range(ctx.scalar.dim_r):
            for i in range(N):
                for r in range(dv):
                    row = [Fraction(0)] * nvar
                    for l in range(N):
                        row[var(l, r)] += M[s, l, i]
                    for t in range(dv):
                        row[var(i, t)] -= A[s, r, t]
                    rows.append(row)
    ders = nullspace(ExactMatrix.from_rows(rows, nvar))
    inner = Subspace.span([[nab[i, r, s] for i in range(N) for r in range(dv)] for s in range(dv)], nvar)
    return ders.dim - inner.dim, ders


@dataclass
class Extension:
    algebra: object  # LeibnizAlgebra or CourantDorfmanAlgebra
    h: Subspace
    hdata: object | None = None


def _cocycle_parts(ctx: HContext, w: Cochain):
    w0 = w.comps[0][0].to_fractions()  # (N, N, dv)
    w1 = w.comps[1][0].to_fractions() if ctx.p else np.zeros((0, ctx.dim_v), dtype=object)  # (p, dv)
    return w0, w1


def extension_from_2cocycle(ctx: HContext, w: Cochain) -> Extension:
    """E + V with the twisted bracket and H-bar = {h - w_1(h)}."""
    from .cdalgebra import CourantDorfmanAlgebra
    from .leibniz import LeibnizAlgebra

    if w.degree != 2:
        raise ValueError("extensions need a degree-2 cochain")
    if not raw_coboundary(ctx, w).is_zero():
        raise ValueError("the cochain is not closed")
    N, dv, p = ctx.dim, ctx.dim_v, ctx.p
    T = N + dv
    b = ctx.bracket.to_fractions()
    nab = ctx.nabla.to_fractions()
    w0, w1 = _cocycle_parts(ctx, w)
    c = [[[Fraction(0)] * T for _ in range(T)] for _ in range(T)]
    for i in range(N):
        for j in range(N):
            for k in range(N):
                c[i][j][k] = b[i, j, k]
            for r in range(dv):
                c[i][j][N + r] = w0[i, j, r]
        for s in range(dv):
            for r in range(dv):
                c[i][N + s][N + r] += nab[i, r, s]
                c[N + s][i][N + r] -= nab[i, r, s]
    hb = ctx.h_amb.to_fractions()
    hbar = [list(hb[j]) + [-x for x in w1[j]] for j in range(p)]
    H = Subspace.span(hbar, T)
    if ctx.scalar is None:
        return Extension(LeibnizAlgebra(T, c), H)
    sc = ctx.scalar
    cd = ctx.source[0]
    M = sc.modact.to_fractions()
    A = sc.vmod.to_fractions()
    mod = np.zeros((sc.dim_r, T, T), dtype=object)
    mod[...] = Fraction(0)
    mod[:, :N, :N] = M
    mod[:, N:, N:] = A
    pair = np.zeros((T, T, sc.dim_r), dtype=object)
    pair[...] = Fraction(0)
    pair[:N, :N, :] = sc.pair.to_fractions()
    D = sc.partial.to_fractions()  # (N, r)
    dpart_h = sc.dpart_h.to_fractions()  # (r, p)
    Dbar = np.zeros((T, sc.dim_r), dtype=object)
    Dbar[...] = Fraction(0)
    Dbar[:N, :] = D
    for a in range(sc.dim_r):
        for j in range(p):
            if dpart_h[a, j]:
                for r in range(dv):
                    Dbar[N + r, a] -= dpart_h[a, j] * w1[j, r]
    ext = CourantDorfmanAlgebra(cd.r, T, mod.tolist(), pair.tolist(), Dbar.tolist(), c)
    return Extension(ext, H)


def extension_isomorphism(ctx: HContext, lam: Cochain) -> list[list[Fraction]]:
    """Matrix of (e + v) -> (e + v + lam_0(e)) on E + V (acts on columns)."""
    N, dv = ctx.dim, ctx.dim_v
    l0 = lam.comps[0][0].to_fractions()  # (N, dv)
    T = N + dv
    m = [[Fraction(int(i == j)) for j in range(T)] for i in range(T)]
    for i in range(N):
        for r in range(dv):
            m[N + r][i] += l0[i, r]
    return m


def _ext_tensors(ext: Extension):
    from .leibniz import LeibnizAlgebra

    a = ext.algebra
    if isinstance(a, LeibnizAlgebra):
        return ZT.from_exact([[list(r) for r in plane] for plane in a.bracket]), None
    return a.bracket, a


def validate_extension(ext: Extension) -> ValidationReport:
    """The extended algebra is valid and H-bar is an isotropic two-sided ideal.

    Containment of the left center is reported on its own line: invariant
    vectors of V are central in the extension without lying in H-bar.
    """
    from .cdalgebra import validate_cd, validate_h_ideal_cd
    from .leibniz import LeibnizAlgebra, validate_h_ideal, validate_leibniz

    rep = ValidationReport("extension")
    a = ext.algebra
    if isinstance(a, LeibnizAlgebra):
        rep.merge(validate_leibniz(a), prefix="algebra: ")
        hi = validate_h_ideal(a, ext.h)
        for c in hi.checks:
            if c.name != "contains left center":
                rep.merge(ValidationReport("", [c]), prefix="H-bar: ")
    else:
        rep.merge(validate_cd(a), prefix="algebra: ")
        rep.merge(validate_h_ideal_cd(a, ext.h), prefix="H-bar: ")
    return rep


def extension_contains_center(ext: Extension) -> bool:
    from .leibniz import LeibnizAlgebra, left_center

    a = ext.algebra
    if not isinstance(a, LeibnizAlgebra):
        return True
    return all(ext.h.contains_vector(list(v)) for v in left_center(a).basis)


def transport_report(src: Extension, dst: Extension, matrix) -> ValidationReport:
    """Check that ``matrix`` (acting on columns) maps src isomorphically onto dst."""
    rep = ValidationReport("isomorphism")
    M = ZT.from_exact(matrix)
    T = M.shape[0]
    rep.record("invertible", Subspace.span(M.to_fractions().tolist(), T).dim == T)
    ba, ca = _ext_tensors(src)
    bb, cb = _ext_tensors(dst)
    lhs = ba.tdot(M, ([2], [1]))  # M(x o y): (i, j, c)
    rhs = bb.tdot(M, ([0], [0])).tdot(M, ([0], [0])).transpose((1, 2, 0))  # Mx o My
    rep.record("bracket transported", (lhs - rhs).is_zero())
    img = [list(x) for x in M.tdot(ZT.from_exact([list(r) for r in src.h.basis]), ([1], [1])).transpose((1, 0)).to_fractions()] \
        if src.h.dim else []
    rep.record("H-bar transported", Subspace.span(img, T) == dst.h)
    if ca is not None and cb is not None:
        ga = ca.pairing
        gb = cb.pairing.tdot(M, ([0], [0])).tdot(M, ([0], [0])).transpose((1, 2, 0))
        rep.record("pairing transported", (ga - gb).is_zero())
        rep.record("derivation transported", (M.tdot(ca.partial, ([1], [0])) - cb.partial).is_zero())
        ma = M.tdot(ca.module_action, ([1], [1])).moveaxis(0, 1)  # (s, c, i): M f_s
        mb = cb.module_action.tdot(M, ([2], [0]))  # f_s M
        rep.record("module action transported", (ma - mb).is_zero())
    return rep
