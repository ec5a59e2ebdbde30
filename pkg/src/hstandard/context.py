"""The data the H-standard complex needs, shared by the Leibniz and CD cases.

Tensor conventions (ambient basis e_0..e_{N-1}, H basis h_0..h_{p-1} taken
from the echelon basis of H, V basis v_0..v_{dv-1}):

* ``bracket[i, j, k]``: e_i o e_j = sum_k bracket[i, j, k] e_k
* ``nabla[i, r, s]``: matrix of the action of e_i on V
* ``pair_h[i, j, l]``: the H-valued pairing P(e_i, e_j) in H coordinates
* ``h_amb[j, i]``: h_j in ambient coordinates
* ``h_on_e[j, i, l]``: h_j o e_i in H coordinates

The optional scalar layer adds the R-actions needed by weak R-linearity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactla import Subspace
from .report import ValidationError, ValidationReport
from .ztensor import ZT


@dataclass(eq=False)
class ScalarLayer:
    dim_r: int
    mult: ZT  # (r, r, r)
    unit: ZT  # (r,)
    modact: ZT  # (r, N, N) matrix convention
    vmod: ZT  # (r, dv, dv)
    pair: ZT  # (N, N, r)
    partial: ZT  # (N, r)
    dpart_h: ZT  # (r, p): d f_s in H coordinates
    hmod: ZT  # (r, p, p): f_s h_j = sum_l hmod[s, j, l] h_l
    generators: tuple | None = None  # R-basis indices generating R as an algebra


@dataclass(eq=False)
class HContext:
    name: str
    kind: str  # "leibniz" or "cd"
    dim: int
    h: Subspace
    dim_v: int
    complement: list
    bracket: ZT
    nabla: ZT
    pair_h: ZT
    h_amb: ZT
    h_on_e: ZT
    scalar: ScalarLayer | None = None
    labels: tuple | None = None
    source: object = field(default=None, repr=False)

    @property
    def p(self) -> int:
        return self.h.dim

    @property
    def has_scalars(self) -> bool:
        return self.scalar is not None


def _coords_or_fail(h: Subspace, vecs: ZT, what: str, kinds) -> ZT:
    from .cdalgebra import h_coordinates

    coords, res = h_coordinates(h, vecs)
    if not res.is_zero():
        import numpy as np

        bad = np.argwhere(res.data.reshape(res.shape[:-1] + (-1,)).any(axis=-1))[0]
        rep = ValidationReport("context")
        rep.fail(what, tuple(zip(kinds, (int(x) for x in bad))))
        raise ValidationError(rep)
    return coords


def _default_complement(h: Subspace) -> list:
    n = h.ambient_dim
    return [[int(i == j) for j in range(n)] for i in h.complement_by_standard_vectors()]


def _check_complement(h: Subspace, comp: list) -> None:
    n = h.ambient_dim
    both = Subspace.span(list(h.basis) + [list(c) for c in comp], n)
    if both.dim != n or len(comp) != n - h.dim:
        rep = ValidationReport("context")
        rep.fail("complement spans", ("rank", both.dim, "expected", n))
        raise ValidationError(rep)


def leibniz_context(L, H: Subspace, V, name: str = "leibniz", complement=None, validate=True) -> HContext:
    from .leibniz import validate_h_ideal, validate_h_representation, validate_leibniz

    if validate:
        for rep in (validate_leibniz(L), validate_h_ideal(L, H), validate_h_representation(L, H, V)):
            if not rep.ok:
                raise ValidationError(rep)
    n = L.dim
    b = ZT.from_exact([[list(r) for r in plane] for plane in L.bracket])
    nabla = ZT.from_exact([[list(r) for r in m] for m in V.action]) if n else ZT.zeros((0, V.dim_v, V.dim_v))
    hb = ZT.from_exact([list(r) for r in H.basis]) if H.dim else ZT.zeros((0, n))
    sym = b + b.transpose((1, 0, 2))
    pair_h = _coords_or_fail(H, sym, "pairing lands in H", ("e", "e"))
    h_on_e = _coords_or_fail(H, hb.tdot(b, ([1], [0])), "H o E inside H", ("h", "e"))
    comp = [list(c) for c in complement] if complement is not None else _default_complement(H)
    _check_complement(H, comp)
    return HContext(name, "leibniz", n, H, V.dim_v, comp, b, nabla, pair_h, hb, h_on_e,
                    labels=L.basis_labels, source=(L, H, V))


def cd_context(cd, hd, name: str = "cd", complement=None, validate=True, generators=None) -> HContext:
    from .cdalgebra import validate_cd, validate_h_ideal_cd, validate_h_rep_cd

    if validate:
        for rep in (validate_cd(cd), validate_h_ideal_cd(cd, hd.h), validate_h_rep_cd(cd, hd)):
            if not rep.ok:
                raise ValidationError(rep)
    H = hd.h
    n = cd.dim_e
    hb = ZT.from_exact([list(r) for r in H.basis]) if H.dim else ZT.zeros((0, n))
    b = cd.bracket
    pair_h = _coords_or_fail(H, cd.pairing.tdot(cd.partial, ([2], [1])), "dR pairing lands in H", ("e", "e"))
    h_on_e = _coords_or_fail(H, hb.tdot(b, ([1], [0])), "H o E inside H", ("h", "e"))
    dpart_h = _coords_or_fail(H, cd.partial.transpose((1, 0)), "dR inside H", ("r",))
    fh = cd.module_action.tdot(hb, ([2], [1])).transpose((0, 2, 1))
    hmod = _coords_or_fail(H, fh, "H is an R-submodule", ("r", "h"))
    comp = [list(c) for c in complement] if complement is not None else _default_complement(H)
    _check_complement(H, comp)
    xs = Subspace.span(comp, n)
    if comp:
        cz = ZT.from_exact(comp)
        fx = cd.module_action.tdot(cz, ([2], [1])).transpose((0, 2, 1)).to_fractions()
        for s in range(fx.shape[0]):
            for a in range(fx.shape[1]):
                if not xs.contains_vector(list(fx[s, a])):
                    rep = ValidationReport("context")
                    rep.fail("complement R-stable", ("r", s, "x", a))
                    raise ValidationError(rep)
    scal = ScalarLayer(cd.r.dim_r, cd.r.mult, cd.r.unit, cd.module_action, hd.r_action,
                       cd.pairing, cd.partial, dpart_h, hmod, generators)
    return HContext(name, "cd", n, H, hd.dim_v, comp, b, hd.nabla, pair_h, hb, h_on_e,
                    scalar=scal, labels=cd.basis_labels, source=(cd, hd))
