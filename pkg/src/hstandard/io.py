"""JSON algebra and cochain files.

Algebra file::

    {"kind": "leibniz" | "courant_dorfman", "dim": n,
     "labels": [...],                                   optional
     "bracket": [{"i": i, "j": j, "coeffs": {"k": "p/q"}}, ...],
     "scalars": {"dim_r", "mult" (sparse), "unit", "module_action" (sparse),
                 "pairing" (sparse), "partial"},        courant_dorfman only
     "H": {"basis": [[...], ...]},
     "representation": {"dim", "action": [matrix, ...], "r_action": [matrix, ...]},
     "complement": {"basis": [[...], ...]}}

Sparse entries {"i": a, "j": b, "coeffs": {"c": x}} mean x * e_c is the c-part
of a * b.  For ``module_action`` this reads f_a . e_b, for ``pairing`` the
f_c-part of <e_a, e_b>.  ``partial[a]`` is d f_a in E coordinates.

Cochain file::

    {"degree": n, "components": [{"k": k, "entries":
        [{"es": [i, ...], "hs": [j, ...], "value": [...]}, ...]}, ...]}

``hs`` indexes the reduced echelon basis of H, so the same cochain file is
valid whichever spanning set the algebra file lists for H.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .cdalgebra import CDHData, CommutativeAlgebra, CourantDorfmanAlgebra
from .exactla import Subspace, fmt_q, parse_q
from .leibniz import LeftRepresentation, LeibnizAlgebra
from .ztensor import ZT


class ParseError(ValueError):
    """Malformed input; ``path`` locates the offending field."""

    def __init__(self, path: str, msg: str):
        self.path = path
        super().__init__(f"{path}: {msg}")


@dataclass(eq=False)
class AlgebraFile:
    kind: str
    algebra: object  # LeibnizAlgebra or CourantDorfmanAlgebra
    h: Subspace | None = None
    rep: object | None = None  # LeftRepresentation or CDHData
    complement: list | None = None

    @property
    def dim(self) -> int:
        a = self.algebra
        return a.dim if isinstance(a, LeibnizAlgebra) else a.dim_e

    def source(self):
        if self.kind == "leibniz":
            return (self.algebra, self.h, self.rep)
        return (self.algebra, self.rep)


# -- parsing helpers -------------------------------------------------------------------


def _get(d, key, path, kind=None, required=True):
    if not isinstance(d, dict):
        raise ParseError(path, "expected an object")
    if key not in d:
        if required:
            raise ParseError(f"{path}.{key}" if path else key, "missing field")
        return None
    v = d[key]
    if kind is not None and not (isinstance(v, kind) and not (kind is int and isinstance(v, bool))):
        raise ParseError(f"{path}.{key}" if path else key, f"expected {kind.__name__}")
    return v


def _rat(x, path) -> Fraction:
    if isinstance(x, bool):
        raise ParseError(path, "expected a rational")
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, str):
        raise ParseError(path, f"expected a rational string, got {x!r}")
    try:
        return parse_q(x)
    except (ValueError, ZeroDivisionError):
        raise ParseError(path, f"not a rational: {x!r}") from None


def _index(x, n, path) -> int:
    if isinstance(x, str) and x.lstrip("-").isdigit():
        x = int(x)
    if not isinstance(x, int) or isinstance(x, bool):
        raise ParseError(path, f"expected an index, got {x!r}")
    if not 0 <= x < n:
        raise ParseError(path, f"index {x} out of range 0..{n - 1}")
    return x


def _dim(x, path) -> int:
    if not isinstance(x, int) or isinstance(x, bool) or x < 0:
        raise ParseError(path, "expected a non-negative integer")
    return x


def _vector(v, n, path) -> list[Fraction]:
    if not isinstance(v, list) or len(v) != n:
        raise ParseError(path, f"expected a list of {n} rationals")
    return [_rat(x, f"{path}[{i}]") for i, x in enumerate(v)]


def _matrix(m, rows, cols, path) -> list[list[Fraction]]:
    if not isinstance(m, list) or len(m) != rows:
        raise ParseError(path, f"expected {rows} rows")
    return [_vector(r, cols, f"{path}[{i}]") for i, r in enumerate(m)]


def _sparse3(entries, na, nb, nc, path) -> np.ndarray:
    out = np.zeros((na, nb, nc), dtype=object)
    out[...] = Fraction(0)
    if not isinstance(entries, list):
        raise ParseError(path, "expected a list")
    for t, e in enumerate(entries):
        p = f"{path}[{t}]"
        i = _index(_get(e, "i", p), na, f"{p}.i")
        j = _index(_get(e, "j", p), nb, f"{p}.j")
        coeffs = _get(e, "coeffs", p, dict)
        for key, val in coeffs.items():
            k = _index(key, nc, f"{p}.coeffs.{key}")
            out[i, j, k] += _rat(val, f"{p}.coeffs.{key}")
    return out


def _basis(block, n, path) -> list[list[Fraction]]:
    b = _get(block, "basis", path, list)
    return [_vector(v, n, f"{path}.basis[{i}]") for i, v in enumerate(b)]


# -- algebra files ----------------------------------------------------------------------


def parse_algebra(doc) -> AlgebraFile:
    """Structured data to algebra objects; no mathematical validation."""
    kind = _get(doc, "kind", "", str)
    if kind not in ("leibniz", "courant_dorfman"):
        raise ParseError("kind", f"unknown kind {kind!r}")
    n = _dim(_get(doc, "dim", ""), "dim")
    labels = _get(doc, "labels", "", list, required=False)
    if labels is not None:
        if len(labels) != n or not all(isinstance(x, str) for x in labels):
            raise ParseError("labels", f"expected {n} strings")
        labels = tuple(labels)
    br = _sparse3(_get(doc, "bracket", "", list), n, n, n, "bracket")

    h = None
    if "H" in doc:
        h = Subspace.span(_basis(doc["H"], n, "H"), n)
    comp = None
    if "complement" in doc:
        comp = _basis(doc["complement"], n, "complement")

    if kind == "leibniz":
        if "scalars" in doc:
            raise ParseError("scalars", "only courant_dorfman files carry scalars")
        alg = LeibnizAlgebra(n, br.tolist(), labels)
        rep = None
        if "representation" in doc:
            rb = doc["representation"]
            dv = _dim(_get(rb, "dim", "representation"), "representation.dim")
            act = _get(rb, "action", "representation", list)
            if len(act) != n:
                raise ParseError("representation.action", f"expected {n} matrices")
            rep = LeftRepresentation(dv, [_matrix(m, dv, dv, f"representation.action[{i}]")
                                          for i, m in enumerate(act)])
        return AlgebraFile(kind, alg, h, rep, comp)

    sc = _get(doc, "scalars", "", dict)
    r = _dim(_get(sc, "dim_r", "scalars"), "scalars.dim_r")
    mult = _sparse3(_get(sc, "mult", "scalars", list), r, r, r, "scalars.mult")
    unit = _vector(_get(sc, "unit", "scalars"), r, "scalars.unit")
    mod = _sparse3(_get(sc, "module_action", "scalars", list), r, n, n, "scalars.module_action")
    pair = _sparse3(_get(sc, "pairing", "scalars", list), n, n, r, "scalars.pairing")
    part = _matrix(_get(sc, "partial", "scalars"), r, n, "scalars.partial")
    R = CommutativeAlgebra(r, mult.tolist(), unit)
    modact = np.moveaxis(mod, 2, 1)  # stored (f, e_in, e_out); the algebra wants (f, out, in)
    alg = CourantDorfmanAlgebra(R, n, modact.tolist(), pair.tolist(),
                                [[part[a][i] for a in range(r)] for i in range(n)], br.tolist(), labels)
    rep = None
    if "representation" in doc:
        rb = doc["representation"]
        if h is None:
            raise ParseError("H", "a representation needs an H block")
        dv = _dim(_get(rb, "dim", "representation"), "representation.dim")
        act = _get(rb, "action", "representation", list)
        if len(act) != n:
            raise ParseError("representation.action", f"expected {n} matrices")
        ract = _get(rb, "r_action", "representation", list)
        if len(ract) != r:
            raise ParseError("representation.r_action", f"expected {r} matrices")
        rep = CDHData(h, dv,
                      [_matrix(m, dv, dv, f"representation.r_action[{i}]") for i, m in enumerate(ract)],
                      [_matrix(m, dv, dv, f"representation.action[{i}]") for i, m in enumerate(act)])
    return AlgebraFile(kind, alg, h, rep, comp)


def _q(x) -> str:
    return fmt_q(x)


def _sparse3_out(arr: np.ndarray) -> list:
    out = []
    na, nb, nc = arr.shape
    for i in range(na):
        for j in range(nb):
            coeffs = {str(k): _q(arr[i, j, k]) for k in range(nc) if arr[i, j, k] != 0}
            if coeffs:
                out.append({"i": i, "j": j, "coeffs": coeffs})
    return out


def _fr(x) -> np.ndarray:
    if isinstance(x, ZT):
        return x.to_fractions()
    arr = np.empty(np.shape(np.array(x, dtype=object)), dtype=object)
    arr[...] = np.array(x, dtype=object)
    return arr


def _rows_out(rows) -> list:
    return [[_q(x) for x in r] for r in rows]


def algebra_to_json(af: AlgebraFile) -> dict:
    a = af.algebra
    doc: dict = {"kind": af.kind}
    if af.kind == "leibniz":
        doc["dim"] = a.dim
        if a.basis_labels:
            doc["labels"] = list(a.basis_labels)
        doc["bracket"] = _sparse3_out(_fr(a.bracket))
    else:
        n, r = a.dim_e, a.r.dim_r
        doc["dim"] = n
        if a.basis_labels:
            doc["labels"] = list(a.basis_labels)
        doc["bracket"] = _sparse3_out(a.bracket.to_fractions())
        part = a.partial.to_fractions()
        doc["scalars"] = {
            "dim_r": r,
            "mult": _sparse3_out(a.r.mult.to_fractions()),
            "unit": [_q(x) for x in a.r.unit.to_fractions()],
            "module_action": _sparse3_out(np.moveaxis(a.module_action.to_fractions(), 1, 2)),
            "pairing": _sparse3_out(a.pairing.to_fractions()),
            "partial": [[_q(part[i, s]) for i in range(n)] for s in range(r)],
        }
    if af.h is not None:
        doc["H"] = {"basis": _rows_out(af.h.basis)}
    if af.rep is not None:
        if isinstance(af.rep, LeftRepresentation):
            doc["representation"] = {"dim": af.rep.dim_v, "action": [_rows_out(m) for m in af.rep.action]}
        else:
            doc["representation"] = {"dim": af.rep.dim_v,
                                     "action": [_rows_out(m) for m in af.rep.nabla.to_fractions()],
                                     "r_action": [_rows_out(m) for m in af.rep.r_action.to_fractions()]}
    if af.complement is not None:
        doc["complement"] = {"basis": _rows_out(af.complement)}
    return doc


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True, ensure_ascii=False) + "\n"


def _load(path) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(path), f"cannot read file ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(path), f"invalid JSON at line {exc.lineno} column {exc.colno}") from None


def load_algebra(path) -> AlgebraFile:
    return parse_algebra(_load(path))


def save_algebra(af: AlgebraFile, path) -> None:
    Path(path).write_text(dumps(algebra_to_json(af)), encoding="utf-8")


# -- cochain files -----------------------------------------------------------------------


def parse_cochain(doc, ctx):
    from .hcomplex import Cochain, layout

    n = _dim(_get(doc, "degree", ""), "degree")
    lay = layout(ctx, n)
    raw = [Fraction(0)] * lay.raw_dim
    seen: dict = {}
    comps = _get(doc, "components", "", list)
    for c, comp in enumerate(comps):
        p = f"components[{c}]"
        k = _get(comp, "k", p)
        if not isinstance(k, int) or isinstance(k, bool) or not 0 <= k <= n // 2:
            raise ParseError(f"{p}.k", f"expected 0 <= k <= {n // 2}")
        m = n - 2 * k
        for t, e in enumerate(_get(comp, "entries", p, list)):
            pe = f"{p}.entries[{t}]"
            es = _get(e, "es", pe, list)
            hs = _get(e, "hs", pe, list)
            if len(es) != m:
                raise ParseError(f"{pe}.es", f"expected {m} indices")
            if len(hs) != k:
                raise ParseError(f"{pe}.hs", f"expected {k} indices")
            es = tuple(_index(x, ctx.dim, f"{pe}.es[{i}]") for i, x in enumerate(es))
            hs = tuple(_index(x, ctx.p, f"{pe}.hs[{i}]") for i, x in enumerate(hs))
            val = _vector(_get(e, "value", pe), ctx.dim_v, f"{pe}.value")
            key = (k, es, tuple(sorted(hs)))
            if key in seen and seen[key] != val:
                raise ParseError(pe, "conflicts with an earlier entry for the same slots")
            seen[key] = val
            for v, x in enumerate(val):
                raw[lay.index(k, es, hs, v)] = x
    return Cochain.from_raw(ctx, n, raw)


def cochain_to_json(w) -> dict:
    """Nonzero entries only; H slots written once as sorted multisets."""
    from .hcomplex import layout

    lay = layout(w.ctx, w.degree)
    raw = w.raw_vector(0)
    dv = w.ctx.dim_v
    comps = []
    for blk in lay.blocks:
        entries = []
        off = blk["offset"]
        for start in range(off, off + blk["size"], dv):
            val = raw[start:start + dv]
            if any(val):
                k, es, hs, _ = lay.decode(start)
                entries.append({"es": list(es), "hs": list(hs), "value": [_q(x) for x in val]})
        comps.append({"k": blk["k"], "entries": entries})
    return {"degree": w.degree, "components": comps}


def load_cochain(path, ctx):
    return parse_cochain(_load(path), ctx)


def save_cochain(w, path) -> None:
    Path(path).write_text(dumps(cochain_to_json(w)), encoding="utf-8")
