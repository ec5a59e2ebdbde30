"""Command-line frontend.

Exit codes: 0 success, 1 mathematical validation failure, 2 I/O or parse failure.
Reports go to standard output, one fact per line, with no timings, so identical
inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path

from .cdalgebra import (
    quotient_lie_rinehart,
    validate_cd,
    validate_h_ideal_cd,
    validate_h_rep_cd,
)
from .context import cd_context, leibniz_context
from .io import (
    AlgebraFile,
    ParseError,
    algebra_to_json,
    dumps,
    load_algebra,
    load_cochain,
    save_cochain,
)
from .leibniz import (
    LeftRepresentation,
    LeibnizAlgebra,
    ce_dims,
    quotient_lie,
    validate_h_ideal,
    validate_h_representation,
    validate_leibniz,
)
from .report import ValidationError, ValidationReport

EXIT_OK, EXIT_INVALID, EXIT_PARSE = 0, 1, 2


class Invalid(Exception):
    """A mathematical failure with the lines to print."""

    def __init__(self, lines):
        self.lines = list(lines)
        super().__init__("\n".join(self.lines))


def _require(rep: ValidationReport) -> None:
    if not rep.ok:
        raise Invalid(rep.lines())


CENTER = "contains left center"


def _validated(path, need_center: bool = True) -> AlgebraFile:
    """Load a file and run every validator its blocks call for.

    Containment of the left center in H is needed by the complex but not by
    the algebra file itself, so ``need_center=False`` leaves it to the caller.
    """
    af = load_algebra(path)
    if af.kind == "leibniz":
        _require(validate_leibniz(af.algebra))
        if af.h is not None:
            rep = validate_h_ideal(af.algebra, af.h)
            if not need_center:
                rep = ValidationReport(rep.subject, [c for c in rep.checks if c.name != CENTER])
            _require(rep)
            if af.rep is None:
                af.rep = LeftRepresentation.trivial(af.dim)
            _require(validate_h_representation(af.algebra, af.h, af.rep))
    else:
        _require(validate_cd(af.algebra))
        if af.h is not None:
            _require(validate_h_ideal_cd(af.algebra, af.h))
        if af.rep is not None:
            _require(validate_h_rep_cd(af.algebra, af.rep))
    return af


def _context(af: AlgebraFile, name: str):
    if af.h is None:
        raise ParseError("H", "missing H block")
    try:
        if af.kind == "leibniz":
            return leibniz_context(af.algebra, af.h, af.rep, name=name, complement=af.complement, validate=False)
        if af.rep is None:
            raise ParseError("representation", "missing representation block")
        return cd_context(af.algebra, af.rep, name=name, complement=af.complement, validate=False)
    except ValidationError as exc:
        raise Invalid(exc.report.lines()) from None


def _dims(ds) -> str:
    return " ".join(str(d) for d in ds)


# -- commands ----------------------------------------------------------------------------


def cmd_validate(args) -> list[str]:
    af = _validated(args.file, need_center=False)
    out = [f"kind: {af.kind}", f"dim: {af.dim}"]
    if af.h is not None:
        out.append(f"H: dim {af.h.dim}")
        if af.kind == "leibniz":
            inside = validate_h_ideal(af.algebra, af.h).check(CENTER).passed
            out.append(f"H contains left center: {'yes' if inside else 'no'}")
    out.append("valid")
    return out


def cmd_cohomology(args) -> list[str]:
    from .hcomplex import cohomology_dims

    af = _validated(args.file)
    ctx = _context(af, Path(args.file).stem)
    h = cohomology_dims(ctx, args.max_degree)
    out = [f"H: {_dims(h)}"]
    if args.nv:
        out.append(f"NV: {_dims(cohomology_dims(ctx, args.max_degree, extra='nv'))}")
    if args.ce:
        if af.kind == "leibniz":
            g = quotient_lie(af.algebra, af.h, af.rep)
        else:
            g = quotient_lie_rinehart(af.algebra, af.rep, af.complement)
        ce = ce_dims(g, args.max_degree)
        out.append(f"CE: {_dims(ce)}")
        out.append("AGREE" if ce == h else "DISAGREE")
        if ce != h:
            raise Invalid(out)
    return out


def _out_paths(args):
    base = Path(args.cocycle)
    prefix = Path(args.out) if args.out else base.with_suffix("")
    return Path(f"{prefix}.eta.json"), Path(f"{prefix}.lambda.json")


def cmd_decompose(args) -> list[str]:
    from .decompose import (
        PreconditionError,
        SplitBasis,
        decompose_cocycle,
        verify_decomposition,
    )
    from .hcomplex import check_conditions

    af = _validated(args.file)
    ctx = _context(af, Path(args.file).stem)
    w = load_cochain(args.cocycle, ctx)
    _require(check_conditions(ctx, w))
    try:
        dec = decompose_cocycle(ctx, w, SplitBasis.from_context(ctx))
    except PreconditionError as exc:
        raise Invalid([f"precondition failed: {exc}"]) from None
    rep = verify_decomposition(ctx, w, dec.eta, dec.lam)
    rep.merge(check_conditions(ctx, dec.eta, extra="nv"), prefix="eta in nv subcomplex: ")
    eta_path, lam_path = _out_paths(args)
    save_cochain(dec.eta, eta_path)
    lam = dec.lam.cochain if dec.lam.cochain is not None else None
    out = [f"degree: {w.degree}", f"eta: {eta_path}"]
    if lam is not None:
        save_cochain(lam, lam_path)
        out.append(f"lambda: {lam_path}")
        out.append(f"lambda zero: {'yes' if lam.is_zero() else 'no'}")
    else:
        out.append("lambda: none in degree 0")
    out += rep.lines()
    if not rep.ok:
        raise Invalid(out)
    return out


def cmd_extend(args) -> list[str]:
    from .hcomplex import (
        check_conditions,
        extension_contains_center,
        extension_from_2cocycle,
        raw_coboundary,
        validate_extension,
    )

    af = _validated(args.file)
    ctx = _context(af, Path(args.file).stem)
    w = load_cochain(args.cocycle, ctx)
    if w.degree != 2:
        raise Invalid([f"expected a degree-2 cochain, got degree {w.degree}"])
    _require(check_conditions(ctx, w))
    dw = raw_coboundary(ctx, w)
    for k, c in enumerate(dw.comps):
        if not c.is_zero():
            raise Invalid([f"not closed: component {k} of the coboundary is nonzero"])
    ext = extension_from_2cocycle(ctx, w)
    rep = validate_extension(ext)
    out = rep.lines()
    out.append(f"left center inside H-bar: {'yes' if extension_contains_center(ext) else 'no'}")
    if not rep.ok:
        raise Invalid(out)
    labels = list(ctx.labels or [f"e{i}" for i in range(ctx.dim)]) + [f"v{r}" for r in range(ctx.dim_v)]
    a = ext.algebra
    if isinstance(a, LeibnizAlgebra):
        a = LeibnizAlgebra(a.dim, a.bracket, tuple(labels))
        res = AlgebraFile("leibniz", a, ext.h)
    else:
        from .cdalgebra import CourantDorfmanAlgebra

        a = CourantDorfmanAlgebra(a.r, a.dim_e, a.module_action, a.pairing, a.partial, a.bracket, tuple(labels))
        res = AlgebraFile("courant_dorfman", a, ext.h)
    Path(args.out).write_text(dumps(algebra_to_json(res)), encoding="utf-8")
    out.insert(0, f"dim: {len(labels)}")
    out.append(f"written: {args.out}")
    return out


def cmd_crossed(args) -> list[str]:
    from .crossed import crossed_product

    af = _validated(args.file)
    if af.kind != "leibniz":
        raise ParseError("kind", "the crossed product needs a leibniz file")
    if af.h is None:
        raise ParseError("H", "missing H block")
    if args.truncate < 0:
        raise ParseError("--truncate", "must be non-negative")
    try:
        cp = crossed_product(af.algebra, af.h, af.rep, args.truncate)
    except ValidationError as exc:
        raise Invalid(exc.report.lines()) from None
    rep = cp.guarded_report()
    out = [f"truncation: {args.truncate}", f"dim R: {cp.r.dim}", f"dim E: {cp.cd.dim_e}"]
    out += rep.lines()
    if not rep.ok:
        raise Invalid(out)
    labels = tuple(f"{cp.r.label(mu)}*{(af.algebra.basis_labels or [f'e{i}' for i in range(af.dim)])[i]}"
                   for mu in range(cp.n_monos) for i in range(af.dim))
    from .cdalgebra import CourantDorfmanAlgebra

    cd = cp.cd
    cd = CourantDorfmanAlgebra(cd.r, cd.dim_e, cd.module_action, cd.pairing, cd.partial, cd.bracket, labels)
    res = AlgebraFile("courant_dorfman", cd, cp.hdata.h, cp.hdata)
    Path(args.out).write_text(dumps(algebra_to_json(res)), encoding="utf-8")
    out.append(f"written: {args.out}")
    return out


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-5, 5), rng.randint(1, 4))


def cmd_check(args) -> list[str]:
    """d o d = 0 and closure on a basis of each C^n and on random combinations."""
    from .hcomplex import check_conditions, cochain_space, raw_coboundary

    af = _validated(args.file)
    ctx = _context(af, Path(args.file).stem)
    rng = random.Random(args.seed)
    out = [f"seed: {args.seed}"]
    failed = False
    for n in range(args.max_degree + 1):
        cb = cochain_space(ctx, n)
        if cb.dim == 0:
            out.append(f"C^{n}: dim 0")
            continue
        basis = cb.cochains()
        coeffs = [[_random_rational(rng) for _ in range(cb.dim)] for _ in range(args.samples)]
        for label, w in (("basis", basis), ("random", basis.combine(coeffs) if coeffs else None)):
            if w is None:
                continue
            dw = raw_coboundary(ctx, w)
            flat = raw_coboundary(ctx, dw).is_zero()
            closed = check_conditions(ctx, dw).ok
            failed |= not (flat and closed)
            out.append(f"C^{n} {label} x{w.batch}: dd=0 {'pass' if flat else 'FAIL'}, "
                       f"closure {'pass' if closed else 'FAIL'}")
    if failed:
        raise Invalid(out)
    return out


# -- entry point -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hstandard", description="H-standard complex computations")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="parse and validate an algebra file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("cohomology", help="dimensions of the cohomology groups")
    s.add_argument("file")
    s.add_argument("--max-degree", type=int, default=4)
    s.add_argument("--nv", action="store_true", help="also the subcomplex vanishing on H")
    s.add_argument("--ce", action="store_true", help="compare with Chevalley-Eilenberg of the quotient")
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("decompose", help="split a closed cochain as eta + d lambda")
    s.add_argument("file")
    s.add_argument("cocycle")
    s.add_argument("--out", help="output prefix for the eta and lambda files")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("extend", help="extension defined by a 2-cocycle")
    s.add_argument("file")
    s.add_argument("cocycle")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("crossed", help="truncated crossed product")
    s.add_argument("file")
    s.add_argument("--truncate", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_crossed)

    s = sub.add_parser("check", help="d o d = 0 and closure on bases and random combinations")
    s.add_argument("file")
    s.add_argument("--max-degree", type=int, default=4)
    s.add_argument("--samples", type=int, default=200)
    s.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if getattr(args, "max_degree", 0) < 0:
        print("error: --max-degree must be non-negative", file=sys.stderr)
        return EXIT_PARSE
    try:
        lines = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Invalid as exc:
        for line in exc.lines:
            print(line)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    for line in lines:
        print(line)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
