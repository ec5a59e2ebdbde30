import itertools
from fractions import Fraction

import pytest
from conftest import crossed

from hstandard.cdalgebra import (
    CDHData,
    CourantDorfmanAlgebra,
    anchor,
    as_context,
    validate_cd,
    validate_h_ideal_cd,
    validate_h_rep_cd,
)
from hstandard.exactla import Subspace
from hstandard.fixtures import sl2
from hstandard.report import ValidationError
from hstandard.ztensor import ZT


def unit(n, i):
    return [int(j == i) for j in range(n)]


def h_span(cp, i):
    """R (x) span{e_i} inside the crossed product."""
    n = cp.cd.dim_e
    return Subspace.span([unit(n, cp.e_index(mu, i)) for mu in range(cp.n_monos)], n)


def test_lie_embedding_is_valid():
    cd = CourantDorfmanAlgebra.from_lie(sl2().bracket)
    assert validate_cd(cd).ok
    assert validate_h_ideal_cd(cd, Subspace.zero(3)).ok


@pytest.mark.parametrize("name", ["nilpotent2", "omni1", "omni2", "heisenberg"])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_crossed_products_are_valid(name, n):
    cp = crossed(name, n)
    guarded = cp.guarded_report()
    assert guarded.ok
    assert validate_cd(cp.cd).ok
    assert validate_h_ideal_cd(cp.cd, cp.hdata.h).ok
    assert validate_h_rep_cd(cp.cd, cp.hdata).ok


def test_perturbed_bracket_fails_axiom_3():
    cd = crossed("nilpotent2", 2).cd
    b = cd.bracket.to_fractions()
    b[0, 0, 1] += 1
    bad = CourantDorfmanAlgebra(cd.r, cd.dim_e, cd.module_action, cd.pairing, cd.partial, b.tolist())
    rep = validate_cd(bad)
    ax3 = rep.check("axiom 3")
    assert not ax3.passed and ax3.witness == (0, 0)


def test_anchor_examples():
    cp = crossed("omni1", 2)
    cd, R = cp.cd, cp.r
    one = [1] + [0] * (R.dim - 1)
    for i in range(cd.dim_e):
        assert not any(anchor(cd, unit(cd.dim_e, i), one))
    # rho(1 (x) A) is the degree operator on z^k
    a = unit(cd.dim_e, cp.e_index(0, 0))
    for mu in range(R.dim):
        assert anchor(cd, a, unit(R.dim, mu)) == [Fraction(R.degree(mu) * int(t == mu)) for t in range(R.dim)]
    for h in cp.hdata.h.basis:
        for f in range(R.dim):
            assert not any(anchor(cd, list(h), unit(R.dim, f)))


@pytest.mark.parametrize("name", ["nilpotent2", "omni1", "heisenberg"])
def test_anchor_is_a_derivation(name):
    cd = crossed(name, 2).cd
    m = cd.r.mult.to_fractions()
    r = cd.r.dim_r
    for i, a, b in itertools.product(range(cd.dim_e), range(r), range(r)):
        e = unit(cd.dim_e, i)
        lhs = anchor(cd, e, list(m[a, b]))
        ra, rb = anchor(cd, e, unit(r, a)), anchor(cd, e, unit(r, b))
        rhs = [sum(rb[s] * m[a, s, t] + ra[s] * m[s, b, t] for s in range(r)) for t in range(r)]
        assert lhs == rhs


def test_pairing_derivative_is_symmetric_bracket():
    for name in ("nilpotent2", "omni1", "omni2", "heisenberg"):
        cd = crossed(name, 2).cd
        sym = cd.bracket + cd.bracket.transpose((1, 0, 2))
        assert (sym - cd.pairing.tdot(cd.partial, ([2], [1]))).is_zero()


def test_h_ideal_examples():
    cp = crossed("nilpotent2", 2)
    assert validate_h_ideal_cd(cp.cd, h_span(cp, 1)).ok
    rep = validate_h_ideal_cd(cp.cd, h_span(cp, 0))
    assert not rep.check("isotropic").passed
    assert rep.check("isotropic").witness is not None
    # Z is nonzero, so even at N = 0 the ideal must contain it
    low = crossed("nilpotent2", 0)
    assert not validate_h_ideal_cd(low.cd, Subspace.zero(2)).check("contains dR").passed
    assert validate_h_ideal_cd(low.cd, h_span(low, 1)).ok


def test_rep_on_r_via_anchor():
    cp = crossed("omni1", 2)
    cd = cp.cd
    r, n = cd.r.dim_r, cd.dim_e
    mult = cd.r.mult.to_fractions()
    ract = [[[mult[s, a, b] for a in range(r)] for b in range(r)] for s in range(r)]
    nab = [[[anchor(cd, unit(n, i), unit(r, a))[b] for a in range(r)] for b in range(r)] for i in range(n)]
    hd = CDHData(cp.hdata.h, r, ract, nab)
    assert validate_h_rep_cd(cd, hd).ok


def test_rep_fails_when_h_acts():
    cp = crossed("omni1", 1)
    nab = cp.hdata.nabla.to_fractions()
    h0 = next(i for i, x in enumerate(cp.hdata.h.basis[0]) if x)
    nab[h0, 0, 0] += 1
    hd = CDHData(cp.hdata.h, cp.hdata.dim_v, cp.hdata.r_action, nab.tolist())
    rep = validate_h_rep_cd(cp.cd, hd)
    assert not rep.check("H-trivial").passed
    assert rep.check("H-trivial").witness == (0,)


def test_as_context():
    cp = crossed("nilpotent2", 2)
    ctx = as_context((cp.cd, cp.hdata))
    assert ctx.dim == 6 and ctx.kind == "cd"
    with pytest.raises(TypeError):
        as_context((1, 2))


def test_complement_must_be_r_stable():
    cp = crossed("nilpotent2", 1)
    n = cp.cd.dim_e
    # z (1 (x) e1 + 1 (x) e2) = z (x) e1 + z (x) e2 leaves the span
    bad = [[1, 1, 0, 0], unit(n, cp.e_index(1, 0))]
    with pytest.raises(ValidationError):
        as_context((cp.cd, cp.hdata), complement=bad)


def test_shapes_are_checked():
    r = crossed("nilpotent2", 0).cd.r
    with pytest.raises(ValueError):
        CourantDorfmanAlgebra(r, 3, ZT.zeros((2, 3, 3)), ZT.zeros((3, 3, 2)), ZT.zeros((3, 2)), ZT.zeros((2, 2, 2)))
