import itertools
from fractions import Fraction

import pytest
from conftest import FIXTURES, crossed

from hstandard.cdalgebra import validate_cd
from hstandard.crossed import (
    TruncatedSymmetricAlgebra,
    c0_subcomplex,
    crossed_product,
    extend_phi,
    induced_structures,
    restrict_psi,
)
from hstandard.hcomplex import (
    Cochain,
    check_conditions,
    cochain_space,
    cohomology_dims,
    raw_coboundary,
)
from hstandard.leibniz import LeftRepresentation, ce_dims, quotient_lie


def test_truncated_symmetric_algebra():
    R = TruncatedSymmetricAlgebra(2, 2)
    assert R.dim == 6
    assert [R.label(i) for i in range(R.dim)] == ["1", "z1", "z2", "z1^2", "z1*z2", "z2^2"]
    z1, z2 = R.generator(0), R.generator(1)
    assert R.label(R.times(z1, z2)) == "z1*z2"
    assert R.times(R.times(z1, z2), z1) is None
    assert R.lower(R.times(z1, z1), 0) == z1
    assert R.count_upto(1) == 3


def test_n0_embeds_l():
    t = FIXTURES["nilpotent2"]
    cp = crossed("nilpotent2", 0)
    assert cp.n_monos == 1 and cp.cd.dim_e == t.algebra.dim
    b = cp.cd.bracket.to_fractions()
    for i, j, k in itertools.product(range(2), repeat=3):
        assert b[i, j, k] == t.algebra.bracket[i][j][k]
    # <e1, e1> = (e1, e1) = 2 e2 = 2 z
    g = cp.cd.pairing.to_fractions()
    assert list(g[0, 0]) == [0, 2] and not any(g[1, 1])


def test_nilpotent_n2():
    cp = crossed("nilpotent2", 2)
    assert cp.n_monos == 3 and cp.cd.dim_e == 6
    assert [cp.r.label(i) for i in range(cp.n_monos)] == ["1", "z1", "z1^2"]
    d = cp.cd.partial.to_fractions()
    z2 = cp.r.index[(2,)]
    expect = [Fraction(0)] * 6
    expect[cp.e_index(1, 1)] = Fraction(2)
    assert list(d[:, z2]) == expect
    assert cp.guarded_report().ok
    assert validate_cd(cp.cd).ok


@pytest.mark.parametrize("name", list(FIXTURES))
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_guarded_checks_pass(name, n):
    rep = crossed(name, n).guarded_report()
    assert rep.ok
    if n >= 2:
        assert sum(c.checked for c in rep.checks) > 0


def test_omni_degree_operator():
    cp = crossed("omni1", 2)
    rho = cp.cd.anchor_tensor().to_fractions()  # (e, r, r): rho(e_i) f_a
    a = cp.e_index(0, 0)
    for mu in range(cp.r.dim):
        assert list(rho[a, mu]) == [Fraction(cp.r.degree(mu) * int(t == mu)) for t in range(cp.r.dim)]


def test_induced_representation_examples():
    hd = induced_structures(crossed("nilpotent2", 2))
    nab = hd.nabla.to_fractions()
    for h in hd.h.basis:
        act = sum((x * nab[i] for i, x in enumerate(h) if x), nab[0] * 0)
        assert not any(act.flat)
    # grade-one vector z v is killed by 1 (x) e1
    assert not any(nab[0][:, 1])
    cp = crossed("omni1", 2)
    nab = induced_structures(cp).nabla.to_fractions()
    zv = [Fraction(0)] * cp.hdata.dim_v
    zv[1] = Fraction(2)
    assert list(nab[cp.e_index(0, 0)][:, 1]) == zv


def test_psi_examples():
    cp = crossed("omni1", 2)
    ctx = cp.context()
    assert restrict_psi(cp, Cochain.zero(ctx, 2)).is_zero()
    c1 = cochain_space(ctx, 1).cochains()
    out = restrict_psi(cp, c1)
    for i in range(cp.dim_l):
        for b in range(c1.batch):
            assert out.value(0, (i,), (), b) == c1.value(0, (cp.e_index(0, i),), (), b)


def test_phi_examples():
    cp = crossed("nilpotent2", 2)
    base = cp.base_context()
    assert extend_phi(cp, Cochain.zero(base, 2)).is_zero()
    c1 = cochain_space(base, 1).cochains()
    big = extend_phi(cp, c1)
    ract = cp.hdata.r_action.to_fractions()
    for b, mu, i in itertools.product(range(c1.batch), range(cp.n_monos), range(cp.dim_l)):
        want = [sum(ract[mu, r, s] * c1.value(0, (i,), (), b)[s] for s in range(len(ract[mu]))) for r in range(len(ract[mu]))]
        assert big.value(0, (cp.e_index(mu, i),), (), b) == want
    c2 = cochain_space(base, 2).cochains()
    big = extend_phi(cp, c2)
    z = 1  # monomial index of z
    for b in range(c2.batch):
        w00 = c2.value(0, (0, 0), (), b)
        w1 = c2.value(1, (), (0,), b)
        got = big.value(0, (cp.e_index(z, 0), cp.e_index(0, 0)), (), b)
        inner = [x - 2 * y for x, y in zip(w00, w1)]
        want = [sum(ract[z, r, s] * inner[s] for s in range(len(inner))) for r in range(len(inner))]
        assert got == want


@pytest.mark.parametrize("name", ["nilpotent2", "omni1", "heisenberg"])
def test_psi_phi_identity_and_chain_map(name):
    cp = crossed(name, 2)
    base = cp.base_context()
    for n in range(4):
        cb = cochain_space(base, n)
        if not cb.dim:
            continue
        w = cb.cochains()
        big = extend_phi(cp, w)
        assert restrict_psi(cp, big) == w
        assert check_conditions(cp.context(), big).ok
        if n <= 2:
            assert raw_coboundary(cp.context(), big) == extend_phi(cp, raw_coboundary(base, w))
            assert extend_phi(cp, restrict_psi(cp, big)) == big


@pytest.mark.parametrize("name", ["nilpotent2", "omni1"])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_crossed_cochain_dims_match_base(name, n):
    cp = crossed(name, n)
    for deg in range(3):
        assert cochain_space(cp.context(), deg).dim == cochain_space(cp.base_context(), deg).dim


@pytest.mark.parametrize("name", ["nilpotent2", "omni1", "heisenberg"])
def test_truncated_module_matches_ce(name):
    cp = crossed(name, 1)
    base = cp.base_context()
    L, H, _ = cp.base
    g = quotient_lie(L, H, LeftRepresentation(base.dim_v, base.nabla.to_fractions().tolist()))
    assert cohomology_dims(base, 3) == ce_dims(g, 3)
    assert cohomology_dims(cp.context(), 2) == ce_dims(g, 2)


@pytest.mark.parametrize("name", ["nilpotent2", "omni1", "heisenberg"])
def test_degree_zero_layer_matches_plain_coefficients(name):
    cp = crossed(name, 1)
    L, H, V = cp.base
    assert c0_subcomplex(cp, 0).dim == V.dim_v
    assert cohomology_dims(cp.context(), 2, extra="c0") == ce_dims(quotient_lie(L, H, V), 2)


def test_negative_truncation_is_rejected():
    t = FIXTURES["nilpotent2"]
    with pytest.raises(ValueError):
        crossed_product(t.algebra, t.h, t.rep, -1)
