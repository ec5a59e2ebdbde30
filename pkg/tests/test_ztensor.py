from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from hstandard.ztensor import LIMIT, ZT, assemble, stack, zsum

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)


def frac_array(values, shape):
    a = np.empty(shape, dtype=object)
    a.flat[:] = values
    return a


@settings(max_examples=100, deadline=None)
@given(st.lists(rationals, min_size=6, max_size=6), st.lists(rationals, min_size=6, max_size=6))
def test_arithmetic_matches_fractions(xs, ys):
    a, b = frac_array(xs, (2, 3)), frac_array(ys, (2, 3))
    za, zb = ZT.from_exact(a.tolist()), ZT.from_exact(b.tolist())
    assert ((za + zb).to_fractions() == a + b).all()
    assert ((za - zb).to_fractions() == a - b).all()
    assert (za.scale(Fraction(-3, 7)).to_fractions() == a * Fraction(-3, 7)).all()
    prod = np.tensordot(a, b.T, axes=([1], [0]))
    assert (za.tdot(zb.transpose((1, 0)), ([1], [0])).to_fractions() == prod).all()


def test_overflow_falls_back_to_python_ints():
    big = ZT.from_exact([[2 ** 40, 1], [1, 2 ** 40]])
    assert big.data.dtype == np.int64
    sq = big.tdot(big, ([1], [0]))
    assert sq.data.dtype == object
    assert sq.item((0, 0)) == 2 ** 80 + 1
    huge = ZT.from_exact([LIMIT * 4])
    assert huge.data.dtype == object
    assert (huge + huge).item((0,)) == LIMIT * 8


def test_reduced_and_helpers():
    t = ZT(np.array([2, 4, 6]), 4).reduced()
    assert (t.data.tolist(), t.den) == ([1, 2, 3], 2)
    assert zsum([], (2,)).is_zero()
    s = stack([ZT.from_exact(["1/2", 1]), ZT.from_exact(["1/3", 0])])
    assert s.to_fractions().tolist() == [[Fraction(1, 2), 1], [Fraction(1, 3), 0]]
    a = assemble((2, 2), [((0, slice(None)), ZT.from_exact(["1/2", 1]))])
    assert a.to_fractions().tolist() == [[Fraction(1, 2), 1], [0, 0]]
