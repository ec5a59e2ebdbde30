from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hstandard.exactla import (
    DimensionError,
    ExactMatrix,
    Subspace,
    echelon,
    fmt_q,
    nullspace,
    parse_q,
    q,
    rank,
    solve,
)


def naive_rank(rows):
    """Textbook Gaussian elimination over Fractions, first nonzero pivot."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    r = 0
    for c in range(len(a[0])):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def matvec(rows, x):
    return [sum((Fraction(a) * b for a, b in zip(r, x)), Fraction(0)) for r in rows]


rationals = st.fractions(min_value=-6, max_value=6, max_denominator=5)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    # low-rank products give plenty of dependent rows
    k = draw(st.integers(0, min(r, c)))
    a = [[draw(rationals) for _ in range(k)] for _ in range(r)]
    b = [[draw(rationals) for _ in range(c)] for _ in range(k)]
    return [[sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0)) for j in range(c)] for i in range(r)]


def test_rational_parsing():
    assert parse_q("3/6") == Fraction(1, 2)
    assert parse_q("-4") == -4
    assert fmt_q(Fraction(-2, 4)) == "-1/2"
    assert fmt_q(3) == "3"
    for bad in ("1.5", "1e3", "", "x"):
        with pytest.raises(ValueError):
            parse_q(bad)
    with pytest.raises(ZeroDivisionError):
        parse_q("1/0")
    with pytest.raises(TypeError):
        q(0.5)


def test_lowest_terms():
    x = q("-6/4")
    assert (x.numerator, x.denominator) == (-3, 2)
    with pytest.raises(ValueError):
        parse_q("6/-4")
    assert q("1/3") + q("1/6") == Fraction(1, 2)


def test_rank_examples():
    assert rank(ExactMatrix.identity(2)) == 2
    assert rank([[1, 1]]) == 1
    assert rank(ExactMatrix.zeros(3, 3)) == 0


def test_nullspace_examples():
    ns = nullspace([[1, 1]])
    assert ns == Subspace.span([[1, -1]], 2)
    assert ns.basis == ((Fraction(1), Fraction(-1)),)
    assert nullspace(ExactMatrix.identity(3)).dim == 0
    assert nullspace(ExactMatrix.zeros(2, 2)) == Subspace.full(2)


def test_solve_examples():
    assert solve(ExactMatrix.identity(2), ["3/2", -1]) == [Fraction(3, 2), -1]
    x = solve([[1, 1]], [5])
    assert x[0] + x[1] == 5
    assert x == solve([[1, 1]], [5])
    assert solve([[1], [1]], [0, 1]) is None


def test_subspace_examples():
    e1 = Subspace.span([[1, 0]], 2)
    e2 = Subspace.span([[0, 1]], 2)
    assert Subspace.full(2).contains(e1)
    assert e1.intersect(e2).dim == 0
    full3 = Subspace.full(3)
    assert full3.quotient_dim(Subspace.span([[1, 0, 0]], 3)) == 2
    with pytest.raises(DimensionError):
        e1.quotient_dim(e2)
    assert e1.sum(e2) == Subspace.full(2)
    assert Subspace.span([[2, 4], [1, 2]], 2) == Subspace.span([[-1, -2]], 2)


def test_echelon_is_reduced():
    red, piv = echelon([[0, 2, 4], [1, 1, 1], [1, 3, 5]])
    assert piv == [0, 1]
    assert red == [[1, 0, -1], [0, 1, 2]]


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_naive_oracle(rows):
    assert rank(rows) == naive_rank(rows)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity(rows):
    ns = nullspace(rows)
    assert rank(rows) + ns.dim == len(rows[0])
    for v in ns.basis:
        assert not any(matvec(rows, v))


@settings(max_examples=150, deadline=None)
@given(matrices(), st.data())
def test_solve_consistent_systems(rows, data):
    x = [data.draw(rationals) for _ in rows[0]]
    b = matvec(rows, x)
    sol = solve(rows, b)
    assert sol is not None and matvec(rows, sol) == b


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_nullspace_is_canonical(rows):
    a, b = nullspace(rows), nullspace([list(r) for r in rows])
    assert a.basis == b.basis and repr(a) == repr(b)
    # any spanning set of the same space gives the same basis
    doubled = [list(v) for v in a.basis] + [[2 * x for x in v] for v in a.basis]
    assert Subspace.span(doubled, len(rows[0])) == a


@settings(max_examples=100, deadline=None)
@given(matrices(), matrices())
def test_intersection_dimension_formula(a, b):
    if len(a[0]) != len(b[0]):
        return
    n = len(a[0])
    sa, sb = Subspace.span(a, n), Subspace.span(b, n)
    inter = sa.intersect(sb)
    assert sa.contains(inter) and sb.contains(inter)
    assert sa.dim + sb.dim == sa.sum(sb).dim + inter.dim
