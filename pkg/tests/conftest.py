import random
from fractions import Fraction
from functools import lru_cache

import pytest

from hstandard.context import leibniz_context
from hstandard.crossed import crossed_product
from hstandard.exactla import ExactMatrix, Subspace, nullspace
from hstandard.fixtures import leibniz_fixtures
from hstandard.hcomplex import cochain_space, differential_matrix

FIXTURES = {t.name: t for t in leibniz_fixtures()}


@lru_cache(maxsize=None)
def leibniz_ctx(name):
    t = FIXTURES[name]
    return leibniz_context(t.algebra, t.h, t.rep, name=name)


@lru_cache(maxsize=None)
def crossed(name, n):
    t = FIXTURES[name]
    return crossed_product(t.algebra, t.h, t.rep, n)


def closed_basis(ctx, n):
    cb = cochain_space(ctx, n)
    if not cb.dim:
        return None
    rows = differential_matrix(ctx, n)
    ker = nullspace(ExactMatrix.from_rows(rows).transpose()) if rows and rows[0] else Subspace.full(cb.dim)
    return cb.cochains().combine([list(v) for v in ker.basis]) if ker.dim else None


def sheared_leibniz_complement(ctx):
    """x + h_0 for every complement vector x: another complement of H."""
    h0 = ctx.h.basis[0]
    return [[a + b for a, b in zip(x, h0)] for x in ctx.complement]


def sheared_complement(cp):
    """x + (the matching H vector) in each monomial block: another R-stable complement."""
    ctx = cp.context()
    hrow = cp.base[1].basis[0]
    comp = []
    for x in ctx.complement:
        x = list(x)
        i = next(t for t, v in enumerate(x) if v)
        mono = i // cp.dim_l
        for l, v in enumerate(hrow):
            x[cp.e_index(mono, l)] += v
        comp.append(x)
    return comp


def random_rational(rng):
    return Fraction(rng.randint(-5, 5), rng.randint(1, 4))


def random_coeffs(rng, count, dim):
    return [[random_rational(rng) for _ in range(dim)] for _ in range(count)]


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(params=list(FIXTURES))
def ctx(request):
    return leibniz_ctx(request.param)
