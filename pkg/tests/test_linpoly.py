import random

import pytest
from hypothesis import given, strategies as st

from hyperoval import binmat
from hyperoval.field import gf64, make_context
from hyperoval.linpoly import (
    LinearizedPoly,
    SingularMapError,
    classify_nonshears_profile,
    classify_shears_profile,
    determinant,
    dickson,
    evaluate,
    from_values,
    invert,
    rank_via_dickson,
)


@st.composite
def polys(draw, lo=2, hi=7):
    ctx = make_context(draw(st.integers(lo, hi)))
    co = draw(st.lists(st.integers(0, ctx.order - 1), min_size=ctx.n, max_size=ctx.n))
    return LinearizedPoly(ctx, tuple(co))


def naive_eval(f, x):
    """Power-by-power evaluation, no Frobenius tables."""
    ctx = f.ctx
    out = 0
    for i, c in enumerate(f.coeffs):
        out ^= ctx.mul(c, ctx.pow(x, 2 ** i))
    return out


@given(polys(), st.data())
def test_evaluation_and_additivity(f, data):
    q = f.ctx.order
    x = data.draw(st.integers(0, q - 1))
    y = data.draw(st.integers(0, q - 1))
    assert evaluate(f, x) == naive_eval(f, x)
    assert f(x ^ y) == f(x) ^ f(y)


@given(polys())
def test_values_table(f):
    vals = f.values()
    assert all(vals[x] == f(x) for x in range(0, f.ctx.order, 3))


@given(polys())
def test_rank_equals_dickson_rank(f):
    assert f.binary_rank() == rank_via_dickson(f)


@given(polys())
def test_interpolation_roundtrip(f):
    images = [f(1 << k) for k in range(f.ctx.n)]
    assert from_values(f.ctx, images) == f


@given(polys())
def test_invert(f):
    ctx = f.ctx
    if f.binary_rank() < ctx.n:
        with pytest.raises(SingularMapError):
            invert(f)
        return
    g = invert(f)
    assert all(g(f(x)) == x for x in range(ctx.order))


@given(polys(), st.data())
def test_scale_input_output(f, data):
    ctx = f.ctx
    a = data.draw(st.integers(1, ctx.order - 1))
    b = data.draw(st.integers(1, ctx.order - 1))
    g = f.scale_input_output(a, b)
    x = data.draw(st.integers(0, ctx.order - 1))
    assert g(x) == ctx.mul(a, f(ctx.mul(b, x)))


@given(polys())
def test_determinant_vanishes_iff_singular(f):
    det = determinant(dickson(f))
    assert (det == 0) == (f.binary_rank() < f.ctx.n)


@given(polys(hi=6))
def test_dickson_determinant_is_in_the_prime_field(f):
    # det D_f is the GF(2)-determinant of f, so it lies in GF(2)
    assert determinant(dickson(f)) in (0, 1)


def test_monomials_and_known_ranks():
    ctx = gf64()
    assert LinearizedPoly.identity(ctx).binary_rank() == 6
    assert LinearizedPoly.zero(ctx).binary_rank() == 0
    # x^2 + x kills GF(2); x^4 + x kills GF(4)
    assert LinearizedPoly(ctx, (1, 1, 0, 0, 0, 0)).binary_rank() == 5
    assert LinearizedPoly(ctx, (1, 0, 1, 0, 0, 0)).binary_rank() == 4
    assert LinearizedPoly(ctx, (1, 0, 0, 1, 0, 0)).binary_rank() == 3


def test_parse_and_format():
    ctx = gf64()
    f = LinearizedPoly.parse(ctx, "0x01, j^5, 0, 0, 0x3f, 1")
    assert f.coeffs == (1, ctx.gpow(5), 0, 0, 0x3F, 1)
    assert LinearizedPoly.parse(ctx, str(f)) == f
    with pytest.raises(ValueError):
        LinearizedPoly.parse(ctx, "1,2,3")


def test_random_rank_agreement_many():
    rng = random.Random(7)
    for n in (2, 3, 4, 5, 6):
        ctx = make_context(n)
        for _ in range(200):
            f = LinearizedPoly.random(ctx, rng)
            assert f.binary_rank() == rank_via_dickson(f)


def test_profile_classifiers():
    zero_elsewhere = {0: 1, 1: 0, 2: 0}
    assert classify_shears_profile(zero_elsewhere) == {"matches": True, "strict": True, "d0": 1}
    assert classify_shears_profile({0: 0, 1: 0})["matches"] is False
    assert classify_nonshears_profile({0: 0, 1: 0, 2: 1}) == {"matches": True, "strict": True, "a": 2}
    assert classify_nonshears_profile({0: 0, 1: 1, 2: 1})["matches"] is False
