import itertools
import random

import pytest
from hypothesis import given, strategies as st

from hyperoval.field import make_context
from hyperoval.geometry import (
    INF,
    GeometryError,
    HyperovalCandidate,
    Spread,
    Subspace,
    certify_graph,
    certify_hyperoval,
    certify_translation,
    fast_intersection_dim,
    hyperoval_from_scattered,
    intersection_dim,
    is_scattered,
    pack,
    subspace_from_graph,
    trivial_intersectors,
)
from hyperoval.linpoly import LinearizedPoly, invert
from hyperoval.semifield import field_spec, gtf64, inverse_spread_set, spread_set


def spread(n):
    return Spread(spread_set(field_spec(n)))


def brute_lines(d):
    """Every line of pi(D) as (point-at-infinity label, frozenset of affine points)."""
    q = d.ctx.order
    for e in d.elements:
        s = set(d.element(e).points())
        seen = set()
        for u in range(q * q):
            if u in seen:
                continue
            coset = frozenset(u ^ v for v in s)
            seen |= coset
            yield e, coset


def brute_is_arc(hc, d):
    for e, pts in brute_lines(d):
        if len(pts & hc.affine) + (e in hc.infinite) > 2:
            return False
    return len(hc.infinite) <= 2


def test_spread_partition_counts():
    for d in (spread(3), spread(4), Spread(spread_set(gtf64()))):
        pc = d.partition_counts()
        assert pc["exact"] and pc["covered"] == pc["expected"]
        assert pc["elements"] == d.ctx.order + 1


def test_partition_counts_detect_overlap():
    from hyperoval.semifield import table_spec

    ctx = make_context(3)
    rows = list(spread_set(field_spec(3)).maps)
    rows[6] = rows[2]
    assert not Spread(spread_set(table_spec(ctx, rows))).partition_counts()["exact"]


def test_spread_elements_pairwise_trivial():
    d = spread(3)
    els = [d.element(e) for e in d.elements]
    for a, b in itertools.combinations(els, 2):
        assert intersection_dim(a, b) == 0
    assert sum(2 ** s.dim - 1 for s in els) == 63


def test_graph_of_zero_is_s0():
    d = spread(4)
    u = subspace_from_graph(LinearizedPoly.zero(d.ctx))
    assert u == d.element(0)


@given(st.integers(0, 10 ** 6))
def test_graph_and_cograph_of_inverse_coincide(seed):
    ctx = make_context(4)
    rng = random.Random(seed)
    f = LinearizedPoly.random(ctx, rng)
    if f.binary_rank() < 4:
        return
    assert subspace_from_graph(f, "graph") == subspace_from_graph(invert(f), "cograph")


@given(st.integers(0, 10 ** 6))
def test_intersection_dims_agree_three_ways(seed):
    rng = random.Random(seed)
    c = spread_set(gtf64())
    d = Spread(c)
    inv = inverse_spread_set(c)
    f = LinearizedPoly.random(d.ctx, rng)
    for side in ("graph", "cograph"):
        u = subspace_from_graph(f, side)
        pts = set(u.points())
        for e in [INF, 0] + [rng.randrange(1, 64) for _ in range(4)]:
            s = d.element(e)
            by_count = (len(pts & set(s.points()))).bit_length() - 1
            assert intersection_dim(u, s) == by_count
            assert fast_intersection_dim(f, side, e, d, inv) == by_count


def test_cograph_meets_shears_element_in_kernel():
    d = spread(4)
    f = LinearizedPoly(d.ctx, (1, 1, 0, 0))  # x^2 + x, rank 3
    w = subspace_from_graph(f, "cograph")
    assert intersection_dim(w, d.element(INF)) == 4 - f.binary_rank() == 1
    assert intersection_dim(subspace_from_graph(f, "graph"), d.element(INF)) == 0


def test_scattered_examples():
    d = spread(2)
    u = subspace_from_graph(LinearizedPoly.monomial(d.ctx, 1))
    assert is_scattered(u, d, 1)
    s0 = d.element(0)
    r = is_scattered(s0, d, 1)
    assert not r and r.witness == 0 and r.witness_dim == 2
    assert is_scattered(s0, d, 2)
    with pytest.raises(ValueError):
        is_scattered(u, d, -1)


def test_trivial_intersectors_of_x_squared():
    d = spread(2)
    u = subspace_from_graph(LinearizedPoly.monomial(d.ctx, 1))
    assert trivial_intersectors(u, d) == [INF, 0]
    with pytest.raises(GeometryError):
        trivial_intersectors(d.element(0), d)


def test_payne_hyperoval_n4():
    d = spread(4)
    u = subspace_from_graph(LinearizedPoly.monomial(d.ctx, 1))
    prof = {e: intersection_dim(u, d.element(e)) for e in d.elements}
    assert sum(1 for k in prof.values() if k == 1) == 15
    hc = hyperoval_from_scattered(u, d)
    assert hc.size() == 18
    cert = certify_hyperoval(hc, d)
    assert cert.ok and cert.hyperoval and cert.lines_checked == 273
    assert brute_is_arc(hc, d)
    assert certify_translation(hc, 4)


def test_arc_that_is_not_a_hyperoval():
    d = spread(4)
    hc = hyperoval_from_scattered(subspace_from_graph(LinearizedPoly.monomial(d.ctx, 1)), d)
    smaller = HyperovalCandidate(hc.affine - {next(iter(hc.affine - {0}))}, hc.infinite)
    cert = certify_hyperoval(smaller, d)
    assert cert.ok and not cert.hyperoval and cert.arc_size == 17
    assert not certify_translation(smaller, 4)


def test_s0_is_not_an_arc():
    d = spread(3)
    hc = HyperovalCandidate(frozenset(d.element(0).points()), (INF, 1))
    cert = certify_hyperoval(hc, d)
    assert not cert.ok and cert.violation["line"] == "0x00"
    assert not brute_is_arc(hc, d)


def test_perturbed_hyperoval_fails_translation():
    d = spread(4)
    ctx = d.ctx
    hc = hyperoval_from_scattered(subspace_from_graph(LinearizedPoly.monomial(ctx, 1)), d)
    # swap one point for another affine point: either the arc or the subspace property breaks
    rng = random.Random(0)
    for _ in range(20):
        out = rng.choice(sorted(hc.affine - {0}))
        new = rng.randrange(256)
        if new in hc.affine:
            continue
        moved = HyperovalCandidate((hc.affine - {out}) | {new}, hc.infinite)
        assert not certify_translation(moved, 4)
        assert certify_hyperoval(moved, d).ok == brute_is_arc(moved, d)
    assert not certify_translation(HyperovalCandidate(hc.affine, hc.infinite[:1]), 4)


@pytest.mark.parametrize("n", [2, 3])
def test_certifier_matches_brute_force_on_random_sets(n):
    d = spread(n)
    q = d.ctx.order
    rng = random.Random(n)
    for _ in range(60):
        aff = frozenset(rng.sample(range(q * q), rng.randint(2, q + 2)))
        inf = tuple(rng.sample([INF] + list(range(q)), rng.randint(0, 2)))
        hc = HyperovalCandidate(aff, inf)
        assert certify_hyperoval(hc, d).ok == brute_is_arc(hc, d)


def test_scattered_iff_shears_predicate_n3():
    """Every f with U_f n S_inf = 0: scattered exactly when rank(f - R_y) >= n - 1 for all y."""
    from hyperoval import binmat

    c = spread_set(field_spec(3))
    d = Spread(c)
    ctx = d.ctx
    for co in itertools.product(range(8), repeat=3):
        f = LinearizedPoly(ctx, co)
        pred = all(binmat.rank((f - m).to_binary()) >= 2 for m in c.maps)
        u = subspace_from_graph(f)
        assert bool(is_scattered(u, d, 1)) == pred
        if pred:
            assert certify_graph(f, d)["certified"]


def test_certify_graph_of_nonscattered():
    d = spread(3)
    out = certify_graph(LinearizedPoly.identity(d.ctx), d)
    assert out == {"scattered": False, "witness": "0x01", "certified": False}


def test_pack_roundtrip():
    from hyperoval.geometry import unpack

    ctx = make_context(5)
    for x, z in [(0, 0), (31, 1), (7, 30)]:
        assert unpack(ctx, pack(ctx, x, z)) == (x, z)


def test_subspace_equality_is_canonical():
    ctx = make_context(3)
    a = Subspace.span(ctx, [pack(ctx, 1, 2), pack(ctx, 2, 4)])
    b = Subspace.span(ctx, [pack(ctx, 3, 6), pack(ctx, 2, 4)])
    assert a == b and a.dim == 2 and len(a.points()) == 4
