import random

import numpy as np
from hypothesis import given, strategies as st

from hyperoval import binmat
from hyperoval.binmat import BinaryMatrix
from hyperoval.field import make_context
from hyperoval.linpoly import LinearizedPoly
from hyperoval.search.kernels import high_bit_table, min_distance_batch, rank_batch, slot_tables, sweep
from hyperoval.semifield import field_spec, gtf64, spread_set


@given(st.integers(2, 8), st.integers(0, 2 ** 32))
def test_rank_batch_matches_binmat(n, seed):
    rng = np.random.default_rng(seed)
    mats = rng.integers(0, 1 << n, size=(40, n), dtype=np.uint32)
    mats[::5] &= mats[::5, :1]  # force some low-rank rows
    got = rank_batch(mats, high_bit_table(n))
    want = [binmat.rank(BinaryMatrix(n, tuple(int(v) for v in row))) for row in mats]
    assert list(got) == want


def test_slot_tables_build_the_matrix_of_f():
    ctx = make_context(5)
    tables = slot_tables(ctx)
    rng = random.Random(2)
    for _ in range(50):
        f = LinearizedPoly.random(ctx, rng)
        acc = np.zeros(5, dtype=np.uint32)
        for s, v in enumerate(f.coeffs):
            acc ^= tables[s, v]
        assert tuple(int(r) for r in acc) == f.to_binary().rows


def test_min_distance_batch():
    c = spread_set(gtf64())
    ctx = c.ctx
    rng = random.Random(3)
    fs = [LinearizedPoly.random(ctx, rng) for _ in range(20)]
    cands = np.array([f.to_binary().rows for f in fs], dtype=np.uint32)
    got = min_distance_batch(cands, c.matrices, high_bit_table(6))
    want = [min(binmat.rank((f - m).to_binary()) for m in c.maps) for f in fs]
    assert list(got) == want


def test_sweep_survivors_match_direct_enumeration_n3():
    c = spread_set(field_spec(3))
    ctx = c.ctx
    tables = slot_tables(ctx)
    hb = high_bit_table(3)
    vals = np.arange(8, dtype=np.int32).reshape(1, 1, 8)
    lens = np.full((1, 1), 8, dtype=np.int32)
    found_all = set()
    for a in range(8):
        for b in range(8):
            pre = tables[2, a] ^ tables[1, b]
            out = np.zeros((64, 1), dtype=np.int32)
            tested, found = sweep(pre, tables, vals, lens, c.matrices, -1, 2, hb, out, False)
            assert tested == 8
            found_all |= {(int(out[i, 0]), b, a) for i in range(found)}
    direct = {
        (f0, f1, f2)
        for f0 in range(8) for f1 in range(8) for f2 in range(8)
        if all(binmat.rank((LinearizedPoly(ctx, (f0, f1, f2)) - m).to_binary()) >= 2 for m in c.maps)
    }
    assert found_all == direct and len(direct) == 112
