"""Covering radius of a set of GF(2)-linear maps in the rank metric.

For n <= 4 every linearized polynomial is scanned and rank distances are read
off kernel sizes (count of x with g(x) = f(x)), which shares no code with the
elimination kernels used by the searches.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..field import FieldContext
from ..linpoly import LinearizedPoly
from ..semifield import Transversal
from .kernels import high_bit_table, min_distance_batch, slot_tables, sweep


@dataclass
class CoveringResult:
    exact: int | None
    lower: int
    upper: int
    method: str

    def as_dict(self) -> dict:
        return {"exact": self.exact, "lower": self.lower, "upper": self.upper, "method": self.method}


def _slot_values(ctx: FieldContext) -> np.ndarray:
    """vals[s, c, x] = c * x^(2^s)."""
    n, q = ctx.n, ctx.order
    frob = ctx.frobenius_array
    mt = ctx.mul_table
    return np.stack([mt[:, frob[s]] for s in range(n)])


def exhaustive_covering_radius(ctx: FieldContext, maps: Sequence[LinearizedPoly], chunk: int = 4096) -> int:
    """max over all g of min over f in maps of rank(g - f), by kernel counting."""
    n, q = ctx.n, ctx.order
    if n > 4:
        raise ValueError("exhaustive scan is limited to n <= 4")
    code_vals = np.array([m.values() for m in maps], dtype=np.int64)  # (K, q)
    sv = _slot_values(ctx)
    total = q ** n
    best = 0
    log2 = {1 << k: k for k in range(n + 1)}
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk))
        gv = np.zeros((idx.size, q), dtype=np.int64)
        rest = idx.copy()
        for s in range(n):
            gv ^= sv[s][rest % q]
            rest //= q
        # kernel size of g - f = #{x : g(x) = f(x)}
        ksize = (gv[:, None, :] == code_vals[None, :, :]).sum(axis=2)
        kmax = ksize.max(axis=1)
        ranks = n - np.vectorize(log2.__getitem__)(kmax)
        best = max(best, int(ranks.max()))
    return best


def _threshold_exists(ctx: FieldContext, code_mats: np.ndarray, tr: Transversal, t: int) -> bool:
    """Is there a transversal element at rank distance >= t from every code matrix?"""
    n, q = ctx.n, ctx.order
    tables = slot_tables(ctx)
    hb = high_bit_table(n)
    L = max(n - 2, 0)
    vals = np.zeros((len(tr.branches), L, q), dtype=np.int32)
    lens = np.zeros((len(tr.branches), L), dtype=np.int32)
    for b, br in enumerate(tr.branches):
        for s in range(L):
            allowed = br.slots[s] if s < len(br.slots) else range(q)
            vals[b, s, : len(allowed)] = allowed
            lens[b, s] = len(allowed)
    out = np.zeros((1, max(L, 1)), dtype=np.int32)
    for a in range(q):
        for b in range(q):
            pre = tables[n - 1, a] ^ tables[n - 2, b]
            _, found = sweep(pre, tables, vals, lens, code_mats, -1, t, hb, out, True)
            if found:
                return True
    return False


def covering_radius(
    ctx: FieldContext,
    maps: Sequence[LinearizedPoly],
    exact_limit: int = 4,
    transversal: Transversal | None = None,
    samples: int = 20000,
    seed: int = 0,
    spread_like: bool = True,
) -> CoveringResult:
    """Exact for n <= exact_limit, or with a symmetry-verified transversal; bounds otherwise.

    ``spread_like`` (|C| = 2^n with full-rank differences) supplies the upper
    bound n - 1.
    """
    n = ctx.n
    upper = n - 1 if spread_like else n
    if n <= exact_limit:
        r = exhaustive_covering_radius(ctx, maps)
        return CoveringResult(r, r, r, "exhaustive")
    code_mats = np.array([m.to_binary().rows for m in maps], dtype=np.uint32)
    if transversal is not None:
        if not transversal.source.startswith(("verified", "full")):
            raise ValueError("exact covering radius needs a verified transversal")
        for t in range(upper, -1, -1):
            if _threshold_exists(ctx, code_mats, transversal, t):
                return CoveringResult(t, t, t, f"threshold-search/{transversal.source}")
    rng = random.Random(seed)
    tables = slot_tables(ctx)
    cands = np.zeros((samples, n), dtype=np.uint32)
    for i in range(samples):
        for s in range(n):
            cands[i] ^= tables[s, rng.randrange(ctx.order)]
    lower = int(min_distance_batch(cands, code_mats, high_bit_table(n)).max())
    return CoveringResult(None, lower, upper, f"sampled({samples})")
