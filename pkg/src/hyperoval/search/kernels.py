"""numba kernels for the candidate sweeps.

A candidate map is kept as n GF(2) row bitmasks.  Because f -> M_f is
GF(2)-linear, M_f is the XOR of one precomputed matrix per coefficient slot,
and the odometer below only recomputes the slots that changed.
"""

from __future__ import annotations

import numpy as np
from numba import njit


def slot_tables(ctx) -> np.ndarray:
    """tables[s, c] = GF(2) rows of x -> c * x^(2^s)."""
    n, q = ctx.n, ctx.order
    t = np.zeros((n, q, n), dtype=np.uint32)
    for s in range(n):
        for c in range(1, q):
            for col in range(n):
                img = ctx.mul(c, ctx.frobenius(1 << col, s))
                for r in range(n):
                    if img >> r & 1:
                        t[s, c, r] |= 1 << col
    return t


def high_bit_table(n: int) -> np.ndarray:
    hb = np.zeros(1 << n, dtype=np.int8)
    for v in range(1, 1 << n):
        hb[v] = v.bit_length() - 1
    return hb


@njit(nogil=True, cache=True)
def _rank_diff_at_least(a, b, n, t, hb, piv):
    """rank(A + B) >= t for row-bitmask matrices, stopping once it cannot hold."""
    for i in range(n):
        piv[i] = 0
    dependent = 0
    allowed = n - t
    for r in range(n):
        v = a[r] ^ b[r]
        while v != 0:
            h = hb[v]
            p = piv[h]
            if p == 0:
                piv[h] = v
                break
            v ^= p
        if v == 0:
            dependent += 1
            if dependent > allowed:
                return False
    return True


@njit(nogil=True, cache=True)
def _rank(a, n, hb, piv):
    for i in range(n):
        piv[i] = 0
    rk = 0
    for r in range(n):
        v = a[r]
        while v != 0:
            h = hb[v]
            p = piv[h]
            if p == 0:
                piv[h] = v
                rk += 1
                break
            v ^= p
    return rk


@njit(nogil=True, cache=True)
def sweep(prefix_rows, tables, vals, lens, code, own_rank, threshold, hb, out, stop_first):
    """Enumerate every branch's inner-slot product under a fixed prefix matrix.

    A candidate M survives when rank(M) == own_rank (skipped if own_rank < 0)
    and rank(M - code[k]) >= threshold for every k.  Inner-slot values of
    survivors are written to ``out``; returns (tested, survivors_found).  If
    more survivors exist than rows in ``out`` the count keeps growing and the
    caller retries with a larger buffer.
    """
    n = prefix_rows.shape[0]
    nb = vals.shape[0]
    L = vals.shape[1]
    nk = code.shape[0]
    cap = out.shape[0]
    acc = np.zeros((L + 1, n), dtype=np.uint32)
    idx = np.zeros(max(L, 1), dtype=np.int64)
    piv = np.zeros(n, dtype=np.uint32)
    zero = np.zeros(n, dtype=np.uint32)
    for r in range(n):
        acc[L, r] = prefix_rows[r]
    tested = 0
    found = 0
    for b in range(nb):
        empty = False
        for s in range(L):
            if lens[b, s] == 0:
                empty = True
        if empty:
            continue
        for s in range(L):
            idx[s] = 0
        for s in range(L - 1, -1, -1):
            v = vals[b, s, 0]
            for r in range(n):
                acc[s, r] = acc[s + 1, r] ^ tables[s, v, r]
        while True:
            tested += 1
            m = acc[0]
            ok = True
            if own_rank >= 0:
                ok = _rank(m, n, hb, piv) == own_rank
            if ok:
                for k in range(nk):
                    if not _rank_diff_at_least(m, code[k], n, threshold, hb, piv):
                        ok = False
                        break
            if ok:
                if found < cap:
                    for s in range(L):
                        out[found, s] = vals[b, s, idx[s]]
                found += 1
                if stop_first:
                    return tested, found
            s = 0
            while s < L:
                idx[s] += 1
                if idx[s] < lens[b, s]:
                    break
                idx[s] = 0
                s += 1
            if s == L:
                break
            for t in range(s, -1, -1):
                v = vals[b, t, idx[t]]
                for r in range(n):
                    acc[t, r] = acc[t + 1, r] ^ tables[t, v, r]
    return tested, found


@njit(nogil=True, cache=True)
def min_distance_batch(cands, code, hb):
    """For each candidate matrix, min over k of rank(cand - code[k])."""
    n = cands.shape[1]
    piv = np.zeros(n, dtype=np.uint32)
    diff = np.zeros(n, dtype=np.uint32)
    out = np.empty(cands.shape[0], dtype=np.int64)
    for i in range(cands.shape[0]):
        best = n
        for k in range(code.shape[0]):
            for r in range(n):
                diff[r] = cands[i, r] ^ code[k, r]
            rk = _rank(diff, n, hb, piv)
            if rk < best:
                best = rk
                if best == 0:
                    break
        out[i] = best
    return out


@njit(nogil=True, cache=True)
def rank_batch(mats, hb):
    n = mats.shape[1]
    piv = np.zeros(n, dtype=np.uint32)
    out = np.empty(mats.shape[0], dtype=np.int64)
    for i in range(mats.shape[0]):
        out[i] = _rank(mats[i], n, hb, piv)
    return out
