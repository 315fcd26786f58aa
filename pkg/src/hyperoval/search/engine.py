"""Shears / non-shears sweeps over transversal-restricted coefficient spaces."""

from __future__ import annotations

import hashlib
import json
import logging
import time
import zlib
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .. import __version__, binmat
from ..geometry import Spread, certify_graph
from ..linpoly import LinearizedPoly, classify_nonshears_profile, classify_shears_profile, det_profile
from ..semifield import (
    PresemifieldSpec,
    SpreadSet,
    Transversal,
    coefficient_orbits,
    full_transversal,
    inverse_spread_set,
    published_transversal,
    spread_set,
    symmetry_group,
)
from . import checkpoint
from .kernels import high_bit_table, slot_tables, sweep

log = logging.getLogger(__name__)

SIDES = ("shears", "nonshears")
MODES = ("paper", "safe", "full")


class SearchError(ValueError):
    pass


@dataclass
class SearchTask:
    spec: PresemifieldSpec
    side: str = "shears"
    mode: str = "full"
    threads: int = 1
    checkpoint: Path | None = None
    resume: bool = False
    # stop after this many newly completed prefixes (a deliberate interruption)
    max_prefixes: int | None = None
    # sweep only the first k prefixes of the partition
    prefix_limit: int | None = None
    safe_depth: int = 2
    # survivors beyond this many skip the (slow) Dickson determinant profile
    profile_limit: int = 64
    threshold: int | None = None
    stop_first: bool = False


@dataclass
class Setup:
    """Everything a worker needs; immutable once built and shared across threads."""

    task: SearchTask
    code: SpreadSet
    inverse: SpreadSet | None
    spread: Spread
    transversal: Transversal
    threshold: int
    own_rank: int
    code_mats: np.ndarray
    tables: np.ndarray
    hb: np.ndarray
    vals: np.ndarray
    lens: np.ndarray
    prefixes: list[tuple[int, int]]
    descriptor: dict = field(default_factory=dict)
    task_hash: str = ""
    symmetry: dict | None = None

    @property
    def inner_slots(self) -> int:
        return self.vals.shape[1]

    def per_prefix(self) -> int:
        q, n = self.code.ctx.order, self.code.ctx.n
        return self.transversal.size() // (q ** min(2, n))


def transversal_for(task: SearchTask, c: SpreadSet) -> tuple[Transversal, dict | None]:
    ctx = c.ctx
    if task.mode == "full":
        return full_transversal(ctx), None
    if task.mode == "paper":
        return published_transversal(ctx), None
    group = symmetry_group(task.spec, c)
    if not group.is_closed():
        raise SearchError("verified pairs are not closed under composition; no safe transversal")
    depth = min(task.safe_depth, max(ctx.n - 2, 0))
    tr = coefficient_orbits(ctx, group.pairs, task.side, depth)
    return tr, {"pairs": len(group.pairs), "gamma_order": group.gamma_order(), "depth": depth}


def prepare(task: SearchTask) -> Setup:
    if task.side not in SIDES:
        raise SearchError(f"side must be one of {SIDES}")
    if task.mode not in MODES:
        raise SearchError(f"mode must be one of {MODES}")
    spec = task.spec
    ctx = spec.ctx
    n, q = ctx.n, ctx.order
    c = spread_set(spec)
    if not c.additive:
        raise SearchError("searches need an additive (semifield) spread set")
    spread = Spread(c)
    order = [0] + ctx.nonzero()
    inverse = None
    if task.side == "shears":
        code = c
        mats = c.matrices[order]
        own_rank = -1
    else:
        inverse = inverse_spread_set(c)
        code = inverse
        mats = inverse.matrices[order[1:]]
        own_rank = n - 1
    threshold = n - 1 if task.threshold is None else task.threshold

    tr, sym = transversal_for(task, c)
    L = max(n - 2, 0)
    if tr.depth() > L:
        raise SearchError("transversal restricts prefix slots")
    vals = np.zeros((len(tr.branches), L, q), dtype=np.int32)
    lens = np.zeros((len(tr.branches), L), dtype=np.int32)
    for b, br in enumerate(tr.branches):
        for s in range(L):
            allowed = br.slots[s] if s < len(br.slots) else range(q)
            vals[b, s, : len(allowed)] = allowed
            lens[b, s] = len(allowed)

    prefixes = [(a, b) for a in range(q) for b in range(q)]
    if task.prefix_limit is not None:
        prefixes = prefixes[: task.prefix_limit]

    setup = Setup(
        task=task,
        code=code,
        inverse=inverse,
        spread=spread,
        transversal=tr,
        threshold=threshold,
        own_rank=own_rank,
        code_mats=np.ascontiguousarray(mats, dtype=np.uint32),
        tables=slot_tables(ctx),
        hb=high_bit_table(n),
        vals=vals,
        lens=lens,
        prefixes=prefixes,
        symmetry=sym,
    )
    setup.descriptor = {
        "spec": spec.describe(),
        "side": task.side,
        "mode": task.mode,
        "threshold": threshold,
        "transversal": tr.as_dict(),
        "partition": {"slots": [n - 1, n - 2], "prefixes": len(prefixes), "truncated": task.prefix_limit is not None},
        "stop_first": task.stop_first,
    }
    if sym is not None:
        setup.descriptor["symmetry"] = sym
    blob = json.dumps(setup.descriptor, sort_keys=True).encode()
    setup.task_hash = hashlib.sha256(blob).hexdigest()
    return setup


def run_prefix(setup: Setup, prefix: tuple[int, int]) -> checkpoint.PrefixRecord:
    n = setup.code.ctx.n
    a, b = prefix
    pre = setup.tables[n - 1, a] ^ setup.tables[n - 2, b]
    L = setup.inner_slots
    cap = 256
    while True:
        out = np.zeros((cap, max(L, 1)), dtype=np.int32)
        tested, found = sweep(
            pre, setup.tables, setup.vals, setup.lens, setup.code_mats,
            setup.own_rank, setup.threshold, setup.hb, out, setup.task.stop_first,
        )
        if found <= cap:
            break
        cap = found
    survivors = tuple(tuple(int(v) for v in out[i, :L]) + (b, a) for i in range(found))
    return checkpoint.PrefixRecord(prefix, int(tested), survivors)


def _sweep_all(setup: Setup, done: dict, progress: Callable | None) -> tuple[dict, bool]:
    task = setup.task
    pending = [p for p in setup.prefixes if p not in done]
    total = len(setup.prefixes)
    writer = checkpoint.Writer(task.checkpoint, setup.task_hash, [done[p] for p in setup.prefixes if p in done]) if task.checkpoint else None
    interrupted = False
    new = 0
    limit = task.max_prefixes
    try:
        with ThreadPoolExecutor(max_workers=max(1, task.threads)) as pool:
            it = iter(pending)
            inflight = set()
            stop_submitting = False

            def top_up():
                while not stop_submitting and len(inflight) < 2 * max(1, task.threads):
                    if limit is not None and new + len(inflight) >= limit:
                        return
                    p = next(it, None)
                    if p is None:
                        return
                    inflight.add(pool.submit(run_prefix, setup, p))

            try:
                top_up()
                while inflight:
                    finished, _ = wait(inflight, return_when=FIRST_COMPLETED)
                    for fut in finished:
                        inflight.discard(fut)
                        rec = fut.result()
                        done[rec.prefix] = rec
                        new += 1
                        if writer:
                            writer.append(rec)
                        if progress:
                            progress(len(done), total)
                    if limit is not None and new >= limit:
                        stop_submitting = True
                        interrupted = True
                    top_up()
            except KeyboardInterrupt:
                stop_submitting = True
                interrupted = True
                for fut in inflight:
                    fut.cancel()
                raise
    except KeyboardInterrupt:
        log.warning("interrupted after %d prefixes", len(done))
    finally:
        if writer:
            writer.close()
    complete = all(p in done for p in setup.prefixes)
    return done, interrupted and not complete


def certify_survivor(setup: Setup, coeffs: tuple[int, ...], with_profile: bool) -> dict:
    ctx = setup.code.ctx
    f = LinearizedPoly(ctx, coeffs)
    spread = setup.spread
    if setup.task.side == "shears":
        cert = certify_graph(f, spread, "graph")
        if with_profile:
            cert["profile"] = classify_shears_profile(det_profile(f, spread.code))
            cert["profile"]["d0"] = f"{cert['profile']['d0']:#04x}"
    else:
        cert = certify_graph(f, spread, "cograph")
        full = [
            y for y in range(1, ctx.order)
            if binmat.rank((f - setup.inverse.maps[y]).to_binary()) == ctx.n
        ]
        cert["full_rank_at"] = [f"{y:#04x}" for y in full]
        cert["unique_a"] = len(full) == 1
        if with_profile:
            prof = classify_nonshears_profile(det_profile(f, spread.code, inverse_side=True))
            prof["a"] = None if prof["a"] is None else f"{prof['a']:#04x}"
            cert["profile"] = prof
    return cert


def partition_crc(setup: Setup, done: dict) -> str:
    crc = 0
    for p in setup.prefixes:
        if p in done:
            crc = zlib.crc32(done[p].line(setup.task_hash).encode(), crc)
    return f"{crc:08x}"


def run_search(task: SearchTask, progress: Callable | None = None) -> dict:
    """Sweep, merge, certify; returns the report envelope (schema in ``report.py``)."""
    t0 = time.time()
    setup = prepare(task)
    done: dict = {}
    resumed = 0
    if task.checkpoint and task.resume:
        loaded = checkpoint.load(task.checkpoint, setup.task_hash)
        done = {p: r for p, r in loaded.items() if p in set(setup.prefixes)}
        resumed = len(done)
    elif task.checkpoint and Path(task.checkpoint).exists() and Path(task.checkpoint).stat().st_size:
        raise SearchError(f"checkpoint {task.checkpoint} exists; pass resume or remove it")
    t_sweep = time.time()
    done, interrupted = _sweep_all(setup, done, progress)
    sweep_time = time.time() - t_sweep

    ctx = setup.code.ctx
    survivors = sorted({s for r in done.values() for s in r.survivors})
    complete = all(p in done for p in setup.prefixes)
    tested = sum(r.tested for r in done.values())
    expected = setup.per_prefix() * len(setup.prefixes)
    certs = []
    for i, s in enumerate(survivors):
        cert = certify_survivor(setup, s, i < task.profile_limit)
        certs.append({"coeffs": [f"{v:#04x}" for v in s], "certification": cert})
    all_cert = all(c["certification"].get("certified") for c in certs)
    full_partition = task.prefix_limit is None
    coverage = complete and tested == expected
    verdicts = {
        "complete": complete,
        "coverage_exact": coverage,
        "all_survivors_certified": all_cert,
        "survivor_count": len(survivors),
    }
    if full_partition and coverage and not task.stop_first:
        verdicts["exists"] = bool(survivors) and all_cert
    else:
        verdicts["exists"] = None
    report = {
        "tool_version": __version__,
        "command": "search",
        "task": dict(setup.descriptor, task_hash=setup.task_hash),
        "result": {
            "survivors": certs,
            "counts": {
                "candidates_tested": tested,
                "candidates_expected": expected,
                "prefixes_done": len(done),
                "prefixes_total": len(setup.prefixes),
            },
            "verdicts": verdicts,
            "partition_log_crc": partition_crc(setup, done),
        },
        "timing": {
            "wall_time_s": round(time.time() - t0, 3),
            "sweep_time_s": round(sweep_time, 3),
            "workers": task.threads,
            "resumed_prefixes": resumed,
            "interrupted": interrupted,
        },
    }
    log.info("%s/%s on %s: %d survivors, %d tested", task.side, task.mode, ctx, len(survivors), tested)
    return report


def canonical(report: dict) -> str:
    """Report text with the timing block removed; the unit of determinism checks."""
    body = {k: v for k, v in report.items() if k != "timing"}
    return json.dumps(body, sort_keys=True, indent=2)
