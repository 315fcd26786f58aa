"""Presemifield multiplications, their spread sets, and verified autotopism pairs."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import binmat
from .field import FieldContext, make_context
from .linpoly import LinearizedPoly, invert


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class PresemifieldSpec:
    """A multiplication x o y on GF(2^n).

    kind ``field``: x*y.  kind ``twisted``: x*y + j x^(2^i) y^(2^k).
    kind ``table``: rows[y] is the linearized polynomial R_y.
    """

    ctx: FieldContext
    kind: str
    i: int = 0
    k: int = 0
    j: int = 0
    rows: tuple[LinearizedPoly, ...] = field(default=(), repr=False)

    def __post_init__(self):
        n = self.ctx.n
        if self.kind == "twisted":
            if not (0 < self.i < n and 0 < self.k < n):
                raise SpecError(f"twisted field needs 0 < i, k < {n}")
            d = math.gcd(n, math.gcd(self.i, self.k))
            if self.ctx.relative_norm(self.j, d) == 1:
                raise SpecError(f"norm of j to GF(2^{d}) is 1; not a semifield")
        elif self.kind == "table":
            if len(self.rows) != self.ctx.order:
                raise SpecError(f"table needs {self.ctx.order} rows, got {len(self.rows)}")
            if any(self.rows[0].coeffs):
                raise SpecError("row for y=0 must be the zero map")
        elif self.kind != "field":
            raise SpecError(f"unknown kind {self.kind!r}")

    def describe(self) -> dict:
        d = {"kind": self.kind, "n": self.ctx.n, "modulus": f"{self.ctx.modulus:#x}"}
        if self.kind == "twisted":
            d.update(i=self.i, k=self.k, j=f"{self.j:#04x}")
        elif self.kind == "table":
            h = hashlib.sha256("\n".join(str(r) for r in self.rows).encode()).hexdigest()
            d["table_sha256"] = h
        return d

    def norm_check(self) -> dict | None:
        if self.kind != "twisted":
            return None
        d = math.gcd(self.ctx.n, math.gcd(self.i, self.k))
        nv = self.ctx.relative_norm(self.j, d)
        return {"subfield_degree": d, "norm": f"{nv:#04x}", "ok": nv != 1}


def field_spec(n: int, modulus: int | None = None) -> PresemifieldSpec:
    return PresemifieldSpec(make_context(n, modulus), "field")


def twisted_spec(ctx: FieldContext, i: int, k: int, j: int) -> PresemifieldSpec:
    return PresemifieldSpec(ctx, "twisted", i=i, k=k, j=j)


def gtf64() -> PresemifieldSpec:
    """x o y = xy + j x^4 y^16 over GF(2)[j]/(j^6 + j + 1)."""
    ctx = make_context(6, 0x43)
    return twisted_spec(ctx, 2, 4, ctx.generator)


def table_spec(ctx: FieldContext, rows: Sequence[LinearizedPoly]) -> PresemifieldSpec:
    return PresemifieldSpec(ctx, "table", rows=tuple(rows))


def multiply(spec: PresemifieldSpec, x: int, y: int) -> int:
    ctx = spec.ctx
    if spec.kind == "field":
        return ctx.mul(x, y)
    if spec.kind == "twisted":
        t = ctx.mul(spec.j, ctx.mul(ctx.frobenius(x, spec.i), ctx.frobenius(y, spec.k)))
        return ctx.mul(x, y) ^ t
    return spec.rows[y](x)


def right_mult(spec: PresemifieldSpec, y: int) -> LinearizedPoly:
    """R_y : x -> x o y as a linearized polynomial."""
    ctx = spec.ctx
    if spec.kind == "table":
        return spec.rows[y]
    co = [0] * ctx.n
    co[0] = y
    if spec.kind == "twisted":
        co[spec.i] ^= ctx.mul(spec.j, ctx.frobenius(y, spec.k))
    return LinearizedPoly(ctx, tuple(co))


# Spread sets


@dataclass
class SpreadSet:
    """The maps R_y indexed by y (index 0 is the zero map for semifields)."""

    ctx: FieldContext
    maps: list[LinearizedPoly]
    additive: bool

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {m.coeffs: y for y, m in enumerate(self.maps)}

    @cached_property
    def matrices(self) -> np.ndarray:
        """(2^n, n) array of GF(2) row bitmasks, one matrix per y."""
        return np.array([m.to_binary().rows for m in self.maps], dtype=np.uint32)

    @cached_property
    def value_table(self) -> np.ndarray:
        """values[y, x] = R_y(x)."""
        return np.array([m.values() for m in self.maps], dtype=np.int64)


def _is_additive(ctx: FieldContext, maps: Sequence[LinearizedPoly]) -> bool:
    # R_{y+y'} = R_y + R_{y'} reduces to additivity on the basis y = x^k.
    if any(maps[0].coeffs):
        return False
    for y in range(1, ctx.order):
        low = y & -y
        if y != low and (maps[y ^ low] + maps[low]).coeffs != maps[y].coeffs:
            return False
    return True


def spread_set(spec: PresemifieldSpec) -> SpreadSet:
    ctx = spec.ctx
    maps = [right_mult(spec, y) for y in range(ctx.order)]
    return SpreadSet(ctx, maps, _is_additive(ctx, maps))


@dataclass
class SpreadSetReport:
    ok: bool
    additive: bool
    pairs_checked: int
    offending_pair: tuple[int, int] | None = None
    offending_rank: int | None = None

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "additive": self.additive,
            "pairs_checked": self.pairs_checked,
            "offending_pair": None if self.offending_pair is None else [f"{v:#04x}" for v in self.offending_pair],
            "offending_rank": self.offending_rank,
        }


def verify_spread_set(c: SpreadSet) -> SpreadSetReport:
    """Every difference of two distinct maps must have rank n.

    For additive sets R_y - R_y' = R_{y+y'}, so the nonzero maps suffice.
    """
    n = c.ctx.n
    mats = [binmat.BinaryMatrix(n, tuple(int(v) for v in row)) for row in c.matrices]
    if c.additive:
        for y in range(1, len(mats)):
            r = binmat.rank(mats[y])
            if r != n:
                return SpreadSetReport(False, True, y, (0, y), r)
        return SpreadSetReport(True, True, len(mats) - 1)
    checked = 0
    for y in range(len(mats)):
        for y2 in range(y + 1, len(mats)):
            checked += 1
            r = binmat.rank(mats[y] - mats[y2])
            if r != n:
                return SpreadSetReport(False, False, checked, (y, y2), r)
    return SpreadSetReport(True, False, checked)


def inverse_spread_set(c: SpreadSet) -> SpreadSet:
    """{R_y^-1 : y != 0} plus the zero map at index 0, kept indexed by y."""
    maps = [LinearizedPoly.zero(c.ctx)]
    maps += [invert(m) for m in c.maps[1:]]
    return SpreadSet(c.ctx, maps, _is_additive(c.ctx, maps))


# Symmetries x -> alpha R_y(beta x)


@dataclass(frozen=True)
class SymmetryPair:
    alpha: int
    beta: int
    gamma: int


@dataclass
class Rejection:
    alpha: int
    beta: int
    y: int
    reason: str
    position: int | None = None


def verify_symmetry_pair(spec: PresemifieldSpec, alpha: int, beta: int, c: SpreadSet | None = None):
    """Check directly that alpha R_y(beta x) = R_{gamma y}(x) for every y.

    Returns a SymmetryPair or a Rejection naming the first failing y.
    """
    if alpha == 0 or beta == 0:
        raise ValueError("alpha and beta must be nonzero")
    ctx = spec.ctx
    c = c or spread_set(spec)
    gamma = None
    for y in ctx.nonzero():
        h = c.maps[y].scale_input_output(alpha, beta)
        y2 = c.index.get(h.coeffs)
        if y2 is None:
            target = c.maps[ctx.mul(ctx.mul(alpha, beta), y)].coeffs
            pos = next((m for m in range(ctx.n) if h.coeffs[m] != target[m]), None)
            return Rejection(alpha, beta, y, "image is not in the spread set", pos)
        if gamma is None:
            gamma = ctx.div(y2, y)
        if y2 != ctx.mul(gamma, y):
            return Rejection(alpha, beta, y, "image index is not a fixed multiple of y")
    return SymmetryPair(alpha, beta, gamma)


@dataclass
class SymmetryGroup:
    ctx: FieldContext
    pairs: list[SymmetryPair]

    @cached_property
    def gamma_set(self) -> list[int]:
        return sorted({p.gamma for p in self.pairs})

    def gamma_order(self) -> int:
        return len(self.gamma_set)

    def gamma_is_subgroup(self) -> bool:
        s = set(self.gamma_set)
        return 1 in s and all(self.ctx.mul(a, b) in s for a in s for b in s)

    def is_closed(self) -> bool:
        """Pairs are closed under componentwise multiplication."""
        ctx = self.ctx
        s = {(p.alpha, p.beta) for p in self.pairs}
        return all((ctx.mul(a, c), ctx.mul(b, d)) in s for a, b in s for c, d in s)


def symmetry_group(spec: PresemifieldSpec, c: SpreadSet | None = None) -> SymmetryGroup:
    """Scan all (2^n - 1)^2 pairs and keep the verified ones."""
    ctx = spec.ctx
    c = c or spread_set(spec)
    pairs = []
    for a in ctx.nonzero():
        for b in ctx.nonzero():
            r = verify_symmetry_pair(spec, a, b, c)
            if isinstance(r, SymmetryPair):
                pairs.append(r)
    pairs.sort(key=lambda p: (ctx.log_table[p.alpha], ctx.log_table[p.beta]))
    return SymmetryGroup(ctx, pairs)


def slot_multiplier(ctx: FieldContext, p: SymmetryPair, m: int, side: str) -> int:
    """Scalar by which coefficient m is multiplied under the pair's action.

    shears (graph U_f -> U_h, h(x) = alpha f(beta x)): alpha beta^(2^m).
    nonshears (cograph W_g -> W_k, k(x) = beta^-1 g(alpha^-1 x)): beta^-1 alpha^-(2^m).
    """
    if side == "shears":
        return ctx.mul(p.alpha, ctx.frobenius(p.beta, m))
    if side == "nonshears":
        return ctx.inv(ctx.mul(p.beta, ctx.frobenius(p.alpha, m)))
    raise ValueError(f"unknown side {side!r}")


def act_on(f: LinearizedPoly, p: SymmetryPair, side: str) -> LinearizedPoly:
    ctx = f.ctx
    return LinearizedPoly(
        ctx, tuple(ctx.mul(slot_multiplier(ctx, p, m, side), v) for m, v in enumerate(f.coeffs))
    )


@dataclass(frozen=True)
class Branch:
    """Fixed value choices for the leading slots; later slots range over the field."""

    slots: tuple[tuple[int, ...], ...]

    def size(self, order: int, n: int) -> int:
        out = 1
        for s in self.slots:
            out *= len(s)
        return out * order ** (n - len(self.slots))


@dataclass
class Transversal:
    """A union of product branches covering one representative per orbit (at least)."""

    n: int
    order: int
    branches: list[Branch]
    source: str

    def size(self) -> int:
        return sum(b.size(self.order, self.n) for b in self.branches)

    def depth(self) -> int:
        return max((len(b.slots) for b in self.branches), default=0)

    def as_dict(self) -> dict:
        return {
            "source": self.source,
            "size": self.size(),
            "branches": [[[f"{v:#04x}" for v in s] for s in b.slots] for b in self.branches],
        }

    def contains(self, coeffs: Sequence[int]) -> bool:
        return any(all(coeffs[m] in set(s) for m, s in enumerate(b.slots)) for b in self.branches)


def full_transversal(ctx: FieldContext) -> Transversal:
    return Transversal(ctx.n, ctx.order, [Branch(())], "full")


def published_transversal(ctx: FieldContext) -> Transversal:
    """Leading coefficient in {0, 1, j, j^2}, next one in GF(8), as published for GF(64)."""
    if ctx.n != 6:
        raise ValueError("the published transversal is specific to GF(64)")
    j = ctx.generator
    slot0 = (0, 1, j, ctx.mul(j, j))
    slot1 = tuple(ctx.subfield(3))
    return Transversal(ctx.n, ctx.order, [Branch((slot0, slot1))], "as-published")


def coefficient_orbits(
    ctx: FieldContext, pairs: Sequence[SymmetryPair], side: str, depth: int = 2
) -> Transversal:
    """Stabilizer-chain transversal for the verified pairs' action on coefficients.

    Orbit representatives for slot 0 under the whole group; for each
    representative, representatives for slot 1 under its stabilizer; and so on
    down to ``depth`` slots.  Representatives are the orbit's smallest element.
    """
    if not pairs:
        raise ValueError("empty pair list")
    if depth == 0:
        return Transversal(ctx.n, ctx.order, [Branch(())], f"verified-{side}")
    # Precompute the multiplier of every pair on each slot.
    mult = [[slot_multiplier(ctx, p, m, side) for m in range(ctx.n)] for p in pairs]

    def expand(prefix: tuple[int, ...], group: list[int]) -> list[tuple[tuple[int, ...], ...]]:
        m = len(prefix)
        if m == depth:
            return [()]
        seen: set[int] = set()
        out = []
        for v in range(ctx.order):
            if v in seen:
                continue
            orbit = {ctx.mul(mult[g][m], v) for g in group}
            seen |= orbit
            stab = [g for g in group if ctx.mul(mult[g][m], v) == v]
            for tail in expand(prefix + (v,), stab):
                out.append(((v,),) + tail)
        return out

    raw = expand((), list(range(len(pairs))))
    # Merge leaves that differ only in the deepest slot into product branches.
    merged: dict[tuple, list[int]] = {}
    for leaf in raw:
        head, last = leaf[:-1], leaf[-1][0]
        merged.setdefault(head, []).append(last)
    branches = [Branch(head + (tuple(vals),)) for head, vals in merged.items()]
    return Transversal(ctx.n, ctx.order, branches, f"verified-{side}")
