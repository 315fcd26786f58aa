"""Spreads in V(2n, 2), scattered subspaces, and hyperoval certification in pi(D).

A vector (x, z) of V(2, 2^n) = V(2n, 2) is packed as ``x | z << n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from . import binmat
from .field import FieldContext
from .linpoly import LinearizedPoly
from .semifield import SpreadSet

INF = -1  # label of the shears element S_inf


def label(e: int) -> str:
    return "inf" if e == INF else f"{e:#04x}"


def parse_label(text: str) -> int:
    t = text.strip().lower()
    return INF if t in ("inf", "oo", "infinity") else int(t, 0)


def pack(ctx: FieldContext, x: int, z: int) -> int:
    return x | (z << ctx.n)


def unpack(ctx: FieldContext, v: int) -> tuple[int, int]:
    return v & ctx.mask, v >> ctx.n


def _echelon(vectors: Iterable[int]) -> tuple[int, ...]:
    """Reduced row echelon basis, sorted by leading bit (highest first)."""
    piv: dict[int, int] = {}
    for v in vectors:
        for h in sorted(piv, reverse=True):
            if v >> h & 1:
                v ^= piv[h]
        if v:
            h = v.bit_length() - 1
            for k in piv:
                if piv[k] >> h & 1:
                    piv[k] ^= v
            piv[h] = v
    return tuple(piv[h] for h in sorted(piv, reverse=True))


@dataclass(frozen=True)
class Subspace:
    ctx: FieldContext = field(compare=False, repr=False)
    basis: tuple[int, ...]

    @classmethod
    def span(cls, ctx: FieldContext, vectors: Iterable[int]) -> Subspace:
        return cls(ctx, _echelon(vectors))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def points(self) -> list[int]:
        pts = [0]
        for b in self.basis:
            pts += [p ^ b for p in pts]
        return sorted(pts)

    def contains(self, v: int) -> bool:
        for b in self.basis:
            if v >> (b.bit_length() - 1) & 1:
                v ^= b
        return v == 0


class Spread:
    """D(C) = {S_inf} u {S_y : y}, for a spread set C indexed by y."""

    def __init__(self, c: SpreadSet):
        self.ctx = c.ctx
        self.code = c
        self.elements = [INF] + list(range(c.ctx.order))

    @cached_property
    def values(self) -> np.ndarray:
        return self.code.value_table

    def element(self, e: int) -> Subspace:
        ctx = self.ctx
        if e == INF:
            return Subspace.span(ctx, (pack(ctx, 0, 1 << k) for k in range(ctx.n)))
        return subspace_from_graph(self.code.maps[e], "graph")

    def coset_keys(self, e: int, xs: np.ndarray, zs: np.ndarray) -> np.ndarray:
        """Label of the coset of S_e containing each point (x, z)."""
        if e == INF:
            return xs
        return zs ^ self.values[e][xs]

    def partition_counts(self) -> dict:
        """Count, for every nonzero vector, the spread elements containing it.

        (0, z) lies only in S_inf; (x, z) with x != 0 lies in S_y iff R_y(x) = z.
        """
        q = self.ctx.order
        xs = np.arange(1, q)
        hits = np.zeros((q, q), dtype=np.int64)
        for y in range(q):
            np.add.at(hits, (xs, self.values[y][1:]), 1)
        covered = (q - 1) + int(hits[1:].sum())
        return {
            "elements": len(self.elements),
            "covered": covered,
            "expected": q * q - 1,
            "exact": bool((hits[1:] == 1).all()) and covered == q * q - 1,
        }


def subspace_from_graph(f: LinearizedPoly, side: str = "graph") -> Subspace:
    """U_f = {(x, f(x))} for ``graph``, W_f = {(f(x), x)} for ``cograph``."""
    ctx = f.ctx
    gens = []
    for k in range(ctx.n):
        x = 1 << k
        fx = f(x)
        gens.append(pack(ctx, x, fx) if side == "graph" else pack(ctx, fx, x))
    return Subspace.span(ctx, gens)


def intersection_dim(u: Subspace, s: Subspace) -> int:
    """dim(U n S) = dim U + dim S - dim(U + S)."""
    joint = _echelon(u.basis + s.basis)
    return u.dim + s.dim - len(joint)


def fast_intersection_dim(f: LinearizedPoly, side: str, e: int, d: Spread, inverse: SpreadSet | None = None) -> int:
    """Intersection dimension from rank identities instead of subspace joins.

    graph U_f:   S_y -> n - rank(f - R_y),   S_inf -> 0.
    cograph W_f: S_y -> n - rank(f - R_y^-1) (y != 0),  S_0 -> 0,  S_inf -> n - rank(f).
    """
    n = f.ctx.n
    if side == "graph":
        if e == INF:
            return 0
        return n - binmat.rank((f - d.code.maps[e]).to_binary())
    if e == INF:
        return n - f.binary_rank()
    if e == 0:
        return 0
    if inverse is None:
        raise ValueError("cograph intersections need the inverse spread set")
    return n - binmat.rank((f - inverse.maps[e]).to_binary())


@dataclass
class ScatteredResult:
    scattered: bool
    witness: int | None = None
    witness_dim: int | None = None

    def __bool__(self) -> bool:
        return self.scattered


def intersection_profile(u: Subspace, d: Spread) -> dict[int, int]:
    return {e: intersection_dim(u, d.element(e)) for e in d.elements}


def is_scattered(u: Subspace, d: Spread, h: int = 1) -> ScatteredResult:
    """(D, h)-scattered: every spread element meets U in dimension <= h."""
    if h < 0:
        raise ValueError("h must be nonnegative")
    for e in d.elements:
        k = intersection_dim(u, d.element(e))
        if k > h:
            return ScatteredResult(False, e, k)
    return ScatteredResult(True)


class GeometryError(ValueError):
    pass


def trivial_intersectors(u: Subspace, d: Spread) -> list[int]:
    """The spread elements meeting an n-dim scattered U trivially (exactly two for q = 2)."""
    n = d.ctx.n
    if u.dim != n:
        raise GeometryError(f"subspace has dimension {u.dim}, expected {n}")
    prof = intersection_profile(u, d)
    bad = [e for e, k in prof.items() if k > 1]
    if bad:
        raise GeometryError(f"subspace is not scattered: meets {label(bad[0])} in dim {prof[bad[0]]}")
    return [e for e, k in prof.items() if k == 0]


@dataclass(frozen=True)
class HyperovalCandidate:
    affine: frozenset[int]
    infinite: tuple[int, ...]

    def size(self) -> int:
        return len(self.affine) + len(self.infinite)

    def as_dict(self, ctx: FieldContext) -> dict:
        return {
            "affine": [[f"{x:#04x}", f"{z:#04x}"] for x, z in sorted(unpack(ctx, p) for p in self.affine)],
            "infinite": [label(e) for e in self.infinite],
        }


def hyperoval_from_scattered(u: Subspace, d: Spread) -> HyperovalCandidate:
    triv = trivial_intersectors(u, d)
    return HyperovalCandidate(frozenset(u.points()), tuple(triv))


@dataclass
class Certificate:
    ok: bool
    arc_size: int
    hyperoval: bool
    lines_checked: int
    violation: dict | None = None

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> dict:
        return {
            "arc": self.ok,
            "hyperoval": self.hyperoval,
            "size": self.arc_size,
            "lines_checked": self.lines_checked,
            "violation": self.violation,
        }


def certify_hyperoval(hc: HyperovalCandidate, d: Spread) -> Certificate:
    """Meet every line of pi(D) with the candidate; at most two points per line.

    Affine lines are the cosets u + S, enumerated per spread element by the
    coset label of each affine point; the line u + S also carries the point at
    infinity S.  ``ok`` means arc; ``hyperoval`` additionally needs q + 2 points.
    """
    ctx = d.ctx
    q = ctx.order
    size = hc.size()
    lines = q * (q + 1) + 1
    bad_inf = [e for e in hc.infinite if e != INF and not 0 <= e < q]
    if bad_inf or len(set(hc.infinite)) != len(hc.infinite):
        raise GeometryError(f"invalid points at infinity {hc.infinite}")
    if len(hc.infinite) > 2:
        return Certificate(False, size, False, lines, {"line": "infinity", "points": len(hc.infinite)})
    pts = np.array(sorted(hc.affine), dtype=np.int64)
    xs, zs = pts & ctx.mask, pts >> ctx.n
    infinite = set(hc.infinite)
    for e in d.elements:
        keys = np.sort(d.coset_keys(e, xs, zs))
        limit = 1 if e in infinite else 2
        if len(keys) > limit:
            hit = np.nonzero(keys[limit:] == keys[:-limit])[0]
            if len(hit):
                key = int(keys[hit[0]])
                count = int(np.count_nonzero(keys == key)) + (e in infinite)
                return Certificate(
                    False, size, False, lines, {"line": label(e), "coset": f"{key:#04x}", "points": count}
                )
    return Certificate(True, size, size == q + 2, lines)


def certify_translation(hc: HyperovalCandidate, n: int) -> bool:
    """Affine part is an n-dim GF(2)-subspace and exactly two points lie at infinity."""
    if len(hc.infinite) != 2 or len(hc.affine) != 1 << n or 0 not in hc.affine:
        return False
    pts = hc.affine
    basis = _echelon(pts)
    if len(basis) != n:
        return False
    return all((a ^ b) in pts for a in basis for b in pts)


def certify_graph(f: LinearizedPoly, d: Spread, side: str = "graph") -> dict:
    """Full certification chain for the subspace U_f (or W_f): scattered, H_U, lines, translation."""
    u = subspace_from_graph(f, side)
    sc = is_scattered(u, d, 1)
    out = {"scattered": sc.scattered}
    if not sc:
        out["witness"] = label(sc.witness)
        out["certified"] = False
        return out
    hc = hyperoval_from_scattered(u, d)
    cert = certify_hyperoval(hc, d)
    out["infinite"] = [label(e) for e in hc.infinite]
    out.update(cert.as_dict())
    out["translation"] = certify_translation(hc, d.ctx.n) if cert.ok else False
    out["certified"] = bool(cert.hyperoval and out["translation"])
    return out
