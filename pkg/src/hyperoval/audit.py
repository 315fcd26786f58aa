"""Symmetry audit: verified (alpha, beta) pairs against the published GF(64) claims."""

from __future__ import annotations

from .semifield import (
    PresemifieldSpec,
    SymmetryGroup,
    Transversal,
    coefficient_orbits,
    published_transversal,
    slot_multiplier,
    spread_set,
    symmetry_group,
)


def leading_orbits(group: SymmetryGroup, side: str, depth: int = 2) -> list[frozenset]:
    """Orbits of the verified group on the first ``depth`` coefficient slots."""
    ctx = group.ctx
    mults = [[slot_multiplier(ctx, p, m, side) for m in range(depth)] for p in group.pairs]
    seen = set()
    orbits = []

    def tuples(d):
        if d == 0:
            yield ()
            return
        for head in tuples(d - 1):
            for v in range(ctx.order):
                yield head + (v,)

    for t in tuples(depth):
        if t in seen:
            continue
        orb = frozenset(tuple(ctx.mul(ms[m], t[m]) for m in range(depth)) for ms in mults)
        seen |= orb
        orbits.append(orb)
    return orbits


def uncovered(orbits: list[frozenset], tr: Transversal) -> int:
    """Orbits with no member inside the transversal (0 means the transversal is valid)."""
    return sum(1 for orb in orbits if not any(tr.contains(t) for t in orb))


def _is_gtf64(spec: PresemifieldSpec) -> bool:
    ctx = spec.ctx
    return spec.kind == "twisted" and ctx.n == 6 and (spec.i, spec.k) == (2, 4) and ctx.modulus == 0x43


def verdict(ok: bool) -> str:
    return "AGREE" if ok else "DISAGREE"


def symmetry_audit(spec: PresemifieldSpec, side: str = "shears", depth: int = 2) -> dict:
    ctx = spec.ctx
    c = spread_set(spec)
    group = symmetry_group(spec, c)
    depth = min(depth, max(ctx.n - 2, 0))
    safe = coefficient_orbits(ctx, group.pairs, side, depth)
    out = {
        "side": side,
        "verified_pairs": len(group.pairs),
        "pairs": [[f"{p.alpha:#04x}", f"{p.beta:#04x}", f"{p.gamma:#04x}"] for p in group.pairs],
        "gamma_set": [f"{g:#04x}" for g in group.gamma_set],
        "gamma_order": group.gamma_order(),
        "gamma_is_subgroup": group.gamma_is_subgroup(),
        "pairs_closed": group.is_closed(),
        "safe_transversal": safe.as_dict(),
    }
    fixed = []
    for p in group.pairs:
        # S_y -> S_{gamma y}: fixed nonzero indices exist only when gamma = 1
        nfix = 1 + (ctx.group_order if p.gamma == 1 else 0)
        fixed.append(nfix)
    out["fixed_index_counts"] = sorted(set(fixed))
    out["fixes_one_iff_all"] = all(k in (1, ctx.order) for k in fixed)

    if not _is_gtf64(spec):
        return out

    mul, pw = ctx.mul, ctx.pow
    verified = {(p.alpha, p.beta) for p in group.pairs}
    nz = ctx.nonzero()
    printed = {(a, b) for a in nz for b in nz if mul(a, pw(b, 4)) == mul(pw(a, 16), b)}
    expanded = {(a, b) for a in nz for b in nz if mul(a, pw(b, 4)) == pw(mul(a, b), 16)}
    claim21 = {x for x in nz if pw(x, 21) == 1}
    gam = set(group.gamma_set)
    identity_pairs = {(p.alpha, p.beta) for p in group.pairs if p.gamma == 1}
    claimed_identity = {(a, b) for a in nz for b in nz if pw(a, 9) == 1 and mul(a, b) == 1}
    published = published_transversal(ctx)
    orbits = leading_orbits(group, side, 2)
    miss = uncovered(orbits, published)
    out["published"] = {
        "printed_condition_pairs": len(printed),
        "printed_condition_verified": len(printed & verified),
        "printed_condition": verdict(printed == verified),
        "expanded_condition_pairs": len(expanded),
        "expanded_condition": verdict(expanded == verified),
        "gamma_claim_order": len(claim21),
        "gamma_claim": verdict(gam == claim21),
        "gamma_relation": "equal" if gam == claim21 else ("larger" if gam > claim21 else "smaller or different"),
        "identity_pairs_verified": len(identity_pairs),
        "identity_pairs_claimed": len(claimed_identity),
        "identity_claim": verdict(identity_pairs == claimed_identity),
        "slot0_claim": verdict(uncovered(leading_orbits(group, side, 1), _slot0(published)) == 0),
        "leading_orbits": len(orbits),
        "leading_orbits_missed_by_published": miss,
        "published_transversal": verdict(miss == 0),
        "published_size": published.size(),
        "safe_size": safe.size(),
    }
    return out


def _slot0(tr: Transversal) -> Transversal:
    from .semifield import Branch

    return Transversal(tr.n, tr.order, [Branch(b.slots[:1]) for b in tr.branches], tr.source)
