"""Per-candidate shears / non-shears predicates on GF(2) matrices.

These are the scalar reference versions; the sweeps in ``kernels`` evaluate
the same conditions over whole prefixes.
"""

from __future__ import annotations

from .. import binmat
from ..linpoly import LinearizedPoly
from ..semifield import SpreadSet


def shears_predicate(f: LinearizedPoly, c: SpreadSet) -> bool:
    """rank(f - R_y) >= n - 1 for every y, zero map included."""
    if not c.additive:
        raise ValueError("the shears predicate needs an additive spread set")
    n = f.ctx.n
    for y in [0] + f.ctx.nonzero():
        if not binmat.rank_at_least((f - c.maps[y]).to_binary(), n - 1):
            return False
    return True


def nonshears_predicate(g: LinearizedPoly, cinv: SpreadSet) -> bool:
    """rank(g) = n - 1 and rank(g - R_y^-1) >= n - 1 for every y != 0."""
    n = g.ctx.n
    if g.binary_rank() != n - 1:
        return False
    return all(binmat.rank_at_least((g - cinv.maps[y]).to_binary(), n - 1) for y in g.ctx.nonzero())
