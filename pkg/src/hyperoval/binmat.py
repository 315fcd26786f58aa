"""Bit-packed n x n matrices over GF(2), one int per row."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .field import FieldContext


@dataclass(frozen=True)
class BinaryMatrix:
    """Row ``i`` is the bitmask ``rows[i]``; bit ``c`` of row ``r`` is entry (r, c).

    Columns index the polynomial basis 1, x, x^2, ... of the source and rows the
    basis of the target, so ``M @ v`` gives the bits of the image of ``v``.
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        mask = (1 << self.n) - 1
        if any(r & ~mask for r in self.rows):
            raise ValueError("row has bits beyond column n-1")

    @classmethod
    def zero(cls, n: int) -> BinaryMatrix:
        return cls(n, (0,) * n)

    @classmethod
    def identity(cls, n: int) -> BinaryMatrix:
        return cls(n, tuple(1 << i for i in range(n)))

    def __add__(self, other: BinaryMatrix) -> BinaryMatrix:
        return BinaryMatrix(self.n, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    __sub__ = __add__

    def apply(self, v: int) -> int:
        out = 0
        for r, row in enumerate(self.rows):
            out |= (bin(row & v).count("1") & 1) << r
        return out

    def transpose(self) -> BinaryMatrix:
        cols = [0] * self.n
        for r, row in enumerate(self.rows):
            for c in range(self.n):
                if row >> c & 1:
                    cols[c] |= 1 << r
        return BinaryMatrix(self.n, tuple(cols))

    def __str__(self) -> str:
        return "\n".join(
            "".join("1" if row >> c & 1 else "0" for c in range(self.n)) for row in self.rows
        )


def from_map(evaluate: Callable[[int], int], ctx: FieldContext) -> BinaryMatrix:
    """Matrix of an additive map on GF(2^n); column i is the image of x^i."""
    n = ctx.n
    rows = [0] * n
    for c in range(n):
        img = evaluate(1 << c)
        for r in range(n):
            if img >> r & 1:
                rows[r] |= 1 << c
    return BinaryMatrix(n, tuple(rows))


def rank(m: BinaryMatrix) -> int:
    pivots: dict[int, int] = {}
    for v in m.rows:
        while v:
            h = v.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = v
                break
            v ^= p
    return len(pivots)


def rank_at_least(m: BinaryMatrix, t: int) -> bool:
    """True as soon as ``t`` independent rows are seen; False once that is impossible."""
    if t <= 0:
        return True
    pivots: dict[int, int] = {}
    dependent = 0
    for v in m.rows:
        while v:
            h = v.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = v
                break
            v ^= p
        if v == 0:
            dependent += 1
            if dependent > m.n - t:
                return False
        elif len(pivots) >= t:
            return True
    return len(pivots) >= t


def kernel_basis(m: BinaryMatrix) -> list[int]:
    """Basis (as bit-vectors) of {v : M v = 0}, from the reduced column echelon form."""
    n = m.n
    # Reduce the transpose augmented with the identity: combinations of columns
    # that vanish are exactly kernel vectors.
    cols = list(m.transpose().rows)
    aug = [(cols[i], 1 << i) for i in range(n)]
    basis = []
    pivots: dict[int, tuple[int, int]] = {}
    for col, tag in aug:
        while col:
            h = col.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = (col, tag)
                break
            col ^= p[0]
            tag ^= p[1]
        if col == 0:
            basis.append(tag)
    return basis
