"""Linearized polynomials f(x) = sum f_i x^(2^i) over GF(2^n) and their Dickson matrices."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from . import binmat
from .binmat import BinaryMatrix
from .field import FieldContext


class SingularMapError(ValueError):
    pass


@dataclass(frozen=True)
class LinearizedPoly:
    ctx: FieldContext = field(compare=False, repr=False)
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.ctx.n:
            raise ValueError(f"need {self.ctx.n} coefficients, got {len(self.coeffs)}")

    @classmethod
    def zero(cls, ctx: FieldContext) -> LinearizedPoly:
        return cls(ctx, (0,) * ctx.n)

    @classmethod
    def identity(cls, ctx: FieldContext) -> LinearizedPoly:
        return cls(ctx, (1,) + (0,) * (ctx.n - 1))

    @classmethod
    def monomial(cls, ctx: FieldContext, i: int, c: int = 1) -> LinearizedPoly:
        co = [0] * ctx.n
        co[i] = c
        return cls(ctx, tuple(co))

    @classmethod
    def random(cls, ctx: FieldContext, rng: random.Random) -> LinearizedPoly:
        return cls(ctx, tuple(rng.randrange(ctx.order) for _ in range(ctx.n)))

    @classmethod
    def parse(cls, ctx: FieldContext, text: str) -> LinearizedPoly:
        """Comma-separated coefficients, lowest index first."""
        parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
        return cls(ctx, tuple(ctx.parse(p) for p in parts))

    def __str__(self) -> str:
        return ",".join(f"{c:#04x}" for c in self.coeffs)

    def hex(self) -> list[str]:
        return [f"{c:#04x}" for c in self.coeffs]

    def __add__(self, other: LinearizedPoly) -> LinearizedPoly:
        return LinearizedPoly(self.ctx, tuple(a ^ b for a, b in zip(self.coeffs, other.coeffs)))

    __sub__ = __add__

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __call__(self, x: int) -> int:
        return evaluate(self, x)

    def scale_input_output(self, alpha: int, beta: int) -> LinearizedPoly:
        """Coefficients of x -> alpha * f(beta * x)."""
        ctx = self.ctx
        return LinearizedPoly(
            ctx,
            tuple(ctx.mul(alpha, ctx.mul(ctx.frobenius(beta, m), c)) for m, c in enumerate(self.coeffs)),
        )

    def values(self) -> list[int]:
        """f evaluated at every field element (index = element)."""
        ctx = self.ctx
        basis_img = [evaluate(self, 1 << c) for c in range(ctx.n)]
        vals = [0] * ctx.order
        for x in range(1, ctx.order):
            low = x & -x
            vals[x] = vals[x ^ low] ^ basis_img[low.bit_length() - 1]
        return vals

    def to_binary(self) -> BinaryMatrix:
        return binmat.from_map(self.__call__, self.ctx)

    def binary_rank(self) -> int:
        return binmat.rank(self.to_binary())


def evaluate(f: LinearizedPoly, x: int) -> int:
    ctx = f.ctx
    out = 0
    for i, c in enumerate(f.coeffs):
        if c:
            out ^= ctx.mul(c, ctx.frobenius(x, i))
    return out


def from_values(ctx: FieldContext, image_of_basis: Sequence[int]) -> LinearizedPoly:
    """Interpolate the unique linearized polynomial with f(x^k) = image_of_basis[k].

    Solves the Moore system sum_i c_i (x^k)^(2^i) = image[k] over GF(2^n).
    """
    n = ctx.n
    rows = [[ctx.frobenius(1 << k, i) for i in range(n)] + [image_of_basis[k]] for k in range(n)]
    sol = _solve(ctx, rows)
    return LinearizedPoly(ctx, tuple(sol))


# Dickson matrices


@dataclass(frozen=True)
class DicksonMatrix:
    ctx: FieldContext = field(compare=False, repr=False)
    entries: tuple[tuple[int, ...], ...]

    def __add__(self, other: DicksonMatrix) -> DicksonMatrix:
        return DicksonMatrix(
            self.ctx, tuple(tuple(a ^ b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        )

    __sub__ = __add__


def dickson(f: LinearizedPoly) -> DicksonMatrix:
    """Entry (r, c) is f_{(c - r) mod n} raised to 2^r."""
    ctx, n = f.ctx, f.ctx.n
    return DicksonMatrix(
        ctx,
        tuple(tuple(ctx.frobenius(f.coeffs[(c - r) % n], r) for c in range(n)) for r in range(n)),
    )


def _row_reduce(ctx: FieldContext, rows: list[list[int]], ncols: int) -> tuple[int, int]:
    """In-place Gaussian elimination over GF(2^n); returns (rank, product of pivots).

    The pivot product equals the determinant for square input because row swaps
    carry no sign in characteristic 2.
    """
    r = 0
    det = 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            det = 0
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        det = ctx.mul(det, pv)
        inv = ctx.inv(pv)
        prow = [ctx.mul(inv, v) for v in rows[r]]
        rows[r] = prow
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                k = rows[i][c]
                rows[i] = [a ^ ctx.mul(k, b) for a, b in zip(rows[i], prow)]
        r += 1
        if r == len(rows):
            break
    return r, det


def _solve(ctx: FieldContext, aug: list[list[int]]) -> list[int]:
    n = len(aug)
    rows = [list(r) for r in aug]
    rk, _ = _row_reduce(ctx, rows, n)
    if rk < n:
        raise SingularMapError("singular system")
    return [rows[i][n] for i in range(n)]


def matrix_rank(d: DicksonMatrix) -> int:
    rows = [list(r) for r in d.entries]
    return _row_reduce(d.ctx, rows, len(rows))[0]


def determinant(d: DicksonMatrix) -> int:
    rows = [list(r) for r in d.entries]
    rk, det = _row_reduce(d.ctx, rows, len(rows))
    return det if rk == len(rows) else 0


def rank_via_dickson(f: LinearizedPoly) -> int:
    return matrix_rank(dickson(f))


def invert(f: LinearizedPoly) -> LinearizedPoly:
    """Compositional inverse, through the GF(2) matrix of f."""
    ctx, n = f.ctx, f.ctx.n
    m = f.to_binary()
    # Invert M by elimination on [M | I].
    rows = [(m.rows[r], 1 << r) for r in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][0] >> c & 1), None)
        if piv is None:
            raise SingularMapError(f"map {f} is not invertible")
        rows[c], rows[piv] = rows[piv], rows[c]
        pa, pb = rows[c]
        rows = [
            (a ^ pa, b ^ pb) if i != c and a >> c & 1 else (a, b) for i, (a, b) in enumerate(rows)
        ]
    # rows[c][1] is now row c of M^-1; the image of x^k is column k.
    inv_rows = [rows[c][1] for c in range(n)]
    images = [sum(((inv_rows[r] >> k) & 1) << r for r in range(n)) for k in range(n)]
    return from_values(ctx, images)


def det_profile(f: LinearizedPoly, code, inverse_side: bool = False) -> dict[int, int]:
    """y -> det(D_{R_y} - D_f), or det(D_{R_y^-1} - D_f) with the zero map at y = 0.

    ``code`` is anything with a ``maps`` sequence indexed by y (a SpreadSet).
    """
    ctx = f.ctx
    df = dickson(f)
    out = {}
    for y, ry in enumerate(code.maps):
        if inverse_side:
            ry = LinearizedPoly.zero(ctx) if y == 0 else invert(ry)
        out[y] = determinant(dickson(ry) - df)
    return out


def classify_shears_profile(profile: dict[int, int]) -> dict:
    """Value form of d_f(y) = y^(2^n - 1) + 1: nonzero at 0 and zero elsewhere.

    ``strict`` additionally asks for d_f(0) == 1 exactly.
    """
    zero_elsewhere = all(v == 0 for y, v in profile.items() if y)
    d0 = profile[0]
    return {"matches": zero_elsewhere and d0 != 0, "strict": zero_elsewhere and d0 == 1, "d0": d0}


def classify_nonshears_profile(profile: dict[int, int]) -> dict:
    """Value form of (y^(2^n) + y)/(y + a): zero everywhere except one a != 0."""
    support = [y for y, v in profile.items() if v]
    ok = len(support) == 1 and support[0] != 0
    a = support[0] if ok else None
    return {"matches": ok, "strict": ok and profile[a] == 1, "a": a}
