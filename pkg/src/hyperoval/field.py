"""Arithmetic in GF(2^n), 2 <= n <= 12, over a polynomial basis.

Elements are plain Python ints: bit i is the coefficient of x^i.  Products go
through log/exp tables built once per context.
"""

from __future__ import annotations

import math
import re
from functools import cached_property

import numpy as np

MIN_DEGREE = 2
MAX_DEGREE = 12

# One primitive polynomial per degree.  n=6 must stay x^6+x+1 so that powers of
# the generator j line up with the published GF(64) constants.
DEFAULT_MODULI = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
}


class FieldError(ValueError):
    pass


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit-vectors."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
    return r


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def is_irreducible(m: int) -> bool:
    """Trial division by every polynomial of degree 1..deg(m)//2."""
    d = m.bit_length() - 1
    if d < 1:
        return False
    for p in range(2, 1 << (d // 2 + 1)):
        if poly_mod(m, p) == 0:
            return False
    return True


class FieldContext:
    """GF(2^n) defined by ``modulus``; immutable once built.

    ``exp_table[k]`` is ``g**k`` for a fixed primitive element ``g`` (the
    class of x whenever the modulus is primitive) and ``log_table`` inverts it.
    """

    def __init__(self, n: int, modulus: int | None = None):
        if not MIN_DEGREE <= n <= MAX_DEGREE:
            raise FieldError(f"degree {n} outside [{MIN_DEGREE}, {MAX_DEGREE}]")
        if modulus is None:
            modulus = DEFAULT_MODULI[n]
        if modulus.bit_length() - 1 != n:
            raise FieldError(f"modulus {modulus:#x} does not have degree {n}")
        if not is_irreducible(modulus):
            raise FieldError(f"modulus {modulus:#x} is reducible over GF(2)")
        self.n = n
        self.modulus = modulus
        self.order = 1 << n
        self.mask = self.order - 1
        self.group_order = self.order - 1
        self.generator = self._find_generator()

        exp = [0] * (2 * self.group_order)
        log = [-1] * self.order
        x = 1
        for k in range(self.group_order):
            exp[k] = x
            log[x] = k
            x = poly_mod(clmul(x, self.generator), modulus)
        exp[self.group_order:] = exp[: self.group_order]
        # doubled exp table lets mul skip the modulo
        self._exp = exp
        self._log = log
        self.exp_table = tuple(exp[: self.group_order])
        self.log_table = tuple(log)

        self._frob = []
        for e in range(n):
            row = [0] * self.order
            for a in range(1, self.order):
                row[a] = exp[(log[a] << e) % self.group_order]
            self._frob.append(tuple(row))

    def _find_generator(self) -> int:
        q1 = self.group_order
        primes = [p for p in range(2, q1 + 1) if q1 % p == 0 and all(p % d for d in range(2, math.isqrt(p) + 1))]
        for g in range(2, self.order):
            if all(self._slow_pow(g, q1 // p) != 1 for p in primes):
                return g
        raise FieldError("no primitive element found")

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = poly_mod(clmul(r, a), self.modulus)
            a = poly_mod(clmul(a, a), self.modulus)
            e >>= 1
        return r

    def __repr__(self) -> str:
        return f"FieldContext(n={self.n}, modulus={self.modulus:#x})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldContext) and (self.n, self.modulus) == (other.n, other.modulus)

    def __hash__(self) -> int:
        return hash((self.n, self.modulus))

    # arithmetic

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(2^n)")
        return self._exp[(self.group_order - self._log[a]) % self.group_order]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % self.group_order]

    def gpow(self, k: int) -> int:
        """The element g^k."""
        return self._exp[k % self.group_order]

    def frobenius(self, a: int, e: int) -> int:
        """a^(2^e), read from a precomputed permutation table."""
        return self._frob[e % self.n][a]

    def relative_norm(self, a: int, d: int) -> int:
        """Norm from GF(2^n) down to its subfield of order 2^d."""
        if d <= 0 or self.n % d:
            raise FieldError(f"{d} does not divide {self.n}")
        return self.pow(a, self.group_order // ((1 << d) - 1))

    def subfield(self, d: int) -> list[int]:
        """Elements of the subfield of order 2^d, sorted."""
        if d <= 0 or self.n % d:
            raise FieldError(f"{d} does not divide {self.n}")
        return sorted(a for a in range(self.order) if self.frobenius(a, d) == a)

    def elements(self) -> range:
        return range(self.order)

    def nonzero(self) -> list[int]:
        """Nonzero elements in exp-table order g^0, g^1, ..."""
        return list(self.exp_table)

    # formatting

    def fmt(self, a: int) -> str:
        return f"{a:#04x}"

    def fmt_power(self, a: int) -> str:
        return "0" if a == 0 else f"g^{self._log[a]}"

    def parse(self, text: str) -> int:
        """Accept hex/decimal integers, ``g^k``, ``0`` or ``1``."""
        s = text.strip().lower()
        m = re.fullmatch(r"(?:g|j)\^(-?\d+)", s)
        if m:
            return self.gpow(int(m.group(1)))
        if s in ("g", "j"):
            return self.generator
        v = int(s, 0)
        if not 0 <= v < self.order:
            raise FieldError(f"{text!r} is not an element of GF(2^{self.n})")
        return v

    @cached_property
    def frobenius_array(self) -> np.ndarray:
        return np.array(self._frob, dtype=np.int64)

    @cached_property
    def mul_table(self) -> np.ndarray:
        """Full 2^n x 2^n product table (at most 16M entries at n=12)."""
        q = self.order
        log = np.array(self._log, dtype=np.int64)
        exp = np.array(self._exp, dtype=np.int64)
        la = log[1:, None] + log[None, 1:]
        t = np.zeros((q, q), dtype=np.int64)
        t[1:, 1:] = exp[la]
        return t


_CACHE: dict[tuple[int, int], FieldContext] = {}


def make_context(n: int, modulus: int | None = None) -> FieldContext:
    """Build (or fetch a cached) context for GF(2^n)."""
    if not MIN_DEGREE <= n <= MAX_DEGREE:
        raise FieldError(f"degree {n} outside [{MIN_DEGREE}, {MAX_DEGREE}]")
    key = (n, DEFAULT_MODULI[n] if modulus is None else modulus)
    ctx = _CACHE.get(key)
    if ctx is None:
        ctx = FieldContext(n, key[1])
        _CACHE[key] = ctx
    return ctx


def gf64() -> FieldContext:
    """GF(64) = GF(2)[j]/(j^6 + j + 1)."""
    return make_context(6, 0x43)
