"""
Schoolbook arithmetic in Z[x] / (f(x), 2^M) for an Eisenstein polynomial f.
Only element literals (lists of integers) go in and out, so nothing here
depends on the ring module.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class NaiveRing:
    """
    O_K modulo pi^n, with elements stored as integer coefficient lists.

    Args:
      e (int): degree of f
      eisenstein (tuple[int, ...]): c_0 .. c_{e-1} of f = x^e + ... + c_0
      n (int): precision in pi-digits
    """

    e: int
    eisenstein: tuple
    n: int

    @property
    def bits(self) -> int:
        """Coefficients are kept modulo 2^bits, a few bits above n / e."""
        return -(-self.n // self.e) + 3

    @property
    def digit_bits(self) -> list[int]:
        """
        Position j carries ceil((n - j) / e) bits in a reduced residue.
        """
        return [max(0, -(-(self.n - j) // self.e)) for j in range(self.e)]

    def _wrap(self, coeffs) -> list[int]:
        mod = 1 << self.bits
        return [int(c) % mod for c in coeffs]

    def element(self, literal: Sequence[int]) -> list[int]:
        """Read an element literal."""
        padded = list(literal) + [0] * (self.e - len(literal))
        return self._wrap(padded[: self.e])

    def add(self, a: list[int], b: list[int]) -> list[int]:
        return self._wrap(x + y for x, y in zip(a, b))

    def sub(self, a: list[int], b: list[int]) -> list[int]:
        return self._wrap(x - y for x, y in zip(a, b))

    def mul(self, a: list[int], b: list[int]) -> list[int]:
        """
        Full product by convolution, then long division by the monic f.
        """
        product = list(np.convolve(np.array(a, dtype=object), np.array(b, dtype=object)))
        product = [int(c) for c in product]
        for top in range(len(product) - 1, self.e - 1, -1):
            lead = product[top]
            if lead == 0:
                continue
            product[top] = 0
            for j, c in enumerate(self.eisenstein):
                product[top - self.e + j] -= lead * c
        return self._wrap(product[: self.e] + [0] * max(0, self.e - len(product)))

    def power(self, a: list[int], exponent: int) -> list[int]:
        result = self.element([1])
        for _ in range(exponent):
            result = self.mul(result, a)
        return result

    def valuation(self, a: list[int]) -> Optional[int]:
        """
        pi-adic valuation, or None when a vanishes modulo pi^n.
        """
        best = None
        for j, c in enumerate(a):
            if c == 0:
                continue
            twos = len(bin(c)) - len(bin(c).rstrip("0"))
            candidate = twos * self.e + j
            best = candidate if best is None else min(best, candidate)
        if best is None or best >= self.n:
            return None
        return best

    def residue(self, a: list[int]) -> tuple[int, ...]:
        """
        The canonical representative modulo pi^n, componentwise mod 2^k_j.
        """
        return tuple(c % (1 << k) for c, k in zip(a, self.digit_bits))

    def is_unit(self, a: list[int]) -> bool:
        return a[0] % 2 == 1


def naive_evaluate(
    ring: NaiveRing, coefficients: Sequence[Sequence[int]], assignment: Sequence[Sequence[int]], d: int
) -> Optional[int]:
    """
    v(sum a_i b_i^d) computed with the naive ring, None for zero at precision.
    """
    total = ring.element([0])
    for coeff, value in zip(coefficients, assignment):
        term = ring.mul(ring.element(coeff), ring.power(ring.element(value), d))
        total = ring.add(total, term)
    return ring.valuation(total)
