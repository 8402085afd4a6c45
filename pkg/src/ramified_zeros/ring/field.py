"""
Totally ramified extensions of the 2-adic numbers, presented by an
Eisenstein polynomial. A FieldDescriptor is only data: the arithmetic
lives in element.py.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any

from src.ramified_zeros.common.constants import (
    PRECISION_GUARD,
    PRECISION_OFFSET,
    PRECISION_SLOPE,
)
from src.ramified_zeros.common.errors import ErrorCode, RamifiedZeroError


@dataclass(frozen=True)
class FieldDescriptor:
    """
    The extension K = Q_2(pi) where pi^e + c_{e-1} pi^{e-1} + ... + c_0 = 0.

    Elements are truncated at pi^n_pi. Coefficient residues live modulo
    2^m_coeff, with m_coeff = ceil(n_pi / e) + PRECISION_GUARD.

    Args:
      e (int): ramification degree
      eisenstein (tuple[int, ...]): c_0 .. c_{e-1}
      n_pi (int): working precision in pi-digits
      m_coeff (int): coefficient precision in powers of 2
    """

    e: int
    eisenstein: tuple[int, ...]
    n_pi: int
    m_coeff: int

    @property
    def modulus(self) -> int:
        """
        The power of two every coefficient residue is reduced by.
        """
        return 1 << self.m_coeff

    @cached_property
    def digit_moduli(self) -> tuple[int, ...]:
        """
        pi^n_pi O is spanned by 2^k_j pi^j with k_j = ceil((n_pi - j) / e),
        so reducing position j modulo 2^k_j is exact reduction mod pi^n_pi.
        """
        return tuple(
            1 << max(0, -(-(self.n_pi - j) // self.e)) for j in range(self.e)
        )

    @cached_property
    def u_inv2e(self):
        """
        The unit u with 2 = u * pi^e.
        """
        # pylint: disable=import-outside-toplevel
        from src.ramified_zeros.ring.element import RingHelper

        return RingHelper.two_over_pi_e(self)

    @property
    def label(self) -> str:
        """
        Short human readable name, e.g. ``x^2 - 2``.
        """
        terms = [f"x^{self.e}" if self.e > 1 else "x"]
        for power in range(self.e - 1, -1, -1):
            coeff = self.eisenstein[power]
            if coeff == 0:
                continue
            sign = "-" if coeff < 0 else "+"
            body = str(abs(coeff))
            if power == 1:
                body = "x" if abs(coeff) == 1 else f"{body}x"
            elif power > 1:
                body = f"x^{power}" if abs(coeff) == 1 else f"{body}x^{power}"
            terms.append(f"{sign} {body}")
        return " ".join(terms)

    def to_dict(self) -> dict[str, Any]:
        """
        The field literal used in form files.
        """
        return {"e": self.e, "eisenstein": list(self.eisenstein), "precision": self.n_pi}

    def with_precision(self, n_pi: int) -> "FieldDescriptor":
        """
        The same extension at another working precision.
        """
        return make_field(self.e, list(self.eisenstein), n_pi)

    def __repr__(self) -> str:
        return f"FieldDescriptor({self.label}, e={self.e}, n_pi={self.n_pi})"

    def __str__(self) -> str:
        return self.__repr__()


def default_precision(e: int) -> int:
    """
    Default working precision: Hensel lifting and contraction chains need
    valuations up to about 4e, doubled for slack.
    """
    return PRECISION_SLOPE * e + PRECISION_OFFSET


def make_field(e: int, eisenstein: list[int], n_pi: int = None) -> FieldDescriptor:
    """
    Validate an Eisenstein polynomial and build its descriptor.

    Args:
      e (int): ramification degree, at least 1.
      eisenstein (list[int]): c_0 .. c_{e-1}; negative values are fine.
      n_pi (int): working precision in pi-digits. Defaults to 8e + 16.

    Raises:
      RamifiedZeroError: NOT_EISENSTEIN, PRECISION_TOO_SMALL or INVALID_INPUT.
    """
    if not isinstance(e, int) or e < 1:
        raise RamifiedZeroError(ErrorCode.INVALID_INPUT, f"e must be >= 1, got {e}")

    if len(eisenstein) != e:
        raise RamifiedZeroError(
            ErrorCode.INVALID_INPUT,
            f"expected {e} Eisenstein coefficients, got {len(eisenstein)}",
        )

    coeffs = tuple(int(c) for c in eisenstein)
    odd = [c for c in coeffs if c % 2 != 0]
    if odd:
        raise RamifiedZeroError(
            ErrorCode.NOT_EISENSTEIN, f"coefficient {odd[0]} is odd"
        )

    if coeffs[0] % 4 == 0:
        raise RamifiedZeroError(
            ErrorCode.NOT_EISENSTEIN,
            f"constant term {coeffs[0]} is divisible by 4",
        )

    if n_pi is None:
        n_pi = default_precision(e)

    if n_pi < 2 * e + 2:
        raise RamifiedZeroError(
            ErrorCode.PRECISION_TOO_SMALL,
            f"precision {n_pi} is below 2e + 2 = {2 * e + 2}",
        )

    m_coeff = math.ceil(n_pi / e) + PRECISION_GUARD
    return FieldDescriptor(e=e, eisenstein=coeffs, n_pi=n_pi, m_coeff=m_coeff)
