"""
Truncated arithmetic in the ring of integers O_K of a totally ramified
extension of Q_2. An element is a polynomial of degree < e in pi with
2-adic integer coefficients, kept canonical modulo pi^n_pi.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from src.ramified_zeros.common.custom_typing import (
    AT_LEAST_PRECISION,
    Valuation,
    is_finite,
)
from src.ramified_zeros.common.errors import ErrorCode, RamifiedZeroError
from src.ramified_zeros.ring.field import FieldDescriptor

Operand = Union["RingElement", int]


def _two_adic_valuation(value: int) -> int:
    return (value & -value).bit_length() - 1


def _canonical(field: FieldDescriptor, coeffs: list[int]) -> tuple[int, ...]:
    return tuple(c % mod for c, mod in zip(coeffs, field.digit_moduli))


@dataclass(frozen=True)
class RingElement:
    """
    An element sum_j coeffs[j] * pi^j of O_K, truncated at pi^n_pi.

    Construct through the class methods; the coefficients are always in
    canonical form so equality and hashing are syntactic.
    """

    coeffs: tuple[int, ...]
    field: FieldDescriptor

    @classmethod
    def from_coeffs(cls, field: FieldDescriptor, coeffs: list[int]) -> "RingElement":
        """
        Build an element from e integer coefficients (element literal).
        Negative and oversized values are reduced.
        """
        if len(coeffs) != field.e:
            raise RamifiedZeroError(
                ErrorCode.INVALID_INPUT,
                f"element literal needs {field.e} coefficients, got {len(coeffs)}",
            )
        return cls(_canonical(field, [int(c) for c in coeffs]), field)

    @classmethod
    def from_int(cls, field: FieldDescriptor, value: int) -> "RingElement":
        """
        The image of an ordinary integer.
        """
        return cls.from_coeffs(field, [value] + [0] * (field.e - 1))

    @classmethod
    def zero(cls, field: FieldDescriptor) -> "RingElement":
        """The additive identity."""
        return cls.from_int(field, 0)

    @classmethod
    def one(cls, field: FieldDescriptor) -> "RingElement":
        """The multiplicative identity."""
        return cls.from_int(field, 1)

    @classmethod
    def pi(cls, field: FieldDescriptor) -> "RingElement":
        """The uniformizer."""
        return cls.pi_power(field, 1)

    @classmethod
    def pi_power(cls, field: FieldDescriptor, k: int) -> "RingElement":
        """pi^k for k >= 0."""
        return _pi_power(field, k)

    @classmethod
    def from_digits(cls, field: FieldDescriptor, digits: list[int]) -> "RingElement":
        """
        Rebuild sum d_i pi^i from a digit expansion.
        """
        result = cls.zero(field)
        uniformizer = cls.pi(field)
        for digit in reversed(digits):
            result = result * uniformizer + int(digit)
        return result

    def _coerce(self, other: Operand) -> "RingElement":
        if isinstance(other, RingElement):
            if other.field is not self.field and other.field != self.field:
                raise RamifiedZeroError(
                    ErrorCode.FIELD_MISMATCH,
                    f"cannot combine elements of {self.field} and {other.field}",
                )
            return other
        if isinstance(other, int):
            return RingElement.from_int(self.field, other)
        return NotImplemented

    def __add__(self, other: Operand) -> "RingElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RingElement(
            _canonical(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)]),
            self.field,
        )

    def __radd__(self, other: Operand) -> "RingElement":
        return self.__add__(other)

    def __neg__(self) -> "RingElement":
        return RingElement(_canonical(self.field, [-a for a in self.coeffs]), self.field)

    def __sub__(self, other: Operand) -> "RingElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Operand) -> "RingElement":
        return (-self) + other

    def __mul__(self, other: Operand) -> "RingElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other

        e = self.field.e
        product = [0] * (2 * e - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                product[i + j] += a * b

        return RingElement(_reduce(self.field, product), self.field)

    def __rmul__(self, other: Operand) -> "RingElement":
        return self.__mul__(other)

    def __pow__(self, exponent: int) -> "RingElement":
        if not isinstance(exponent, int) or exponent < 0:
            raise RamifiedZeroError(
                ErrorCode.INVALID_INPUT, f"exponent must be >= 0, got {exponent}"
            )

        result = RingElement.one(self.field)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def valuation(self) -> Valuation:
        """
        The pi-adic valuation: min_j (e * v_2(a_j) + j), or the
        AtLeastPrecision marker when the element is zero at precision.
        """
        best = None
        for j, coeff in enumerate(self.coeffs):
            if coeff == 0:
                continue
            candidate = self.field.e * _two_adic_valuation(coeff) + j
            if best is None or candidate < best:
                best = candidate

        if best is None or best >= self.field.n_pi:
            return AT_LEAST_PRECISION
        return best

    def is_zero(self) -> bool:
        """True when indistinguishable from 0 at working precision."""
        return not is_finite(self.valuation())

    def is_unit(self) -> bool:
        """Units are exactly the elements with odd constant coefficient."""
        return self.coeffs[0] % 2 == 1

    def divide_by_pi(self) -> "RingElement":
        """
        Exact division by pi; the result is known one digit less precisely.

        Raises:
          RamifiedZeroError: NOT_DIVISIBLE if the element is a unit.
        """
        if self.is_unit():
            raise RamifiedZeroError(
                ErrorCode.NOT_DIVISIBLE, f"{self} is a unit, not divisible by pi"
            )

        field = self.field
        eisenstein = list(field.eisenstein) + [1]
        # a_0 / c_0 with c_0 = 2 * odd
        quotient = (self.coeffs[0] // 2) * pow(eisenstein[0] // 2, -1, field.modulus)
        shifted = list(self.coeffs[1:]) + [0]
        return RingElement(
            _canonical(
                field,
                [shifted[j] - quotient * eisenstein[j + 1] for j in range(field.e)],
            ),
            field,
        )

    def shift(self, k: int) -> "RingElement":
        """
        Multiply by pi^k; negative k divides and requires divisibility.
        """
        if k >= 0:
            return self * RingElement.pi_power(self.field, k)

        result = self
        for _ in range(-k):
            result = result.divide_by_pi()
        return result

    def unit_part(self) -> tuple[int, "RingElement"]:
        """
        Split off the valuation: returns (l, w) with self = pi^l * w and w a unit.

        Raises:
          RamifiedZeroError: ZERO_ELEMENT if the element is zero at precision.
        """
        level = self.valuation()
        if not is_finite(level):
            raise RamifiedZeroError(
                ErrorCode.ZERO_ELEMENT, "zero at working precision has no unit part"
            )
        return level, self.shift(-level)

    def inverse(self) -> "RingElement":
        """
        Inverse of a unit by Newton iteration y <- y(2 - xy); precision
        doubles each step starting from xy = 1 mod pi.
        """
        if not self.is_unit():
            raise RamifiedZeroError(
                ErrorCode.ZERO_ELEMENT, f"{self} is not a unit and has no inverse"
            )

        one = RingElement.one(self.field)
        result = one
        for _ in range(self.field.n_pi.bit_length() + 2):
            if self * result == one:
                break
            result = result * (2 - self * result)
        return result

    def digit_expansion(self, n: int) -> list[int]:
        """
        Digits d_0 .. d_{n-1} in {0, 1} with self = sum d_i pi^i mod pi^n.

        Raises:
          RamifiedZeroError: PRECISION_EXCEEDED if n > n_pi.
        """
        if n > self.field.n_pi:
            raise RamifiedZeroError(
                ErrorCode.PRECISION_EXCEEDED,
                f"{n} digits requested at precision {self.field.n_pi}",
            )

        digits = []
        current = self
        for _ in range(n):
            digit = current.coeffs[0] & 1
            digits.append(digit)
            current = (current - digit).divide_by_pi()
        return digits

    def to_literal(self) -> list[int]:
        """The element literal [a_0, ..., a_{e-1}]."""
        return list(self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for j, coeff in enumerate(self.coeffs):
            if coeff == 0:
                continue
            if j == 0:
                terms.append(str(coeff))
            elif j == 1:
                terms.append(f"{coeff}*pi")
            else:
                terms.append(f"{coeff}*pi^{j}")
        return " + ".join(terms) if terms else "0"

    def __str__(self) -> str:
        return self.__repr__()


def _reduce(field: FieldDescriptor, product: list[int]) -> tuple[int, ...]:
    """
    Fold the degree >= e terms back with pi^e = -(c_{e-1} pi^{e-1} + ... + c_0).
    """
    e = field.e
    modulus = field.modulus
    eisenstein = field.eisenstein
    for k in range(len(product) - 1, e - 1, -1):
        top = product[k] % modulus
        product[k] = 0
        if top == 0:
            continue
        for j in range(e):
            product[k - e + j] -= top * eisenstein[j]
    return _canonical(field, product[:e])


@lru_cache(maxsize=1024)
def _pi_power(field: FieldDescriptor, k: int) -> RingElement:
    if k < 0:
        raise RamifiedZeroError(ErrorCode.INVALID_INPUT, f"pi^{k} is not integral")
    if field.e == 1:
        return RingElement.from_int(field, 2**k)
    base = RingElement(_canonical(field, [0, 1] + [0] * (field.e - 2)), field)
    return base**k


class RingHelper:
    """
    Useful methods for working with ring elements.
    """

    @staticmethod
    def two_over_pi_e(field: FieldDescriptor) -> RingElement:
        """
        u = 2 / pi^e. Since pi^e = -2 * D with D = sum (c_j / 2) pi^j a unit,
        u = -1 / D exactly at working precision.
        """
        half = RingElement.from_coeffs(field, [c // 2 for c in field.eisenstein])
        return -half.inverse()

    @staticmethod
    def random_element(field: FieldDescriptor, rng, unit: bool = False) -> RingElement:
        """
        A uniformly random element (or unit) drawn from a numpy Generator.
        """
        coeffs = []
        for modulus in field.digit_moduli:
            bits = rng.integers(0, 2, size=modulus.bit_length() - 1)
            coeffs.append(int("".join(str(int(b)) for b in bits) or "0", 2))
        if unit:
            coeffs[0] |= 1
        return RingElement.from_coeffs(field, coeffs)
