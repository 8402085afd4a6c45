"""
Additive forms a_1 x_1^d + ... + a_s x_s^d over O_K, their level
profiles, rotation of levels (normalization) and zero certificates.
"""

import json
import logging
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from typing import Any, Optional

from src.ramified_zeros.common.custom_typing import (
    Valuation,
    is_finite,
    valuation_to_json,
)
from src.ramified_zeros.common.errors import ErrorCode, RamifiedZeroError
from src.ramified_zeros.ring.element import RingElement
from src.ramified_zeros.ring.field import FieldDescriptor, make_field

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LevelProfile:
    """
    Number of variables in each level mod d.
    """

    counts: tuple[int, ...]

    @property
    def d(self) -> int:
        """Degree of the form the profile belongs to."""
        return len(self.counts)

    @property
    def s(self) -> int:
        """Total number of variables."""
        return sum(self.counts)

    def __getitem__(self, level: int) -> int:
        return self.counts[level % self.d]

    def rotated(self, r: int) -> "LevelProfile":
        """
        The profile after multiplying the form by pi^r: level l moves to l + r.
        """
        return LevelProfile(
            tuple(self.counts[(j - r) % self.d] for j in range(self.d))
        )

    def satisfies_normalization(self) -> bool:
        """
        d * (s_0 + ... + s_{k-1}) >= k * s for every k = 1 .. d, in integers.
        """
        prefix = 0
        for k, count in enumerate(self.counts, start=1):
            prefix += count
            if self.d * prefix < k * self.s:
                return False
        return True

    def __repr__(self) -> str:
        return f"LevelProfile{self.counts}"


@dataclass(frozen=True)
class RotationRecord:
    """
    The substitution made by rotate(form, r): the rotated form G satisfies
    G(y) = pi^r F(x) with x_i = pi^(-shifts[i]) y_i.
    """

    r: int
    shifts: tuple[int, ...]

    def pull_back(self, cert: "ZeroCertificate") -> "ZeroCertificate":
        """
        Map a certificate of the rotated form to one of the original form.
        The assignment is rescaled by a common power of pi so that some
        coordinate is a unit again; that coordinate becomes the pivot.
        """
        support = [
            (i, value.valuation())
            for i, value in enumerate(cert.assignment)
            if is_finite(value.valuation())
        ]
        if not support:
            return cert

        scale = max(self.shifts[i] - level for i, level in support)
        assignment = []
        for i, value in enumerate(cert.assignment):
            if value.is_zero():
                assignment.append(value)
            else:
                assignment.append(value.shift(scale - self.shifts[i]))

        pivot = next(i for i, value in enumerate(assignment) if value.is_unit())
        return ZeroCertificate(tuple(assignment), cert.n_target, pivot)


@dataclass(frozen=True)
class ZeroCertificate:
    """
    An assignment b_1 .. b_s with b_pivot a unit and F(b) = 0 mod pi^n_target.
    """

    assignment: tuple[RingElement, ...]
    n_target: int
    pivot: int

    def support(self) -> list[int]:
        """Indices of the nonzero coordinates."""
        return [i for i, value in enumerate(self.assignment) if not value.is_zero()]

    def to_dict(self, form: Optional["AdditiveForm"] = None) -> dict[str, Any]:
        """
        The certificate file layout; valuation_achieved needs the form.
        """
        result = {
            "assignment": [value.to_literal() for value in self.assignment],
            "n_target": self.n_target,
            "pivot": self.pivot,
        }
        if form is not None:
            result["valuation_achieved"] = valuation_to_json(
                form.evaluate(self.assignment).valuation()
            )
        return result


@dataclass(frozen=True)
class Verification:
    """
    Outcome of verify_certificate; failure is a value, not an error.
    """

    valuation: Valuation
    pivot_is_unit: bool
    passed: bool


@dataclass(frozen=True)
class AdditiveForm:
    """
    A diagonal form of degree d = 2m with nonzero coefficients.

    Args:
      field (FieldDescriptor): the field of the coefficients.
      d (int): the degree.
      coeffs (tuple[RingElement, ...]): a_1 .. a_s
    """

    field: FieldDescriptor
    d: int
    coeffs: tuple[RingElement, ...]
    absolute_levels: tuple[int, ...] = dataclass_field(init=False)
    unit_parts: tuple[RingElement, ...] = dataclass_field(init=False)

    def __post_init__(self):
        if self.d % 2 != 0 or self.d < 2:
            raise RamifiedZeroError(
                ErrorCode.ODD_DEGREE, f"degree must be a positive even number, got {self.d}"
            )

        levels = []
        units = []
        for i, coeff in enumerate(self.coeffs):
            if coeff.is_zero():
                raise RamifiedZeroError(
                    ErrorCode.ZERO_COEFFICIENT,
                    f"coefficient {i} is zero at precision {self.field.n_pi}",
                )
            level, unit = coeff.unit_part()
            levels.append(level)
            units.append(unit)

        object.__setattr__(self, "absolute_levels", tuple(levels))
        object.__setattr__(self, "unit_parts", tuple(units))

    @property
    def m(self) -> int:
        """Half the degree."""
        return self.d // 2

    @property
    def s(self) -> int:
        """Number of variables."""
        return len(self.coeffs)

    @property
    def levels(self) -> tuple[int, ...]:
        """Levels reduced mod d."""
        return tuple(level % self.d for level in self.absolute_levels)

    def profile(self) -> LevelProfile:
        """
        Count the variables in each level mod d.
        """
        counts = [0] * self.d
        for level in self.levels:
            counts[level] += 1
        return LevelProfile(tuple(counts))

    def rotate(self, r: int) -> tuple["AdditiveForm", RotationRecord]:
        """
        Multiply the form by pi^r and bring every level back into [0, d)
        with x_i -> pi^(-q_i) x_i.

        Raises:
          RamifiedZeroError: PRECISION_EXHAUSTED if a coefficient would need
            valuation >= n_pi.
        """
        if not 0 <= r < self.d:
            raise RamifiedZeroError(
                ErrorCode.INVALID_INPUT, f"rotation must be in [0, {self.d}), got {r}"
            )

        coeffs = []
        shifts = []
        for level, unit in zip(self.absolute_levels, self.unit_parts):
            target = (level + r) % self.d
            if level + r >= self.field.n_pi or target >= self.field.n_pi:
                raise RamifiedZeroError(
                    ErrorCode.PRECISION_EXHAUSTED,
                    f"level {level} rotated by {r} leaves working precision",
                )
            shifts.append((level + r) // self.d)
            coeffs.append(unit.shift(target))

        rotated = AdditiveForm(self.field, self.d, tuple(coeffs))
        return rotated, RotationRecord(r, tuple(shifts))

    def normalize(self) -> tuple[int, "AdditiveForm", RotationRecord]:
        """
        Smallest rotation whose profile meets the prefix inequalities
        d * (s_0 + ... + s_{k-1}) >= k * s.

        Raises:
          RamifiedZeroError: NO_VALID_ROTATION (cannot happen for s >= 1).
        """
        if self.s < 1:
            raise RamifiedZeroError(ErrorCode.INVALID_INPUT, "cannot normalize an empty form")

        base = self.profile()
        for r in range(self.d):
            if base.rotated(r).satisfies_normalization():
                rotated, record = self.rotate(r)
                logger.debug("normalized %s by r=%d to %s", base, r, rotated.profile())
                return r, rotated, record

        raise RamifiedZeroError(
            ErrorCode.NO_VALID_ROTATION, f"no rotation of {base} is normalized"
        )

    def evaluate(self, assignment: tuple[RingElement, ...]) -> RingElement:
        """
        sum a_i * b_i^d at working precision.
        """
        if len(assignment) != self.s:
            raise RamifiedZeroError(
                ErrorCode.LENGTH_MISMATCH,
                f"assignment has {len(assignment)} values for {self.s} variables",
            )

        total = RingElement.zero(self.field)
        for coeff, value in zip(self.coeffs, assignment):
            if value.is_zero():
                continue
            total = total + coeff * value**self.d
        return total

    def verify_certificate(self, cert: ZeroCertificate) -> Verification:
        """
        Passes iff v(F(b)) >= n_target and b_pivot is a unit.
        """
        if len(cert.assignment) != self.s or not 0 <= cert.pivot < self.s:
            return Verification(0, False, False)

        valuation = self.evaluate(cert.assignment).valuation()
        pivot_is_unit = cert.assignment[cert.pivot].is_unit()
        return Verification(
            valuation, pivot_is_unit, pivot_is_unit and valuation >= cert.n_target
        )

    def with_field(self, new_field: FieldDescriptor) -> "AdditiveForm":
        """
        The same coefficients read at another precision of the same extension.
        """
        return AdditiveForm(
            new_field,
            self.d,
            tuple(RingElement.from_coeffs(new_field, c.to_literal()) for c in self.coeffs),
        )

    def to_dict(self) -> dict[str, Any]:
        """The form file layout."""
        return {
            "field": self.field.to_dict(),
            "d": self.d,
            "coefficients": [coeff.to_literal() for coeff in self.coeffs],
        }

    def to_json(self) -> str:
        """
        Converts the form to a json string
        """
        return json.dumps(self.to_dict())

    def __repr__(self) -> str:
        return f"AdditiveForm(d={self.d}, s={self.s}, {self.field}, {self.profile()})"

    def __str__(self) -> str:
        return self.__repr__()


def make_form(
    field_descriptor: FieldDescriptor, d: int, coeff_literals: list
) -> AdditiveForm:
    """
    Build a form from element literals (lists of e integers) or plain integers.

    Raises:
      RamifiedZeroError: ODD_DEGREE or ZERO_COEFFICIENT.
    """
    coeffs = []
    for literal in coeff_literals:
        if isinstance(literal, RingElement):
            coeffs.append(literal)
        elif isinstance(literal, int):
            coeffs.append(RingElement.from_int(field_descriptor, literal))
        else:
            coeffs.append(RingElement.from_coeffs(field_descriptor, list(literal)))
    return AdditiveForm(field_descriptor, d, tuple(coeffs))


class FormHelper:
    """
    Methods for reading and writing form and certificate files
    """

    @staticmethod
    def load(json_string: str, precision: Optional[int] = None) -> AdditiveForm:
        """
        Load a form from its json string, optionally overriding the precision.
        """
        try:
            form_dict = json.loads(json_string)
            field_dict = form_dict["field"]
            field_descriptor = make_field(
                field_dict["e"],
                field_dict["eisenstein"],
                precision if precision is not None else field_dict.get("precision"),
            )
            return make_form(field_descriptor, form_dict["d"], form_dict["coefficients"])
        except (KeyError, TypeError, ValueError) as exc:
            raise RamifiedZeroError(
                ErrorCode.INVALID_INPUT, f"malformed form file: {exc}"
            ) from exc

    @staticmethod
    def load_certificate(json_string: str, form: AdditiveForm) -> ZeroCertificate:
        """
        Load a certificate for the given form.
        """
        try:
            cert_dict = json.loads(json_string)
            assignment = tuple(
                RingElement.from_coeffs(form.field, list(value))
                for value in cert_dict["assignment"]
            )
            return ZeroCertificate(
                assignment, int(cert_dict["n_target"]), int(cert_dict["pivot"])
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise RamifiedZeroError(
                ErrorCode.INVALID_INPUT, f"malformed certificate file: {exc}"
            ) from exc
