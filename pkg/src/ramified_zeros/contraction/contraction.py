"""
The contraction calculus: merging two variables at the same level into
one new variable, and steering the merge with multipliers (1 + pi^k),
k < e, so that it stops at or bypasses a free level.

Levels here are absolute valuations, never reduced mod d.
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any, Optional

from src.ramified_zeros.common.custom_typing import (
    Valuation,
    is_finite,
    valuation_to_json,
)
from src.ramified_zeros.common.errors import ErrorCode, RamifiedZeroError
from src.ramified_zeros.form.form import AdditiveForm
from src.ramified_zeros.ring.element import RingElement
from src.ramified_zeros.ring.field import FieldDescriptor

logger = logging.getLogger(__name__)


class SteerChoice(Enum):
    """
    What to do at the free level l + 2k.
    """

    # keep the contraction as it is
    STOP = "stop"
    # multiply by (1 + pi^k), adding a term at level l + 2k
    BYPASS = "bypass"


class SteerScope(Enum):
    """
    Where the multiplier goes inside the first operand.
    """

    # the whole first operand, adding a term at its level + 2k
    OPERAND = "operand"
    # its left-most original leaf, adding a term at that leaf's level + 2k
    LEAF = "leaf"


@dataclass(frozen=True)
class Steer:
    """
    One steering choice for a contraction.
    """

    k: int
    choice: SteerChoice = SteerChoice.BYPASS
    scope: SteerScope = SteerScope.OPERAND

    def to_dict(self) -> dict[str, Any]:
        """JSON friendly form for the contraction log."""
        return {"k": self.k, "choice": self.choice.value, "scope": self.scope.value}


@dataclass(frozen=True)
class RecordLeaf:
    """
    An original variable x_index = multiplier * y inside a contraction.
    """

    index: int
    coefficient: RingElement
    multiplier: RingElement

    def term(self, d: int) -> RingElement:
        """a_index * multiplier^d"""
        return self.coefficient * self.multiplier**d


@dataclass(frozen=True)
class SubstitutionRecord:
    """
    The substitution behind a derived variable, multipliers already
    multiplied out along every root-to-leaf path. Leaves are in tree order,
    so leaves[0] is the left-most leaf.
    """

    leaves: tuple[RecordLeaf, ...]

    def scaled(self, factor: RingElement, leftmost: Optional[RingElement] = None):
        """
        Multiply every leaf by factor, and the left-most one also by leftmost.
        """
        leaves = []
        for position, leaf in enumerate(self.leaves):
            multiplier = leaf.multiplier * factor
            if position == 0 and leftmost is not None:
                multiplier = multiplier * leftmost
            leaves.append(RecordLeaf(leaf.index, leaf.coefficient, multiplier))
        return SubstitutionRecord(tuple(leaves))

    def evaluate(self, d: int) -> RingElement:
        """
        sum over leaves of a_i * multiplier_i^d; equals the variable's value.
        """
        total = RingElement.zero(self.leaves[0].coefficient.field)
        for leaf in self.leaves:
            total = total + leaf.term(d)
        return total

    def expand(self, s: int) -> tuple[RingElement, ...]:
        """
        The assignment to all s original variables; unused ones are 0.
        """
        field = self.leaves[0].coefficient.field
        assignment = [RingElement.zero(field)] * s
        for leaf in self.leaves:
            assignment[leaf.index] = leaf.multiplier
        return tuple(assignment)

    def __add__(self, other: "SubstitutionRecord") -> "SubstitutionRecord":
        return SubstitutionRecord(self.leaves + other.leaves)


# pylint: disable=too-many-instance-attributes
@dataclass(frozen=True, eq=False)
class DerivedVariable:
    """
    A contraction product b * y^d of some original variables.

    Args:
      value (RingElement): the new coefficient b
      level (Valuation): valuation of value, absolute
      free (frozenset[int]): levels the producing contraction can stop at or bypass
      record (SubstitutionRecord): how to get back to the original variables
      used (frozenset[int]): original indices consumed
      d (int): degree of the form
      op (str): "lift", "contract" or "align"
      parents (tuple): the inputs of the producing operation
      steering (tuple[Steer, ...]): steering applied by that operation
    """

    value: RingElement
    level: Valuation
    free: frozenset
    record: SubstitutionRecord
    used: frozenset
    d: int
    op: str = "lift"
    parents: tuple = ()
    steering: tuple = ()

    @property
    def field(self) -> FieldDescriptor:
        """Field of the value."""
        return self.value.field

    @property
    def is_original(self) -> bool:
        """True for a lifted original variable."""
        return self.op == "lift"

    @property
    def is_zero(self) -> bool:
        """An exact zero at working precision: an immediate certificate."""
        return not is_finite(self.level)

    def pivot(self) -> Optional[tuple[int, int]]:
        """
        (index, level) of the lowest level original variable with a unit
        multiplier, ties broken by smallest index. None if alignment left
        no unit multiplier.
        """
        candidates = [
            (leaf.coefficient.valuation(), leaf.index)
            for leaf in self.record.leaves
            if leaf.multiplier.is_unit()
        ]
        if not candidates:
            return None
        level, index = min(candidates)
        return index, level

    def is_finished(self, e: int) -> bool:
        """
        Enough for Hensel lifting: an exact zero, or level at least
        2e + 1 + 2 * (pivot level), with a unit pivot either way.
        """
        pivot = self.pivot()
        if pivot is None:
            return False
        if self.is_zero:
            return True
        return self.level >= 2 * e + 1 + 2 * pivot[1]

    def leftmost_leaf_level(self) -> int:
        """Level of the term of the left-most leaf."""
        return self.record.leaves[0].term(self.d).valuation()

    def __repr__(self) -> str:
        return (
            f"DerivedVariable(level={self.level}, used={sorted(self.used)}, op={self.op})"
        )

    def __str__(self) -> str:
        return self.__repr__()


@dataclass(frozen=True)
class Outcome:
    """
    One reachable result of contracting a pair.
    """

    level: Valuation
    steering: tuple
    variable: DerivedVariable


@lru_cache(maxsize=256)
def steering_multiplier(field: FieldDescriptor, k: int, d: int) -> tuple:
    """
    (1 + pi^k, (1 + pi^k)^d); for k < e the power is 1 + pi^(2k) mod pi^(2k+1).
    """
    multiplier = RingElement.one(field) + RingElement.pi_power(field, k)
    return multiplier, multiplier**d


def lift_original(form: AdditiveForm, i: int) -> DerivedVariable:
    """
    The original variable i as a derived variable with multiplier 1.
    """
    if not 0 <= i < form.s:
        raise RamifiedZeroError(
            ErrorCode.INVALID_INPUT, f"variable {i} out of range for s={form.s}"
        )

    coeff = form.coeffs[i]
    leaf = RecordLeaf(i, coeff, RingElement.one(form.field))
    return DerivedVariable(
        value=coeff,
        level=coeff.valuation(),
        free=frozenset(),
        record=SubstitutionRecord((leaf,)),
        used=frozenset([i]),
        d=form.d,
    )


def align(var: DerivedVariable, level: int) -> DerivedVariable:
    """
    Raise a variable by a multiple of d levels with y -> pi^q y, so that
    variables whose levels agree mod d can be contracted.
    """
    if not is_finite(var.level) or (level - var.level) % var.d != 0 or level < var.level:
        raise RamifiedZeroError(
            ErrorCode.LEVEL_MISMATCH,
            f"cannot align level {var.level} to {level} with d={var.d}",
        )
    if level == var.level:
        return var
    if level >= var.field.n_pi:
        raise RamifiedZeroError(
            ErrorCode.PRECISION_EXHAUSTED, f"aligning to level {level} leaves precision"
        )

    q = (level - var.level) // var.d
    factor = RingElement.pi_power(var.field, q)
    value = var.value.shift(q * var.d)
    return DerivedVariable(
        value=value,
        level=value.valuation(),
        free=frozenset(f + q * var.d for f in var.free),
        record=var.record.scaled(factor),
        used=var.used,
        d=var.d,
        op="align",
        parents=(var,),
    )


def _check_pair(a: DerivedVariable, b: DerivedVariable):
    if a.is_zero or b.is_zero or a.level != b.level:
        raise RamifiedZeroError(
            ErrorCode.LEVEL_MISMATCH,
            f"contraction needs equal finite levels, got {a.level} and {b.level}",
        )
    if a.used & b.used:
        raise RamifiedZeroError(
            ErrorCode.OVERLAPPING_SUPPORT,
            f"variables share originals {sorted(a.used & b.used)}",
        )


def _steer_options(a: DerivedVariable) -> list[Steer]:
    """
    Steering choices that keep the level gain: a leaf term must land strictly
    above the operand's level, otherwise it would change the leading term.
    """
    options = [Steer(k) for k in range(1, a.field.e)]
    if not a.is_original:
        leaf_level = a.leftmost_leaf_level()
        options.extend(
            Steer(k, scope=SteerScope.LEAF)
            for k in range(1, a.field.e)
            if leaf_level + 2 * k > a.level
        )
    return options


def contract_pair(
    a: DerivedVariable, b: DerivedVariable, steering: tuple = ()
) -> DerivedVariable:
    """
    Contract two variables at the same level l. BYPASS entries multiply the
    first operand (as a whole, or its left-most leaf) by (1 + pi^k).

    Raises:
      RamifiedZeroError: LEVEL_MISMATCH, OVERLAPPING_SUPPORT or BAD_STEERING.
    """
    _check_pair(a, b)
    field = a.field
    one = RingElement.one(field)

    operand_factor, operand_power = one, one
    leaf_factor, leaf_power = one, one
    for steer in steering:
        if not 1 <= steer.k < field.e:
            raise RamifiedZeroError(
                ErrorCode.BAD_STEERING, f"steering k={steer.k} must satisfy 1 <= k < e={field.e}"
            )
        if steer.choice == SteerChoice.STOP:
            continue
        multiplier, power = steering_multiplier(field, steer.k, a.d)
        if steer.scope == SteerScope.OPERAND:
            operand_factor, operand_power = operand_factor * multiplier, operand_power * power
        else:
            if a.leftmost_leaf_level() + 2 * steer.k <= a.level:
                raise RamifiedZeroError(
                    ErrorCode.BAD_STEERING,
                    f"leaf steering k={steer.k} lands at or below level {a.level}",
                )
            leaf_factor, leaf_power = leaf_factor * multiplier, leaf_power * power

    first = a.value
    if leaf_factor != one:
        first = first + a.record.leaves[0].term(a.d) * (leaf_power - 1)
    first = first * operand_power

    value = first + b.value
    level = value.valuation()
    base = a.level
    inherited = {f for f in a.free | b.free if f > base}
    free = frozenset({base + 2 * k for k in range(1, field.e)} | inherited)
    record = a.record.scaled(operand_factor, leaf_factor if leaf_factor != one else None)

    return DerivedVariable(
        value=value,
        level=level,
        free=free,
        record=record + b.record,
        used=a.used | b.used,
        d=a.d,
        op="contract",
        parents=(a, b),
        steering=tuple(steering),
    )


def _level_key(level: Valuation) -> tuple:
    return (1, 0) if not is_finite(level) else (0, level)


def achievable_levels(a: DerivedVariable, b: DerivedVariable) -> list[Outcome]:
    """
    Every distinct level a steered contraction of a and b can land on,
    fewest multipliers first, sorted by level (an exact zero last).
    """
    _check_pair(a, b)
    options = _steer_options(a)
    masks = sorted(range(1 << len(options)), key=lambda mask: (bin(mask).count("1"), mask))

    seen = {}
    for mask in masks:
        steering = tuple(opt for bit, opt in enumerate(options) if mask >> bit & 1)
        variable = contract_pair(a, b, steering)
        if variable.level not in seen:
            seen[variable.level] = Outcome(variable.level, steering, variable)

    return sorted(seen.values(), key=lambda outcome: _level_key(outcome.level))


def steer_to(
    a: DerivedVariable, b: DerivedVariable, target: int, at_least: bool = False
) -> Optional[DerivedVariable]:
    """
    A contraction landing exactly at target, or (when at_least) at the
    lowest reachable level above it. None when no steering achieves it.
    """
    outcomes = achievable_levels(a, b)
    for outcome in outcomes:
        if outcome.level == target:
            return outcome.variable

    if at_least:
        for outcome in outcomes:
            if outcome.level > target:
                return outcome.variable

    return None


def free_level_mismatches(a: DerivedVariable, b: DerivedVariable) -> list[int]:
    """
    Free levels l + 2k predicted for a merge that recomputation does not
    confirm. A level below the unsteered landing L must be reachable both
    exactly and bypassed; levels above L carry no claim.
    """
    outcomes = achievable_levels(a, b)
    plain = contract_pair(a, b).level
    levels = [outcome.level for outcome in outcomes]

    mismatches = []
    for k in range(1, a.field.e):
        free_level = a.level + 2 * k
        if not plain >= free_level:
            continue
        stops = free_level in levels
        passes = any(level > free_level for level in levels)
        if not (stops and passes):
            mismatches.append(free_level)

    if mismatches:
        logger.info("free levels %s not realized for merge at level %s", mismatches, a.level)
    return mismatches


class ContractionHelper:
    """
    Methods for walking contraction trees.
    """

    @staticmethod
    def iter_nodes(var: DerivedVariable):
        """
        Post-order walk over a contraction tree.
        """
        for parent in var.parents:
            yield from ContractionHelper.iter_nodes(parent)
        yield var

    @staticmethod
    def contraction_log(var: DerivedVariable) -> list[dict[str, Any]]:
        """
        The steps that built var, in post-order, as
        {id, op, inputs, steering, result_level}.
        """
        names = {}
        steps = []
        counter = itertools.count()
        for node in ContractionHelper.iter_nodes(var):
            if id(node) in names:
                continue
            if node.is_original:
                names[id(node)] = f"x{next(iter(node.used))}"
                continue
            names[id(node)] = f"n{next(counter)}"
            steps.append(
                {
                    "id": names[id(node)],
                    "op": node.op,
                    "inputs": [names[id(parent)] for parent in node.parents],
                    "steering": [steer.to_dict() for steer in node.steering],
                    "result_level": valuation_to_json(node.level),
                }
            )
        return steps

    @staticmethod
    def claimed_levels_match(var: DerivedVariable) -> bool:
        """
        Every node's stored level equals the measured valuation of its value,
        and its record reproduces its value.
        """
        for node in ContractionHelper.iter_nodes(var):
            if node.value.valuation() != node.level:
                return False
            if node.record.evaluate(node.d) != node.value:
                return False
        return True
