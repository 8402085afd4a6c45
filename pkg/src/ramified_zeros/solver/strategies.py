"""
Strategies that build a contraction chain from a crowded level (or two
crowded neighbouring levels) up to level 2e + 1, plus dispatch between them.

Every strategy rotates the form so that the chosen level sits at absolute
level 0. Level 2e is called the middle level below: two variables there
contract past the lifting threshold.
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional

from src.ramified_zeros.common.errors import ErrorCode, RamifiedZeroError
from src.ramified_zeros.contraction.contraction import (
    DerivedVariable,
    Outcome,
    achievable_levels,
    align,
    contract_pair,
    lift_original,
    steer_to,
)
from src.ramified_zeros.form.form import AdditiveForm, LevelProfile, RotationRecord
from src.ramified_zeros.pairing.bins import BinAssignment, all_pairs, find_disjoint_same_bin

logger = logging.getLogger(__name__)


class StrategyKind(Enum):
    """Enum for the strategies dispatch can pick"""

    SINGLE_LEVEL = "SingleLevel"
    ADJACENT_BIG = "AdjacentBig"
    ADJACENT_FOUR_FOUR = "AdjacentFourFour"
    FALLBACK = "Fallback"


class AdjacentVariant(Enum):
    """Which pair of counts an adjacent strategy relies on"""

    # s_k >= m + 3 and s_{k+1} >= 2
    BIG = "big"
    # s_k >= 4 and s_{k+1} >= 4
    FOUR_FOUR = "four_four"


@dataclass(frozen=True)
class Strategy:
    """
    A dispatch decision: the kind and the level k it works from.
    """

    kind: StrategyKind
    level: Optional[int] = None

    def to_dict(self) -> dict[str, Any]:
        """JSON friendly form."""
        return {"kind": self.kind.value, "level": self.level}

    def __repr__(self) -> str:
        if self.level is None:
            return self.kind.value
        return f"{self.kind.value}({self.level})"

    def __str__(self) -> str:
        return self.__repr__()


@dataclass(frozen=True)
class StrategyResult:
    """
    A finished chain on a rotated copy of a form.

    Args:
      form (AdditiveForm): the rotated form the chain lives on
      record (RotationRecord): maps certificates of that form back
      variable (DerivedVariable): the chain's final variable
    """

    form: AdditiveForm
    record: RotationRecord
    variable: DerivedVariable


def variables_bound(d: int) -> int:
    """
    d^2 / 4 + 3d + 1 variables force a nontrivial zero, for d = 2m with m
    odd and at least 3.

    Raises:
      RamifiedZeroError: UNSUPPORTED_DEGREE for any other d.
    """
    if d % 2 != 0 or (d // 2) % 2 == 0 or d // 2 < 3:
        raise RamifiedZeroError(
            ErrorCode.UNSUPPORTED_DEGREE, f"degree {d} is not 2m with m odd and m >= 3"
        )
    return d * d // 4 + 3 * d + 1


def improves_artin_bound(d: int) -> bool:
    """The bound is strictly below d^2 + 1."""
    return variables_bound(d) < d * d + 1


def dispatch(profile: LevelProfile, m: int, e: int) -> Strategy:
    """
    Pick a strategy from a normalized profile. Preference order is
    SingleLevel, AdjacentBig, AdjacentFourFour; the smallest k wins ties and
    k + 1 wraps around mod d.
    """
    d = profile.d
    for k in range(d):
        if profile[k] >= m + 7:
            return Strategy(StrategyKind.SINGLE_LEVEL, k)
    for k in range(d):
        if profile[k] >= m + 3 and profile[k + 1] >= 2:
            return Strategy(StrategyKind.ADJACENT_BIG, k)
    for k in range(d):
        if profile[k] >= 4 and profile[k + 1] >= 4:
            return Strategy(StrategyKind.ADJACENT_FOUR_FOUR, k)

    logger.info("profile %s (e=%d) matches no strategy", profile, e)
    return Strategy(StrategyKind.FALLBACK)


def rotate_to_level(form: AdditiveForm, k: int) -> tuple[AdditiveForm, RotationRecord]:
    """
    Rotate so that level k (mod d) becomes absolute level 0 and every other
    level lands in [0, d).
    """
    return form.rotate((form.d - k % form.d) % form.d)


def _failed(message: str) -> RamifiedZeroError:
    logger.debug("strategy step failed: %s", message)
    return RamifiedZeroError(ErrorCode.STRATEGY_FAILED, message)


class ChainBuilder:
    """
    Bookkeeping for one strategy run on a rotated form.
    """

    def __init__(self, form: AdditiveForm):
        self.form = form
        self.e = form.field.e
        self.d = form.d
        self.m = form.m
        self.middle = 2 * self.e
        self._outcomes = {}

    def originals_at(self, level: int) -> list[DerivedVariable]:
        """Lifted originals at an absolute level, by index."""
        return [
            lift_original(self.form, i)
            for i, lvl in enumerate(self.form.absolute_levels)
            if lvl == level
        ]

    def outcomes(self, a: DerivedVariable, b: DerivedVariable) -> list[Outcome]:
        """achievable_levels, memoized per operand pair."""
        key = (id(a), id(b))
        if key not in self._outcomes:
            self._outcomes[key] = (a, b, achievable_levels(a, b))
        return self._outcomes[key][2]

    def landing(self, a: DerivedVariable, b: DerivedVariable) -> tuple[str, DerivedVariable]:
        """
        Where a pair of level 0 variables goes, bypassing even levels below
        the middle: "done", "middle", or "odd" (the lowest odd landing).
        """
        outcomes = self.outcomes(a, b)
        for outcome in outcomes:
            if outcome.variable.is_finished(self.e):
                return "done", outcome.variable
        for outcome in outcomes:
            if outcome.level == self.middle:
                return "middle", outcome.variable
        for outcome in outcomes:
            if outcome.level < self.middle and outcome.level % 2 == 1:
                return "odd", outcome.variable
        return "stuck", outcomes[0].variable

    def merge_to_middle(
        self, a: DerivedVariable, b: DerivedVariable
    ) -> Optional[DerivedVariable]:
        """
        Contract two variables whose levels agree mod d, steering the result
        to the middle level or past the lifting threshold.
        """
        if a.is_zero or b.is_zero:
            return a if a.is_zero else b
        if a.level != b.level:
            if (a.level - b.level) % self.d != 0:
                return None
            low, high = (a, b) if a.level < b.level else (b, a)
            a, b = high, align(low, high.level)

        for first, second in ((a, b), (b, a)):
            for outcome in self.outcomes(first, second):
                if outcome.variable.is_finished(self.e):
                    return outcome.variable
            steered = steer_to(first, second, self.middle)
            if steered is not None:
                return steered
        return None

    def middle_from_level_zero(self, pool: list[DerivedVariable]) -> DerivedVariable:
        """
        One variable at the middle level (or finished) from level 0 variables:
        a pair landing there directly, otherwise two disjoint pairs with the
        same odd landing mod d, merged and steered up.
        """
        for a, b in itertools.combinations(pool, 2):
            kind, variable = self.landing(a, b)
            if kind in ("done", "middle"):
                logger.debug("pair %s lands %s at %s", sorted(variable.used), kind, variable.level)
                return variable

        n = len(pool)
        if n < self.m + 3:
            raise _failed(f"{n} level 0 variables left, the bins step needs {self.m + 3}")

        mapping = {}
        landings = {}
        for i, j in all_pairs(n):
            kind, variable = self.landing(pool[i], pool[j])
            if kind != "odd":
                raise _failed(f"pair ({i}, {j}) is stuck at level {variable.level}")
            mapping[(i, j)] = (variable.level % self.d) // 2
            landings[(i, j)] = variable

        found = find_disjoint_same_bin(BinAssignment.from_mapping(n, self.m, mapping))
        if found is None:
            raise _failed(f"no two disjoint pairs share a bin among {n} variables")
        (first, second), b = found
        logger.debug("pairs %s and %s share odd bin %d", first, second, b)

        merged = self.merge_to_middle(landings[first], landings[second])
        if merged is None:
            raise _failed(f"pairs {first} and {second} cannot be steered to {self.middle}")
        return merged

    def middle_from_adjacent(
        self, level0: list[DerivedVariable], level1: list[DerivedVariable]
    ) -> DerivedVariable:
        """
        One variable at the middle level (or finished) from a level 0 pair
        and a level 1 pair (or single level 1 variable) meeting at a common
        landing.
        """
        sides = []
        for a, b in itertools.combinations(level1, 2):
            sides.append(self.outcomes(a, b))
        for variable in level1:
            sides.append([Outcome(variable.level, (), variable)])

        for a, b in itertools.combinations(level0, 2):
            zero_side = self.outcomes(a, b)
            for outcome in zero_side:
                if outcome.variable.is_finished(self.e) or outcome.level == self.middle:
                    return outcome.variable

            for one_side in sides:
                for low in zero_side:
                    for high in one_side:
                        if low.level != high.level or low.level > self.middle:
                            continue
                        merged = self.merge_to_middle(low.variable, high.variable)
                        if merged is not None:
                            return merged

        raise _failed("no level 0 and level 1 contractions meet")

    def finish(self, first: DerivedVariable, second: DerivedVariable) -> DerivedVariable:
        """
        Contract two middle level variables past the lifting threshold.
        """
        for variable in (first, second):
            if variable.is_finished(self.e):
                return variable
        if first.level != second.level:
            raise _failed(f"cannot finish with levels {first.level} and {second.level}")
        result = contract_pair(first, second)
        if not result.is_finished(self.e):
            raise _failed(f"final contraction stopped at level {result.level}")
        return result


def _remaining(pool: list[DerivedVariable], used: frozenset) -> list[DerivedVariable]:
    return [variable for variable in pool if not variable.used & used]


def solve_single_level(form: AdditiveForm, k: int) -> StrategyResult:
    """
    Level k holds at least m + 7 variables: build two middle level variables
    from it and contract them.

    Raises:
      RamifiedZeroError: STRATEGY_PRECONDITION or STRATEGY_FAILED.
    """
    working, record = rotate_to_level(form, k)
    builder = ChainBuilder(working)
    pool = builder.originals_at(0)
    if len(pool) < builder.m + 7:
        raise RamifiedZeroError(
            ErrorCode.STRATEGY_PRECONDITION,
            f"level {k} holds {len(pool)} variables, need {builder.m + 7}",
        )

    first = builder.middle_from_level_zero(pool)
    if first.is_finished(builder.e):
        return StrategyResult(working, record, first)
    second = builder.middle_from_level_zero(_remaining(pool, first.used))
    return StrategyResult(working, record, builder.finish(first, second))


def solve_adjacent(form: AdditiveForm, k: int, variant: AdjacentVariant) -> StrategyResult:
    """
    Levels k and k + 1 are both crowded (m + 3 and 2, or 4 and 4): combine
    level k pairs with level k + 1 contractions to reach the middle level
    twice, then contract.

    Raises:
      RamifiedZeroError: STRATEGY_PRECONDITION or STRATEGY_FAILED.
    """
    working, record = rotate_to_level(form, k)
    builder = ChainBuilder(working)
    level0 = builder.originals_at(0)
    level1 = builder.originals_at(1)

    if variant == AdjacentVariant.BIG:
        need0, need1 = builder.m + 3, 2
    else:
        need0, need1 = 4, 4
    if len(level0) < need0 or len(level1) < need1:
        raise RamifiedZeroError(
            ErrorCode.STRATEGY_PRECONDITION,
            f"levels {k}, {k + 1} hold {len(level0)}, {len(level1)} variables, "
            f"need {need0}, {need1}",
        )

    if variant == AdjacentVariant.BIG:
        first = builder.middle_from_level_zero(level0)
    else:
        first = builder.middle_from_adjacent(level0, level1)
    if first.is_finished(builder.e):
        return StrategyResult(working, record, first)

    second = builder.middle_from_adjacent(
        _remaining(level0, first.used), _remaining(level1, first.used)
    )
    return StrategyResult(working, record, builder.finish(first, second))


def run_strategy(form: AdditiveForm, strategy: Strategy) -> StrategyResult:
    """
    Run a lemma strategy picked by dispatch on form.
    """
    if strategy.kind == StrategyKind.SINGLE_LEVEL:
        return solve_single_level(form, strategy.level)
    if strategy.kind == StrategyKind.ADJACENT_BIG:
        return solve_adjacent(form, strategy.level, AdjacentVariant.BIG)
    if strategy.kind == StrategyKind.ADJACENT_FOUR_FOUR:
        return solve_adjacent(form, strategy.level, AdjacentVariant.FOUR_FOUR)
    raise RamifiedZeroError(ErrorCode.STRATEGY_PRECONDITION, f"{strategy} is not a lemma strategy")
