"""
Best-first search over contractions, for profiles no strategy covers and
for strategy runs that fail part way.
"""

import logging
from dataclasses import dataclass
from typing import Optional

from src.ramified_zeros.common.custom_typing import is_finite
from src.ramified_zeros.common.errors import ErrorCode, RamifiedZeroError
from src.ramified_zeros.common.queues import PriorityQueue
from src.ramified_zeros.contraction.contraction import (
    DerivedVariable,
    achievable_levels,
    align,
    lift_original,
)
from src.ramified_zeros.form.form import AdditiveForm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchOutcome:
    """
    Result of the fallback search; variable is None when the budget ran out
    or the pool was exhausted.
    """

    variable: Optional[DerivedVariable]
    nodes_expanded: int

    @property
    def solved(self) -> bool:
        """True if a finished chain was found."""
        return self.variable is not None


def _priority(variable: DerivedVariable, e: int) -> tuple:
    # finished chains first, then higher level, then fewer originals consumed
    if variable.is_finished(e):
        return (1, 0, -len(variable.used))
    level = variable.field.n_pi if not is_finite(variable.level) else variable.level
    return (0, level, -len(variable.used))


def _pool_key(variable: DerivedVariable) -> tuple:
    return (variable.level, variable.value, variable.used)


def _candidates(a: DerivedVariable, b: DerivedVariable):
    """
    Every steered contraction of a and b, aligning the lower one first when
    the levels agree mod d.
    """
    if a.used & b.used or a.is_zero or b.is_zero:
        return []
    if a.level != b.level:
        if (a.level - b.level) % a.d != 0:
            return []
        low, high = (a, b) if a.level < b.level else (b, a)
        try:
            a, b = high, align(low, high.level)
        except RamifiedZeroError as exc:
            if exc.error_code != ErrorCode.PRECISION_EXHAUSTED:
                raise
            return []
    return [outcome.variable for outcome in achievable_levels(a, b)] + [
        outcome.variable for outcome in achievable_levels(b, a)
    ]


def generic_fallback(form: AdditiveForm, budget: int) -> SearchOutcome:
    """
    Expand a pool of variables best first: repeatedly take the most
    promising pending contraction (highest level, then fewest originals),
    add it to the pool and queue its contractions with every pool member.
    Succeeds on a variable at level >= 2e + 1 + 2 * (pivot level) or an
    exact zero. A budget of zero expands nothing.
    """
    e = form.field.e
    if budget <= 0:
        return SearchOutcome(None, 0)

    pool = [lift_original(form, i) for i in range(form.s)]
    seen = {_pool_key(variable) for variable in pool}
    queue = PriorityQueue()
    for index, a in enumerate(pool):
        for b in pool[index + 1 :]:
            for candidate in _candidates(a, b):
                queue.push((candidate, _priority(candidate, e)))

    nodes = 0
    while not queue.is_empty() and nodes < budget:
        variable = queue.pop()
        nodes += 1

        if variable.is_finished(e):
            logger.info("fallback search finished after %d nodes at level %s", nodes, variable.level)
            return SearchOutcome(variable, nodes)

        key = _pool_key(variable)
        if key in seen:
            continue
        seen.add(key)

        for other in pool:
            for candidate in _candidates(variable, other):
                if candidate.is_finished(e) or _pool_key(candidate) not in seen:
                    queue.push((candidate, _priority(candidate, e)))
        pool.append(variable)

    logger.info(
        "fallback search gave up after %d nodes (budget %d, %d pending)",
        nodes, budget, len(queue),
    )
    return SearchOutcome(None, nodes)
