"""
Newton iteration on one coordinate of an approximate zero.
"""

import logging

from src.ramified_zeros.common.constants import HENSEL_HARD_LIMIT, HENSEL_ITERATION_LIMIT
from src.ramified_zeros.common.custom_typing import Valuation, is_finite
from src.ramified_zeros.common.errors import ErrorCode, RamifiedZeroError
from src.ramified_zeros.form.form import AdditiveForm, ZeroCertificate
from src.ramified_zeros.ring.element import RingElement

logger = logging.getLogger(__name__)


def hensel_threshold(form: AdditiveForm, pivot: int) -> int:
    """
    2e + 2 * l_p + 1: above this F(b) is small enough against F' = d a_p t^(d-1),
    whose valuation is e + l_p for a unit t.
    """
    return 2 * form.field.e + 2 * form.absolute_levels[pivot] + 1


def hensel_lift_traced(
    form: AdditiveForm,
    assignment: tuple[RingElement, ...],
    pivot: int,
    n_target: int,
    max_iterations: int = HENSEL_ITERATION_LIMIT,
) -> tuple[ZeroCertificate, list[Valuation]]:
    """
    Like hensel_lift, also returning the residual valuation before each step
    and after the last one.
    """
    if n_target > form.field.n_pi:
        raise RamifiedZeroError(
            ErrorCode.PRECISION_EXHAUSTED,
            f"target {n_target} is above working precision {form.field.n_pi}",
        )
    if len(assignment) != form.s:
        raise RamifiedZeroError(
            ErrorCode.LENGTH_MISMATCH,
            f"assignment has {len(assignment)} values for {form.s} variables",
        )
    if not assignment[pivot].is_unit():
        raise RamifiedZeroError(
            ErrorCode.HENSEL_PRECONDITION_FAILED, f"pivot coordinate {pivot} is not a unit"
        )

    values = list(assignment)
    residual = form.evaluate(tuple(values)).valuation()
    trace = [residual]
    if residual >= n_target:
        return ZeroCertificate(tuple(values), n_target, pivot), trace

    threshold = hensel_threshold(form, pivot)
    if residual < threshold:
        raise RamifiedZeroError(
            ErrorCode.HENSEL_PRECONDITION_FAILED,
            f"v(F(b)) = {residual} is below the lifting threshold {threshold}",
        )

    coeff = form.coeffs[pivot]
    d = form.d
    iterations = 0
    while residual < n_target:
        if iterations >= HENSEL_HARD_LIMIT:
            raise RamifiedZeroError(
                ErrorCode.PRECISION_EXHAUSTED,
                f"no convergence to {n_target} after {iterations} Newton steps",
            )
        if iterations == max_iterations:
            logger.warning("Newton iteration passed %d steps at residual %s", max_iterations, residual)

        t = values[pivot]
        value = form.evaluate(tuple(values))
        derivative = coeff * d * t ** (d - 1)
        shift, unit = derivative.unit_part()
        # t <- t - F / F', with F divisible by pi^shift since residual > threshold
        values[pivot] = t - value.shift(-shift) * unit.inverse()

        iterations += 1
        residual = form.evaluate(tuple(values)).valuation()
        trace.append(residual)
        logger.debug("Newton step %d: residual valuation %s", iterations, residual)

        if is_finite(residual) and residual <= trace[-2]:
            raise RamifiedZeroError(
                ErrorCode.PRECISION_EXHAUSTED,
                f"residual stalled at {residual} below target {n_target}",
            )

    return ZeroCertificate(tuple(values), n_target, pivot), trace


def hensel_lift(
    form: AdditiveForm,
    assignment: tuple[RingElement, ...],
    pivot: int,
    n_target: int,
    max_iterations: int = HENSEL_ITERATION_LIMIT,
) -> ZeroCertificate:
    """
    Lift an approximate zero b with b_pivot a unit and
    v(F(b)) >= 2e + 2 l_p + 1 to one with v(F(b')) >= n_target, changing
    only the pivot coordinate, which stays congruent to b_pivot mod pi^(e+1).

    Raises:
      RamifiedZeroError: HENSEL_PRECONDITION_FAILED or PRECISION_EXHAUSTED.
    """
    certificate, _ = hensel_lift_traced(form, assignment, pivot, n_target, max_iterations)
    return certificate
