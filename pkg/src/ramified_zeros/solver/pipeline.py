"""
The full solve: normalize, dispatch, build a chain, lift it and check it.
"""

import json
import logging
import time
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from typing import Any, Optional

from src.ramified_zeros.common.constants import TOOL_NAME, TOOL_VERSION
from src.ramified_zeros.common.errors import ErrorCode, RamifiedZeroError
from src.ramified_zeros.contraction.contraction import (
    ContractionHelper,
    DerivedVariable,
    free_level_mismatches,
)
from src.ramified_zeros.form.form import AdditiveForm, ZeroCertificate
from src.ramified_zeros.solver.config import SolverConfig
from src.ramified_zeros.solver.hensel import hensel_lift_traced
from src.ramified_zeros.solver.search import generic_fallback
from src.ramified_zeros.solver.strategies import (
    Strategy,
    StrategyKind,
    StrategyResult,
    dispatch,
    run_strategy,
    variables_bound,
)

logger = logging.getLogger(__name__)


# pylint: disable=too-many-instance-attributes
@dataclass
class SolveReport:
    """
    Everything a solve produced. certificate is None for Unsolved.
    """

    rotation: int
    strategy: Strategy
    used_fallback: bool = False
    contraction_log: list = dataclass_field(default_factory=list)
    certificate: Optional[ZeroCertificate] = None
    hensel_iterations: int = 0
    residual_trace: list = dataclass_field(default_factory=list)
    nodes_expanded: int = 0
    free_level_mismatches: int = 0
    variables_bound: int = 0
    wall_time: float = 0.0

    @property
    def solved(self) -> bool:
        """True when a verified certificate is attached."""
        return self.certificate is not None

    def to_dict(self, form: Optional[AdditiveForm] = None, timing: bool = False) -> dict[str, Any]:
        """
        The report file layout. Wall time is left out unless asked for, so
        identical runs write identical files.
        """
        result = {
            "tool": TOOL_NAME,
            "version": TOOL_VERSION,
            "rotation": self.rotation,
            "strategy": self.strategy.to_dict(),
            "used_fallback": self.used_fallback,
            "contraction_log": self.contraction_log,
            "certificate": "Unsolved"
            if self.certificate is None
            else self.certificate.to_dict(form),
            "hensel_iterations": self.hensel_iterations,
            "nodes_expanded": self.nodes_expanded,
            "free_level_mismatches": self.free_level_mismatches,
            "variables_bound": self.variables_bound,
        }
        if timing:
            result["wall_time"] = self.wall_time
        return result

    def to_json(self, form: Optional[AdditiveForm] = None, timing: bool = False) -> str:
        """
        Converts the report to a json string
        """
        return json.dumps(self.to_dict(form, timing), indent=2)


def _audit_free_levels(variable: DerivedVariable) -> int:
    mismatches = 0
    for node in ContractionHelper.iter_nodes(variable):
        if node.op == "contract":
            mismatches += len(free_level_mismatches(*node.parents))
    return mismatches


def _certify(
    form: AdditiveForm, chain: StrategyResult, n_target: int, config: SolverConfig
) -> tuple[Optional[ZeroCertificate], list]:
    """
    Expand the chain into an assignment, lift it on the rotated form, pull it
    back and lift again on the original if the pull-back lost precision.
    """
    working = chain.form
    pivot = chain.variable.pivot()
    if pivot is None:
        return None, []

    assignment = chain.variable.record.expand(working.s)
    try:
        lifted, trace = hensel_lift_traced(
            working, assignment, pivot[0], working.field.n_pi, config.max_hensel_iterations
        )
    except RamifiedZeroError as exc:
        logger.warning("lifting the chain failed: %s", exc.message)
        return None, []

    certificate = chain.record.pull_back(lifted)
    certificate = ZeroCertificate(certificate.assignment, n_target, certificate.pivot)
    if form.verify_certificate(certificate).passed:
        return certificate, trace

    try:
        certificate, more = hensel_lift_traced(
            form, certificate.assignment, certificate.pivot, n_target, config.max_hensel_iterations
        )
    except RamifiedZeroError as exc:
        logger.warning("lifting the pulled back certificate failed: %s", exc.message)
        return None, trace
    return certificate, trace + more


def solve(form: AdditiveForm, config: Optional[SolverConfig] = None) -> SolveReport:
    """
    Search for a nontrivial zero of form and certify it.

    Raises:
      RamifiedZeroError: UNSUPPORTED_DEGREE outside d = 2m, m odd, m >= 3.
    """
    config = config or SolverConfig()
    start = time.perf_counter()
    bound = variables_bound(form.d)

    e = form.field.e
    precision = config.working_precision(e)
    if precision != form.field.n_pi:
        form = form.with_field(form.field.with_precision(precision))
    n_target = config.target_precision(e, precision)

    rotation, normalized, normal_record = form.normalize()
    strategy = dispatch(normalized.profile(), form.m, e)
    report = SolveReport(rotation=rotation, strategy=strategy, variables_bound=bound)
    logger.info("solving %s with %s after rotation %d", form, strategy, rotation)

    chain = None
    if strategy.kind != StrategyKind.FALLBACK:
        level = (strategy.level - rotation) % form.d
        try:
            chain = run_strategy(form, Strategy(strategy.kind, level))
        except RamifiedZeroError as exc:
            if exc.error_code not in (ErrorCode.STRATEGY_FAILED, ErrorCode.PRECISION_EXHAUSTED):
                raise
            logger.info("%s failed (%s), falling back to search", strategy, exc.message)

    if chain is None:
        report.used_fallback = True
        outcome = generic_fallback(normalized, config.budget)
        report.nodes_expanded = outcome.nodes_expanded
        if outcome.solved:
            chain = StrategyResult(normalized, normal_record, outcome.variable)

    if chain is not None:
        report.contraction_log = ContractionHelper.contraction_log(chain.variable)
        report.free_level_mismatches = _audit_free_levels(chain.variable)
        certificate, trace = _certify(form, chain, n_target, config)
        if certificate is not None:
            verification = form.verify_certificate(certificate)
            if not verification.passed:
                raise RamifiedZeroError(
                    ErrorCode.STRATEGY_FAILED,
                    f"certificate failed verification at valuation {verification.valuation}",
                )
            report.certificate = certificate
            report.residual_trace = trace
            report.hensel_iterations = max(0, len(trace) - 1)

    if report.certificate is None and form.s >= bound:
        logger.warning(
            "no certificate for %s although s=%d >= %d; strategy %s", form, form.s, bound, strategy
        )

    report.wall_time = time.perf_counter() - start
    return report
