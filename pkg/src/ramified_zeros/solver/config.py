"""
Configuration of a solve run.
"""

import json
from dataclasses import dataclass
from typing import Optional

from src.ramified_zeros.common.constants import (
    DEFAULT_BUDGET,
    DEFAULT_SEED,
    HENSEL_ITERATION_LIMIT,
    TARGET_OFFSET,
)
from src.ramified_zeros.common.errors import ErrorCode, RamifiedZeroError
from src.ramified_zeros.ring.field import default_precision


@dataclass
class SolverConfig:
    """
    Options for solve
    """

    # Working precision in pi-digits; None means 8e + 16
    precision: Optional[int] = None
    # Node budget of the fallback search
    budget: int = DEFAULT_BUDGET
    seed: int = DEFAULT_SEED
    # Target valuation of the certificate; None means min(n_pi, 2e + 10)
    n_target: Optional[int] = None
    max_hensel_iterations: int = HENSEL_ITERATION_LIMIT

    def __post_init__(self):
        if self.budget < 0:
            raise RamifiedZeroError(ErrorCode.INVALID_INPUT, f"budget must be >= 0, got {self.budget}")
        if self.max_hensel_iterations < 1:
            raise RamifiedZeroError(
                ErrorCode.INVALID_INPUT,
                f"max_hensel_iterations must be >= 1, got {self.max_hensel_iterations}",
            )

    def working_precision(self, e: int) -> int:
        """
        The precision to solve at for ramification degree e.
        """
        return self.precision if self.precision is not None else default_precision(e)

    def target_precision(self, e: int, n_pi: int) -> int:
        """
        The valuation a certificate must reach.
        """
        if self.n_target is not None:
            return self.n_target
        return min(n_pi, 2 * e + TARGET_OFFSET)

    def to_json(self) -> str:
        """
        Converts the config to a json string
        """
        return json.dumps(
            {
                "precision": self.precision,
                "budget": self.budget,
                "seed": self.seed,
                "n_target": self.n_target,
                "max_hensel_iterations": self.max_hensel_iterations,
            }
        )

    def __repr__(self) -> str:
        return (
            f"SolverConfig(precision={self.precision}, "
            f"budget={self.budget}, "
            f"seed={self.seed}, "
            f"n_target={self.n_target}, "
            f"max_hensel_iterations={self.max_hensel_iterations})"
        )
