"""
Error codes and the single exception type raised by the library.
"""

from enum import Enum


class ErrorCode(Enum):
    """Enum for solver error codes"""

    # ring
    NOT_EISENSTEIN = 1
    PRECISION_TOO_SMALL = 2
    FIELD_MISMATCH = 3
    ZERO_ELEMENT = 4
    PRECISION_EXCEEDED = 5
    NOT_DIVISIBLE = 6
    # form
    ZERO_COEFFICIENT = 10
    ODD_DEGREE = 11
    PRECISION_EXHAUSTED = 12
    NO_VALID_ROTATION = 13
    LENGTH_MISMATCH = 14
    # contraction
    LEVEL_MISMATCH = 20
    OVERLAPPING_SUPPORT = 21
    BAD_STEERING = 22
    # solver
    UNSUPPORTED_DEGREE = 30
    STRATEGY_FAILED = 31
    STRATEGY_PRECONDITION = 32
    HENSEL_PRECONDITION_FAILED = 33
    # oracle
    SEARCH_SPACE_TOO_LARGE = 40
    # input files and flags
    INVALID_INPUT = 50


class RamifiedZeroError(Exception):
    """
    Base class for all solver exceptions

    Attributes:
        error_code -- code for the error
        message -- explanation of the error
    """

    def __init__(self, error_code: ErrorCode, message: str):
        self.error_code = error_code
        self.message = message
        super().__init__(self.message)

    def __repr__(self) -> str:
        return f"RamifiedZeroError({self.error_code.name}, {self.message!r})"
