"""
Custom typing defintions. The valuation of an element that is zero at
working precision is not an integer, so Valuation is a union with a marker.
"""

from typing import Any, Union


class AtLeastPrecision:
    """
    Marker for the valuation of an element indistinguishable from zero.

    It orders above every integer, so ``v >= n_target`` reads naturally,
    but it refuses arithmetic: adding to it is always a bug.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other: Any) -> bool:
        return False

    def __le__(self, other: Any) -> bool:
        return isinstance(other, AtLeastPrecision)

    def __gt__(self, other: Any) -> bool:
        return not isinstance(other, AtLeastPrecision)

    def __ge__(self, other: Any) -> bool:
        return True

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, AtLeastPrecision)

    def __hash__(self) -> int:
        return hash("AtLeastPrecision")

    def __repr__(self) -> str:
        return "AtLeastPrecision"

    def __str__(self) -> str:
        return self.__repr__()


AT_LEAST_PRECISION = AtLeastPrecision()

Valuation = Union[int, AtLeastPrecision]


def is_finite(value: Valuation) -> bool:
    """
    Check if a valuation is an actual integer.

    Args:
      value (Valuation): The valuation to check.

    Returns:
      bool: True if the value is an integer, False for the marker.
    """
    return isinstance(value, int) and not isinstance(value, bool)


def valuation_to_json(value: Valuation) -> Union[int, str]:
    """
    JSON friendly form of a valuation.
    """
    return value if is_finite(value) else "AtLeastPrecision"
