"""
Pairs of objects assigned to bins: with n >= m + 3 objects and m bins,
two disjoint pairs always share a bin. The solver uses it with the odd
landing levels as bins.

Objects are numbered from 0.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from src.ramified_zeros.common.constants import BINS_CHUNK_SIZE, worker_count
from src.ramified_zeros.common.errors import ErrorCode, RamifiedZeroError

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


@lru_cache(maxsize=64)
def all_pairs(n: int) -> tuple[Pair, ...]:
    """Unordered pairs of range(n) in lexicographic order."""
    return tuple(itertools.combinations(range(n), 2))


@lru_cache(maxsize=64)
def disjoint_pair_indices(n: int) -> np.ndarray:
    """
    Rows (p, q) of indices into all_pairs(n) whose pairs share no object.
    """
    pairs = all_pairs(n)
    rows = [
        (p, q)
        for p, q in itertools.combinations(range(len(pairs)), 2)
        if not set(pairs[p]) & set(pairs[q])
    ]
    return np.array(rows, dtype=np.int64).reshape(-1, 2)


@dataclass(frozen=True)
class BinAssignment:
    """
    Every unordered pair of n objects mapped to one of m bins.

    Args:
      n (int): number of objects
      m (int): number of bins
      bins (tuple[int, ...]): the bin of each pair, pairs in lexicographic order
    """

    n: int
    m: int
    bins: tuple[int, ...]

    def __post_init__(self):
        if self.m < 1 or self.n < 0:
            raise RamifiedZeroError(
                ErrorCode.INVALID_INPUT, f"bad bin assignment size n={self.n}, m={self.m}"
            )
        if len(self.bins) != math.comb(self.n, 2):
            raise RamifiedZeroError(
                ErrorCode.INVALID_INPUT,
                f"{len(self.bins)} bins given for {math.comb(self.n, 2)} pairs",
            )
        if any(not 0 <= b < self.m for b in self.bins):
            raise RamifiedZeroError(ErrorCode.INVALID_INPUT, "bin index out of range")

    @classmethod
    def from_mapping(cls, n: int, m: int, mapping: dict) -> "BinAssignment":
        """
        Build from {(i, j): bin}; pair order inside the key does not matter.
        """
        normalized = {tuple(sorted(pair)): b for pair, b in mapping.items()}
        try:
            return cls(n, m, tuple(normalized[pair] for pair in all_pairs(n)))
        except KeyError as exc:
            raise RamifiedZeroError(
                ErrorCode.INVALID_INPUT, f"pair {exc} has no bin"
            ) from exc

    def pairs(self) -> tuple[Pair, ...]:
        """The pairs, in the order of bins."""
        return all_pairs(self.n)

    def bin_of(self, pair: Pair) -> int:
        """Bin of a pair."""
        return self.bins[self.pairs().index(tuple(sorted(pair)))]

    def pairs_in_bin(self, b: int) -> list[Pair]:
        """Pairs mapped to bin b, lexicographically."""
        return [pair for pair, bin_ in zip(self.pairs(), self.bins) if bin_ == b]

    def to_dict(self) -> dict:
        """JSON friendly form."""
        return {
            "n": self.n,
            "m": self.m,
            "bins": {f"{i},{j}": b for (i, j), b in zip(self.pairs(), self.bins)},
        }


def find_disjoint_same_bin(a: BinAssignment) -> Optional[tuple[tuple[Pair, Pair], int]]:
    """
    The lexicographically smallest (bin, pair, pair) with the two pairs
    disjoint and in the same bin, or None.
    """
    for b in range(a.m):
        in_bin = a.pairs_in_bin(b)
        for index, first in enumerate(in_bin):
            for second in in_bin[index + 1 :]:
                if not set(first) & set(second):
                    return (first, second), b
    return None


def extremal_assignment(m: int) -> BinAssignment:
    """
    m + 2 objects with no two disjoint pairs in one bin: bin b < m - 1 is
    the star of object b over the objects after it, and the last bin is the
    triangle on the three remaining objects.
    """
    if m < 1:
        raise RamifiedZeroError(ErrorCode.INVALID_INPUT, f"need m >= 1, got {m}")

    n = m + 2
    mapping = {}
    for i, j in all_pairs(n):
        mapping[(i, j)] = min(i, m - 1)
    return BinAssignment.from_mapping(n, m, mapping)


def max_pairs_bound(m: int) -> int:
    """
    C(m + 3, 2) - 3: most pairs an assignment to m bins can hold with no
    two disjoint pairs in a bin.
    """
    if m < 1:
        raise RamifiedZeroError(ErrorCode.INVALID_INPUT, f"need m >= 1, got {m}")
    return math.comb(m + 3, 2) - 3


def counting_consistent(a: BinAssignment) -> bool:
    """
    An assignment with no disjoint same-bin pairs has at most
    max_pairs_bound(m) pairs.
    """
    if find_disjoint_same_bin(a) is not None:
        return True
    return len(a.bins) <= max_pairs_bound(a.m)


def iter_assignments(n: int, m: int, pruned: bool = True) -> Iterator[BinAssignment]:
    """
    Every assignment of the pairs of n objects to m bins. When pruned the
    first pair is fixed to bin 0, which loses nothing up to relabelling bins.
    """
    count = math.comb(n, 2)
    if count == 0:
        yield BinAssignment(n, m, ())
        return
    heads = (0,) if pruned else range(m)
    for head in heads:
        for tail in itertools.product(range(m), repeat=count - 1):
            yield BinAssignment(n, m, (head,) + tail)


def random_assignment(n: int, m: int, rng: np.random.Generator) -> BinAssignment:
    """A uniformly random assignment."""
    bins = rng.integers(0, m, size=math.comb(n, 2))
    return BinAssignment(n, m, tuple(int(b) for b in bins))


@dataclass(frozen=True)
class BinsCheckResult:
    """
    Totals of a bins sweep. failures counts assignments without two
    disjoint pairs in one bin.
    """

    n: int
    m: int
    checked: int
    failures: int
    first_failure: Optional[BinAssignment] = None

    def to_dict(self) -> dict:
        """JSON friendly form."""
        return {
            "n": self.n,
            "m": self.m,
            "checked": self.checked,
            "failures": self.failures,
            "first_failure": None
            if self.first_failure is None
            else self.first_failure.to_dict(),
        }


def _count_failures(digits: np.ndarray, n: int) -> tuple[int, Optional[np.ndarray]]:
    """
    digits holds one assignment per row; a row fails when no disjoint pair
    of pairs shares a bin.
    """
    rows = disjoint_pair_indices(n)
    hit = np.zeros(digits.shape[0], dtype=bool)
    for p, q in rows:
        hit |= digits[:, p] == digits[:, q]
    missed = np.flatnonzero(~hit)
    if missed.size == 0:
        return 0, None
    return int(missed.size), digits[missed[0]]


def _sweep_block(n: int, m: int, start: int, stop: int) -> tuple[int, Optional[np.ndarray]]:
    count = math.comb(n, 2)
    index = np.arange(start, stop, dtype=np.int64)
    digits = np.zeros((index.size, count), dtype=np.int64)
    for column in range(1, count):
        digits[:, column] = (index // m ** (column - 1)) % m
    return _count_failures(digits, n)


def _check_sweep_size(n: int, m: int):
    if m < 1 or n < 0:
        raise RamifiedZeroError(
            ErrorCode.INVALID_INPUT, f"bins sweep needs m >= 1 and n >= 0, got n={n}, m={m}"
        )


def exhaustive_check(n: int, m: int, workers: Optional[int] = None) -> BinsCheckResult:
    """
    Check all m^C(n, 2) assignments by sweeping those with the first pair in
    bin 0 in numpy blocks; totals count every assignment. Blocks are spread
    over a thread pool when more than one worker is set.
    """
    _check_sweep_size(n, m)
    count = math.comb(n, 2)
    if count == 0:
        return BinsCheckResult(n, m, 1, 1, BinAssignment(n, m, ()))

    total = m ** (count - 1)
    blocks = [
        (start, min(start + BINS_CHUNK_SIZE, total))
        for start in range(0, total, BINS_CHUNK_SIZE)
    ]
    workers = workers or worker_count()
    logger.info(
        "exhaustive bins check n=%d m=%d: %d assignments in %d blocks on %d workers",
        n, m, total, len(blocks), workers,
    )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(lambda block: _sweep_block(n, m, *block), blocks))
    else:
        results = [_sweep_block(n, m, *block) for block in blocks]

    # relabelling bins maps each swept assignment onto m assignments
    failures = sum(result[0] for result in results)
    first = next((result[1] for result in results if result[1] is not None), None)
    return BinsCheckResult(
        n,
        m,
        total * m,
        failures * m,
        None if first is None else BinAssignment(n, m, tuple(int(b) for b in first)),
    )


def random_check(n: int, m: int, samples: int, seed: int) -> BinsCheckResult:
    """
    Check uniformly random assignments drawn from a seeded generator.
    """
    _check_sweep_size(n, m)
    rng = np.random.default_rng(seed)
    count = math.comb(n, 2)
    failures = 0
    first = None
    done = 0
    while done < samples:
        size = min(BINS_CHUNK_SIZE, samples - done)
        digits = rng.integers(0, m, size=(size, count), dtype=np.int64)
        missed, row = _count_failures(digits, n)
        failures += missed
        if first is None and row is not None:
            first = BinAssignment(n, m, tuple(int(b) for b in row))
        done += size

    logger.info("random bins check n=%d m=%d: %d samples, %d failures", n, m, samples, failures)
    return BinsCheckResult(n, m, samples, failures, first)
