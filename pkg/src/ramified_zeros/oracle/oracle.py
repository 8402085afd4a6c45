"""
Brute force and exhaustive checkers for desk sized instances. The zero
search and certificate checks run on NaiveRing so that they stay
independent of the solver's arithmetic.
"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from typing import Iterator, Optional

import numpy as np

from src.ramified_zeros.common.constants import BINS_CHUNK_SIZE, BRUTE_FORCE_STATE_CAP
from src.ramified_zeros.common.custom_typing import is_finite
from src.ramified_zeros.common.errors import ErrorCode, RamifiedZeroError
from src.ramified_zeros.form.form import AdditiveForm, LevelProfile, ZeroCertificate, make_form
from src.ramified_zeros.oracle.naive_ring import NaiveRing, naive_evaluate
from src.ramified_zeros.pairing.bins import exhaustive_check
from src.ramified_zeros.ring.element import RingElement, RingHelper
from src.ramified_zeros.ring.field import FieldDescriptor
from src.ramified_zeros.solver.strategies import dispatch

logger = logging.getLogger(__name__)


def naive_ring_for(form: AdditiveForm, n: Optional[int] = None) -> NaiveRing:
    """A NaiveRing for the form's field, at precision n (default n_pi)."""
    field = form.field
    return NaiveRing(field.e, tuple(field.eisenstein), n if n is not None else field.n_pi)


def check_certificate_independently(form: AdditiveForm, cert: ZeroCertificate) -> bool:
    """
    Re-check a certificate from its literals: valuation at least n_target
    and a unit at the pivot.
    """
    ring = naive_ring_for(form)
    coefficients = [coeff.to_literal() for coeff in form.coeffs]
    assignment = [value.to_literal() for value in cert.assignment]
    if len(assignment) != form.s or not 0 <= cert.pivot < form.s:
        return False
    if not ring.is_unit(ring.element(assignment[cert.pivot])):
        return False
    valuation = naive_evaluate(ring, coefficients, assignment, form.d)
    return valuation is None or valuation >= cert.n_target


def _residue_literals(ring: NaiveRing) -> list[list[int]]:
    """Every residue class modulo pi^n as a literal; index 0 is zero."""
    return [list(combo) for combo in itertools.product(*(range(1 << k) for k in ring.digit_bits))]


def brute_force_state_count(s: int, n_small: int, support_cap: int) -> int:
    """
    Assignments with 1 .. support_cap nonzero coordinates mod pi^n_small.
    """
    nonzero = (1 << n_small) - 1
    return sum(math.comb(s, k) * nonzero**k for k in range(1, min(s, support_cap) + 1))


def brute_force_zero(form: AdditiveForm, n_small: int, support_cap: int) -> list[tuple]:
    """
    All assignments modulo pi^n_small with at most support_cap nonzero
    coordinates, some coordinate a unit, and v(F) >= n_small. Coordinates
    are returned as element literals (tuples).

    Raises:
      RamifiedZeroError: SEARCH_SPACE_TOO_LARGE above the state cap.
    """
    states = brute_force_state_count(form.s, n_small, support_cap)
    if states > BRUTE_FORCE_STATE_CAP:
        raise RamifiedZeroError(
            ErrorCode.SEARCH_SPACE_TOO_LARGE,
            f"{states} states exceed the brute force cap {BRUTE_FORCE_STATE_CAP}",
        )

    ring = naive_ring_for(form, n_small)
    literals = _residue_literals(ring)
    size = len(literals)
    moduli = np.array([1 << k for k in ring.digit_bits], dtype=np.int64)
    units = np.array([lit[0] % 2 == 1 for lit in literals], dtype=bool)

    # term[i][r] = residue of a_i * r^d, one row of e components per residue r
    powers = [ring.power(ring.element(lit), form.d) for lit in literals]
    terms = []
    for coeff in form.coeffs:
        a = ring.element(coeff.to_literal())
        terms.append(
            np.array([ring.residue(ring.mul(a, p)) for p in powers], dtype=np.int64).reshape(size, -1)
        )

    zero = tuple(0 for _ in range(form.field.e))
    found = []
    for k in range(1, min(form.s, support_cap) + 1):
        total = (size - 1) ** k
        for support in itertools.combinations(range(form.s), k):
            for start in range(0, total, BINS_CHUNK_SIZE):
                index = np.arange(start, min(start + BINS_CHUNK_SIZE, total), dtype=np.int64)
                digits = np.empty((index.size, k), dtype=np.int64)
                for column in range(k):
                    digits[:, column] = (index // (size - 1) ** column) % (size - 1) + 1

                sums = np.zeros((index.size, ring.e), dtype=np.int64)
                for column, variable in enumerate(support):
                    sums = (sums + terms[variable][digits[:, column]]) % moduli
                hits = np.all(sums == 0, axis=1) & np.any(units[digits], axis=1)

                for row in digits[hits]:
                    assignment = [zero] * form.s
                    for column, variable in enumerate(support):
                        assignment[variable] = tuple(literals[row[column]])
                    found.append(tuple(assignment))

    logger.info("brute force over %d states found %d zeros", states, len(found))
    return found


def truncate_assignment(assignment, n_small: int, form: AdditiveForm) -> tuple:
    """
    Reduce an assignment of RingElements modulo pi^n_small, as literals.
    """
    ring = naive_ring_for(form, n_small)
    return tuple(tuple(ring.residue(ring.element(value.to_literal()))) for value in assignment)


def hensel_truncations_found(
    form: AdditiveForm, cert: ZeroCertificate, n_small: int, support_cap: int
) -> bool:
    """
    A lifted zero, truncated to n_small digits, is among the brute force zeros.
    """
    truncated = truncate_assignment(cert.assignment, n_small, form)
    return truncated in set(brute_force_zero(form, n_small, support_cap))


def exhaustive_bins(m: int, n: int) -> bool:
    """Every assignment of pairs of n objects to m bins has two disjoint pairs in one bin."""
    return exhaustive_check(n, m).failures == 0


@dataclass(frozen=True)
class ProfileEnumeration:
    """
    Every level profile of s variables in d levels with
    d * (s_0 + ... + s_{k-1}) >= k * s for all k.
    """

    d: int
    s: int

    def __iter__(self) -> Iterator[LevelProfile]:
        yield from self._extend([], 0)

    def _extend(self, prefix: list[int], total: int) -> Iterator[LevelProfile]:
        k = len(prefix)
        if k == self.d - 1:
            profile = LevelProfile(tuple(prefix + [self.s - total]))
            # re-check each emission with the exact test
            if profile.satisfies_normalization():
                yield profile
            return
        for count in range(self.s - total, -1, -1):
            if self.d * (total + count) < (k + 1) * self.s:
                break
            yield from self._extend(prefix + [count], total + count)


def enumerate_profiles(d: int, s: int) -> ProfileEnumeration:
    """Normalized profiles of s variables at degree d."""
    return ProfileEnumeration(d, s)


@dataclass
class CoverageReport:
    """
    Normalized profiles grouped by the strategy dispatch picks.
    """

    d: int
    s: int
    m: int
    e: int
    total: int = 0
    covered_by: Counter = dataclass_field(default_factory=Counter)
    fallback_profiles: list = dataclass_field(default_factory=list)

    def to_dict(self) -> dict:
        """JSON friendly form."""
        return {
            "d": self.d,
            "s": self.s,
            "m": self.m,
            "e": self.e,
            "total": self.total,
            "covered_by": dict(sorted(self.covered_by.items())),
            "fallback_profiles": [list(profile.counts) for profile in self.fallback_profiles],
        }


def dispatch_coverage(d: int, s: int, m: int, e: int) -> CoverageReport:
    """
    Dispatch every normalized profile and count the outcomes.
    """
    report = CoverageReport(d, s, m, e)
    for profile in enumerate_profiles(d, s):
        strategy = dispatch(profile, m, e)
        report.total += 1
        report.covered_by[strategy.kind.value] += 1
        if strategy.level is None:
            report.fallback_profiles.append(profile)

    logger.info(
        "dispatch coverage d=%d s=%d: %d profiles, %d fall back",
        d, s, report.total, len(report.fallback_profiles),
    )
    return report


def random_form(
    field: FieldDescriptor,
    d: int,
    s: int,
    seed: int,
    profile: Optional[LevelProfile] = None,
) -> AdditiveForm:
    """
    Coefficients pi^level * (random unit) from numpy's default_rng(seed).
    Levels follow the profile in order (level 0 first) when given, and are
    drawn uniformly from [0, d) otherwise.
    """
    rng = np.random.default_rng(seed)
    if profile is not None:
        if profile.d != d or profile.s != s:
            raise RamifiedZeroError(
                ErrorCode.INVALID_INPUT, f"profile {profile} does not describe d={d}, s={s}"
            )
        levels = [level for level, count in enumerate(profile.counts) for _ in range(count)]
    else:
        levels = [int(level) for level in rng.integers(0, d, size=s)]

    coeffs = [
        RingHelper.random_element(field, rng, unit=True).shift(level) for level in levels
    ]
    return make_form(field, d, coeffs)


def random_unit_pair(field: FieldDescriptor, rng: np.random.Generator, level: int = 0) -> tuple:
    """Two random coefficients at the same level."""
    return tuple(
        RingHelper.random_element(field, rng, unit=True).shift(level) for _ in range(2)
    )


def ring_agrees(field: FieldDescriptor, a: RingElement, b: RingElement) -> bool:
    """
    The ring's sum, product and valuations against the naive ring.
    """
    ring = NaiveRing(field.e, tuple(field.eisenstein), field.n_pi)
    x, y = ring.element(a.to_literal()), ring.element(b.to_literal())

    def same(element: RingElement, naive: list[int]) -> bool:
        return ring.valuation(ring.sub(ring.element(element.to_literal()), naive)) is None

    def valuation(element: RingElement):
        value = element.valuation()
        return value if is_finite(value) else None

    return (
        same(a + b, ring.add(x, y))
        and same(a * b, ring.mul(x, y))
        and valuation(a * b) == ring.valuation(ring.mul(x, y))
    )
