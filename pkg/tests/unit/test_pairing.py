# pylint: disable=missing-docstring,line-too-long

import unittest

import numpy as np

from src.ramified_zeros.common.errors import ErrorCode, RamifiedZeroError
from src.ramified_zeros.pairing.bins import (
    BinAssignment,
    all_pairs,
    counting_consistent,
    disjoint_pair_indices,
    exhaustive_check,
    extremal_assignment,
    find_disjoint_same_bin,
    iter_assignments,
    max_pairs_bound,
    random_assignment,
    random_check,
)


class TestBinAssignment(unittest.TestCase):
    def test_all_pairs(self):
        self.assertTupleEqual(all_pairs(3), ((0, 1), (0, 2), (1, 2)))
        self.assertEqual(len(all_pairs(6)), 15)

    def test_disjoint_pair_indices(self):
        rows = disjoint_pair_indices(4)
        pairs = all_pairs(4)
        self.assertEqual(rows.shape, (3, 2))
        for p, q in rows:
            self.assertFalse(set(pairs[p]) & set(pairs[q]))

    def test_validation(self):
        with self.assertRaises(RamifiedZeroError) as context:
            BinAssignment(4, 2, (0, 1))
        self.assertEqual(context.exception.error_code, ErrorCode.INVALID_INPUT)

        with self.assertRaises(RamifiedZeroError):
            BinAssignment(3, 2, (0, 1, 2))

        with self.assertRaises(RamifiedZeroError):
            BinAssignment.from_mapping(3, 2, {(0, 1): 0, (1, 2): 1})

    def test_from_mapping(self):
        assignment = BinAssignment.from_mapping(3, 2, {(1, 0): 1, (0, 2): 0, (2, 1): 1})
        self.assertTupleEqual(assignment.bins, (1, 0, 1))
        self.assertEqual(assignment.bin_of((2, 1)), 1)
        self.assertListEqual(assignment.pairs_in_bin(1), [(0, 1), (1, 2)])
        self.assertDictEqual(assignment.to_dict()["bins"], {"0,1": 1, "0,2": 0, "1,2": 1})


class TestDisjointPairs(unittest.TestCase):
    def test_single_bin(self):
        assignment = BinAssignment(4, 1, (0,) * 6)
        self.assertEqual(find_disjoint_same_bin(assignment), (((0, 1), (2, 3)), 0))

    def test_smallest_bin_wins(self):
        mapping = {pair: 1 for pair in all_pairs(5)}
        mapping[(0, 1)] = 0
        mapping[(2, 4)] = 0
        assignment = BinAssignment.from_mapping(5, 2, mapping)
        self.assertEqual(find_disjoint_same_bin(assignment), (((0, 1), (2, 4)), 0))

    def test_extremal_has_no_disjoint_pairs(self):
        for m in range(1, 9):
            assignment = extremal_assignment(m)
            self.assertEqual(assignment.n, m + 2)
            self.assertIsNone(find_disjoint_same_bin(assignment))
            self.assertTrue(counting_consistent(assignment))

    def test_extremal_shape(self):
        assignment = extremal_assignment(3)
        self.assertListEqual(assignment.pairs_in_bin(0), [(0, 1), (0, 2), (0, 3), (0, 4)])
        self.assertListEqual(assignment.pairs_in_bin(2), [(2, 3), (2, 4), (3, 4)])

    def test_max_pairs_bound(self):
        self.assertListEqual([max_pairs_bound(m) for m in (1, 2, 3)], [3, 7, 12])
        with self.assertRaises(RamifiedZeroError):
            max_pairs_bound(0)

    def test_iter_assignments(self):
        self.assertEqual(sum(1 for _ in iter_assignments(3, 2)), 4)
        self.assertEqual(sum(1 for _ in iter_assignments(3, 2, pruned=False)), 8)
        for assignment in iter_assignments(4, 2):
            self.assertTrue(counting_consistent(assignment))


class TestBinsCheck(unittest.TestCase):
    def test_exhaustive_small(self):
        for m, n in ((1, 4), (2, 5)):
            result = exhaustive_check(n, m)
            self.assertEqual(result.checked, m ** len(all_pairs(n)))
            self.assertEqual(result.failures, 0)
            self.assertIsNone(result.first_failure)

    def test_exhaustive_three_bins(self):
        result = exhaustive_check(6, 3, workers=2)
        self.assertEqual(result.checked, 3**15)
        self.assertEqual(result.failures, 0)

    def test_exhaustive_agrees_with_iteration(self):
        failures = sum(1 for a in iter_assignments(4, 2, pruned=False) if find_disjoint_same_bin(a) is None)
        result = exhaustive_check(4, 2)
        self.assertEqual(result.failures, failures)
        self.assertGreater(result.failures, 0)
        self.assertIsNone(find_disjoint_same_bin(result.first_failure))

    def test_random(self):
        for m in range(4, 9):
            result = random_check(m + 3, m, 2000, seed=m)
            self.assertEqual(result.checked, 2000)
            self.assertEqual(result.failures, 0)

    def test_random_is_reproducible(self):
        rng_a, rng_b = np.random.default_rng(4), np.random.default_rng(4)
        self.assertEqual(random_assignment(6, 3, rng_a), random_assignment(6, 3, rng_b))
        self.assertEqual(random_check(5, 3, 500, 9), random_check(5, 3, 500, 9))

    def test_sweeps_reject_empty_bin_set(self):
        for check in (lambda: exhaustive_check(5, 0), lambda: random_check(5, 0, 10, 1), lambda: exhaustive_check(-1, 2)):
            with self.assertRaises(RamifiedZeroError) as context:
                check()
            self.assertEqual(context.exception.error_code, ErrorCode.INVALID_INPUT)
