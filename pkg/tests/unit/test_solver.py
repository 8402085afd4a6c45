# pylint: disable=missing-docstring,line-too-long

import json
import unittest

from src.ramified_zeros.common.errors import ErrorCode, RamifiedZeroError
from src.ramified_zeros.form.form import LevelProfile, make_form
from src.ramified_zeros.oracle.oracle import check_certificate_independently
from src.ramified_zeros.ring.element import RingElement
from src.ramified_zeros.ring.field import make_field
from src.ramified_zeros.solver.config import SolverConfig
from src.ramified_zeros.solver.pipeline import solve
from src.ramified_zeros.solver.search import generic_fallback
from src.ramified_zeros.solver.strategies import (
    AdjacentVariant,
    Strategy,
    StrategyKind,
    dispatch,
    improves_artin_bound,
    rotate_to_level,
    run_strategy,
    solve_adjacent,
    solve_single_level,
    variables_bound,
)


class TestBounds(unittest.TestCase):
    def test_variables_bound(self):
        self.assertEqual(variables_bound(6), 28)
        self.assertEqual(variables_bound(10), 56)
        self.assertEqual(variables_bound(14), 92)
        self.assertTrue(improves_artin_bound(6))

    def test_unsupported_degree(self):
        for d in (2, 4, 8, 12):
            with self.assertRaises(RamifiedZeroError) as context:
                variables_bound(d)
            self.assertEqual(context.exception.error_code, ErrorCode.UNSUPPORTED_DEGREE)


class TestDispatch(unittest.TestCase):
    def test_single_level(self):
        self.assertEqual(dispatch(LevelProfile((10, 0, 0, 0, 0, 0)), 3, 1), Strategy(StrategyKind.SINGLE_LEVEL, 0))
        self.assertEqual(dispatch(LevelProfile((6, 10, 0, 0, 0, 0)), 3, 2), Strategy(StrategyKind.SINGLE_LEVEL, 1))

    def test_adjacent(self):
        self.assertEqual(dispatch(LevelProfile((6, 2, 0, 0, 0, 0)), 3, 1), Strategy(StrategyKind.ADJACENT_BIG, 0))
        self.assertEqual(dispatch(LevelProfile((4, 4, 0, 0, 0, 0)), 3, 1), Strategy(StrategyKind.ADJACENT_FOUR_FOUR, 0))

    def test_wraps_around(self):
        self.assertEqual(dispatch(LevelProfile((2, 0, 0, 0, 0, 6)), 3, 1), Strategy(StrategyKind.ADJACENT_BIG, 5))

    def test_fallback(self):
        strategy = dispatch(LevelProfile((9, 1, 9, 1, 7, 1)), 3, 1)
        self.assertEqual(strategy.kind, StrategyKind.FALLBACK)
        self.assertIsNone(strategy.level)
        self.assertEqual(repr(strategy), "Fallback")

    def test_repr(self):
        self.assertEqual(repr(Strategy(StrategyKind.SINGLE_LEVEL, 0)), "SingleLevel(0)")
        self.assertDictEqual(Strategy(StrategyKind.ADJACENT_BIG, 2).to_dict(), {"kind": "AdjacentBig", "level": 2})


class TestStrategies(unittest.TestCase):
    def setUp(self) -> None:
        self.q2 = make_field(1, [-2])

    def test_rotate_to_level(self):
        form = make_form(self.q2, 6, [2, 4, 1])
        rotated, _ = rotate_to_level(form, 1)
        self.assertTupleEqual(rotated.absolute_levels, (0, 1, 5))

    def test_single_level(self):
        form = make_form(self.q2, 6, [1] * 10)
        result = solve_single_level(form, 0)
        self.assertEqual(result.variable.level, 3)
        self.assertTrue(result.variable.is_finished(1))
        self.assertEqual(len(result.variable.used), 8)

    def test_single_level_precondition(self):
        with self.assertRaises(RamifiedZeroError) as context:
            solve_single_level(make_form(self.q2, 6, [1] * 9), 0)
        self.assertEqual(context.exception.error_code, ErrorCode.STRATEGY_PRECONDITION)

    def test_adjacent_big(self):
        form = make_form(self.q2, 6, [1] * 6 + [2] * 2)
        result = solve_adjacent(form, 0, AdjacentVariant.BIG)
        self.assertTrue(result.variable.is_finished(1))
        self.assertEqual(result.variable.used, frozenset(range(7)))

    def test_adjacent_four_four(self):
        form = make_form(self.q2, 6, [1] * 4 + [2] * 4)
        result = run_strategy(form, Strategy(StrategyKind.ADJACENT_FOUR_FOUR, 0))
        self.assertTrue(result.variable.is_finished(1))
        self.assertEqual(result.variable.used, frozenset([0, 1, 2, 3, 4, 5]))

    def test_adjacent_precondition(self):
        with self.assertRaises(RamifiedZeroError) as context:
            solve_adjacent(make_form(self.q2, 6, [1] * 4 + [2] * 3), 0, AdjacentVariant.FOUR_FOUR)
        self.assertEqual(context.exception.error_code, ErrorCode.STRATEGY_PRECONDITION)

    def test_fallback_is_not_a_lemma_strategy(self):
        with self.assertRaises(RamifiedZeroError) as context:
            run_strategy(make_form(self.q2, 6, [1] * 10), Strategy(StrategyKind.FALLBACK))
        self.assertEqual(context.exception.error_code, ErrorCode.STRATEGY_PRECONDITION)


class TestFallbackSearch(unittest.TestCase):
    def setUp(self) -> None:
        self.sqrt2 = make_field(2, [-2, 0])

    def test_opposite_pair(self):
        a = RingElement.from_coeffs(self.sqrt2, [3, 1])
        outcome = generic_fallback(make_form(self.sqrt2, 6, [a, -a]), 10)
        self.assertTrue(outcome.solved)
        self.assertEqual(outcome.nodes_expanded, 1)
        self.assertTrue(outcome.variable.is_zero)

    def test_zero_budget(self):
        a = RingElement.from_coeffs(self.sqrt2, [3, 1])
        outcome = generic_fallback(make_form(self.sqrt2, 6, [a, -a]), 0)
        self.assertFalse(outcome.solved)
        self.assertEqual(outcome.nodes_expanded, 0)

    def test_no_contractions(self):
        outcome = generic_fallback(make_form(make_field(2, [2, 0]), 6, [[1, 0], [0, 1]]), 100)
        self.assertFalse(outcome.solved)
        self.assertEqual(outcome.nodes_expanded, 0)

    def test_all_ones(self):
        outcome = generic_fallback(make_form(make_field(1, [-2]), 6, [1] * 8), 1000)
        self.assertTrue(outcome.solved)
        self.assertGreaterEqual(outcome.variable.level, 3)


class TestSolverConfig(unittest.TestCase):
    def test_defaults(self):
        config = SolverConfig()
        self.assertEqual(config.working_precision(2), 32)
        self.assertEqual(config.target_precision(1, 24), 12)
        self.assertEqual(config.target_precision(2, 10), 10)
        self.assertEqual(SolverConfig(n_target=30).target_precision(1, 24), 30)
        self.assertEqual(SolverConfig(precision=50).working_precision(1), 50)

    def test_validation(self):
        with self.assertRaises(RamifiedZeroError):
            SolverConfig(budget=-1)
        with self.assertRaises(RamifiedZeroError):
            SolverConfig(max_hensel_iterations=0)

    def test_to_json(self):
        self.assertEqual(json.loads(SolverConfig(seed=3).to_json())["seed"], 3)
        self.assertIn("budget=", repr(SolverConfig()))


class TestSolve(unittest.TestCase):
    def setUp(self) -> None:
        self.q2 = make_field(1, [-2])

    def test_all_ones(self):
        form = make_form(self.q2, 6, [1] * 28)
        report = solve(form)
        self.assertTrue(report.solved)
        self.assertEqual(report.rotation, 0)
        self.assertEqual(report.strategy, Strategy(StrategyKind.SINGLE_LEVEL, 0))
        self.assertFalse(report.used_fallback)
        self.assertEqual(report.variables_bound, 28)
        self.assertTrue(form.verify_certificate(report.certificate).passed)
        self.assertTrue(check_certificate_independently(form, report.certificate))
        self.assertEqual(report.certificate.n_target, 12)
        self.assertEqual(report.free_level_mismatches, 0)

    def test_rotated_form(self):
        form = make_form(self.q2, 6, [2] * 10)
        report = solve(form)
        self.assertEqual(report.rotation, 5)
        self.assertEqual(report.strategy, Strategy(StrategyKind.SINGLE_LEVEL, 0))
        self.assertTrue(report.solved)
        self.assertTrue(form.verify_certificate(report.certificate).passed)

    def test_adjacent_form(self):
        form = make_form(self.q2, 6, [1] * 6 + [2] * 2)
        report = solve(form)
        self.assertEqual(report.strategy.kind, StrategyKind.ADJACENT_BIG)
        self.assertTrue(report.solved)
        self.assertTrue(form.verify_certificate(report.certificate).passed)

    def test_unsolved(self):
        form = make_form(make_field(2, [2, 0]), 6, [[1, 0], [0, 1]])
        report = solve(form)
        self.assertFalse(report.solved)
        self.assertTrue(report.used_fallback)
        self.assertEqual(report.to_dict(form)["certificate"], "Unsolved")

    def test_report_layout(self):
        form = make_form(self.q2, 6, [1] * 10)
        report = solve(form, SolverConfig(n_target=20))
        payload = report.to_dict(form)
        self.assertNotIn("wall_time", payload)
        self.assertIn("wall_time", report.to_dict(form, timing=True))
        self.assertEqual(payload["certificate"]["n_target"], 20)
        achieved = payload["certificate"]["valuation_achieved"]
        self.assertTrue(achieved == "AtLeastPrecision" or achieved >= 20)
        self.assertEqual(len(payload["contraction_log"]), 7)
        self.assertEqual(json.loads(report.to_json(form)), payload)

    def test_identical_runs(self):
        form = make_form(self.q2, 6, [1] * 12)
        self.assertEqual(solve(form).to_json(form), solve(form).to_json(form))

    def test_unsupported_degree(self):
        with self.assertRaises(RamifiedZeroError) as context:
            solve(make_form(self.q2, 4, [1] * 10))
        self.assertEqual(context.exception.error_code, ErrorCode.UNSUPPORTED_DEGREE)
