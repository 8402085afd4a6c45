# pylint: disable=missing-docstring,line-too-long

import unittest

from src.ramified_zeros.common.custom_typing import AT_LEAST_PRECISION, is_finite
from src.ramified_zeros.common.errors import ErrorCode, RamifiedZeroError
from src.ramified_zeros.form.form import make_form
from src.ramified_zeros.ring.element import RingElement
from src.ramified_zeros.ring.field import make_field
from src.ramified_zeros.solver.hensel import hensel_lift, hensel_lift_traced, hensel_threshold


class TestHensel(unittest.TestCase):
    def setUp(self) -> None:
        self.q2 = make_field(1, [-2])
        self.one = RingElement.one(self.q2)

    def test_threshold(self):
        form = make_form(make_field(2, [-2, 0]), 6, [[1, 0], [0, 1]])
        self.assertEqual(hensel_threshold(form, 0), 5)
        self.assertEqual(hensel_threshold(form, 1), 7)

    def test_all_ones(self):
        form = make_form(self.q2, 6, [1] * 8)
        cert = hensel_lift(form, (self.one,) * 8, 0, 16)
        self.assertTrue(form.verify_certificate(cert).passed)
        self.assertListEqual(list(cert.assignment[1:]), [self.one] * 7)

    def test_sixth_root_of_minus_seven(self):
        form = make_form(self.q2, 6, [1, 7])
        cert, trace = hensel_lift_traced(form, (self.one, self.one), 0, 16)
        t = cert.assignment[0]
        residue = t**6 + RingElement.from_int(self.q2, 7)
        self.assertGreaterEqual(residue.valuation(), 16)
        # t stays congruent to the start mod pi^(e + 1)
        self.assertGreaterEqual((t - self.one).valuation(), 2)
        self.assertEqual(trace[0], 3)

    def test_trace_increases(self):
        form = make_form(self.q2, 6, [1, 7])
        _, trace = hensel_lift_traced(form, (self.one, self.one), 0, self.q2.n_pi)
        finite = [value for value in trace if is_finite(value)]
        self.assertListEqual(finite, sorted(set(finite)))
        self.assertTrue(trace[-1] == AT_LEAST_PRECISION or trace[-1] >= self.q2.n_pi)

    def test_already_lifted(self):
        form = make_form(self.q2, 6, [1, -1])
        assignment = (self.one, self.one)
        cert, trace = hensel_lift_traced(form, assignment, 1, 20)
        self.assertTupleEqual(cert.assignment, assignment)
        self.assertListEqual(trace, [AT_LEAST_PRECISION])

    def test_below_threshold(self):
        form = make_form(self.q2, 6, [1, 1])
        with self.assertRaises(RamifiedZeroError) as context:
            hensel_lift(form, (self.one, self.one), 0, 10)
        self.assertEqual(context.exception.error_code, ErrorCode.HENSEL_PRECONDITION_FAILED)

    def test_pivot_not_unit(self):
        form = make_form(self.q2, 6, [1] * 8)
        two = RingElement.from_int(self.q2, 2)
        with self.assertRaises(RamifiedZeroError) as context:
            hensel_lift(form, (two,) + (self.one,) * 7, 0, 10)
        self.assertEqual(context.exception.error_code, ErrorCode.HENSEL_PRECONDITION_FAILED)

    def test_target_above_precision(self):
        form = make_form(self.q2, 6, [1] * 8)
        with self.assertRaises(RamifiedZeroError) as context:
            hensel_lift(form, (self.one,) * 8, 0, self.q2.n_pi + 1)
        self.assertEqual(context.exception.error_code, ErrorCode.PRECISION_EXHAUSTED)

    def test_length_mismatch(self):
        form = make_form(self.q2, 6, [1] * 8)
        with self.assertRaises(RamifiedZeroError) as context:
            hensel_lift(form, (self.one,) * 7, 0, 10)
        self.assertEqual(context.exception.error_code, ErrorCode.LENGTH_MISMATCH)
