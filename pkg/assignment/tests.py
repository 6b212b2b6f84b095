from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from assignment.matching import assignment_valuation, brute_force_assignment, eval_assignment
from assignment.matrix import Assignment, WeightMatrix
from assignment.monotone import (
    check_hat,
    check_monotone_W,
    closed_form_eval,
    closed_form_valuation,
    complete_hat,
    hat_sums,
    random_hat_matrix,
)
from assignment.parameterize import EXCLUDE_K, case1_weight_matrix, case1i_weight_matrix
from checks.properties import is_substitute
from speckled.dimension import affine_dimension
from valcore.bundles import mask_of
from valcore.exceptions import ConditionError, UsageError
from valcore.operators import aggregate, single_unit, to_interaction

W51 = WeightMatrix.of([
    [32, 35, 25, 26, 22],
    [24, 30, 20, 21, 19],
    [16, 22, 14, 16, 14],
    [9, 15, 7, 9, 9],
    [2, 8, 1, 4, 5],
])


def goods(*numbers):
    return mask_of(g - 1 for g in numbers)


def random_matrix(rng, n, k, high=10):
    return WeightMatrix.of(rng.integers(0, high, size=(n, k)).tolist())


class WeightMatrixTests(SimpleTestCase):
    def test_negative_entry_rejected(self):
        with self.assertRaises(UsageError):
            WeightMatrix.of([[1, -1]])

    def test_ragged_rows_rejected(self):
        with self.assertRaises(UsageError):
            WeightMatrix.of([[1, 2], [3]])

    def test_assignment_cannot_reuse_a_good(self):
        with self.assertRaises(UsageError):
            Assignment((0, 0))

    def test_upper_zeroes_lower_triangle(self):
        hat = W51.upper()
        self.assertEqual(hat.rows[4], (0, 0, 0, 0, 5))
        self.assertEqual(hat.rows[0], W51.rows[0])


class EvalAssignmentTests(SimpleTestCase):
    def test_empty_bundle(self):
        value, sigma = eval_assignment(W51, 0)
        self.assertEqual(value, 0)
        self.assertEqual(sigma.sigma, (None,) * 5)

    def test_first_two_goods(self):
        value, sigma = eval_assignment(W51, goods(1, 2))
        self.assertEqual(value, 62)
        self.assertEqual(sigma.sigma, (0, 1, None, None, None))
        self.assertEqual(str(sigma), "(1,2,△,△,△)")

    def test_three_goods_lexicographic_tie(self):
        value, sigma = eval_assignment(W51, goods(2, 4, 5))
        self.assertEqual(value, 70)
        self.assertEqual(sigma.sigma, (1, 3, 4, None, None))
        self.assertEqual(sigma.weight(W51), 70)

    def test_matches_brute_force_on_every_bundle(self):
        for mask in range(1, 32):
            self.assertEqual(eval_assignment(W51, mask), brute_force_assignment(W51, mask), mask)

    def test_matches_brute_force_on_random_rectangles(self):
        rng = np.random.Generator(np.random.PCG64(11))
        for n, k in [(2, 4), (4, 2), (3, 3), (5, 4)]:
            matrix = random_matrix(rng, n, k, high=6)
            for mask in range(1 << k):
                value, sigma = eval_assignment(matrix, mask)
                self.assertEqual((value, sigma), brute_force_assignment(matrix, mask))
                self.assertEqual(sigma.weight(matrix), value)

    def test_fractional_weights_stay_exact(self):
        matrix = WeightMatrix.of([["1/3", "1/2"], ["1/2", "1/3"]])
        value, _ = eval_assignment(matrix, 3)
        self.assertEqual(str(value), "1")

    def test_bundle_outside_goods(self):
        with self.assertRaises(UsageError):
            eval_assignment(W51, 1 << 5)


class AssignmentValuationTests(SimpleTestCase):
    def test_single_row_is_single_unit(self):
        matrix = WeightMatrix.of([[4, 1, 7]])
        self.assertEqual(assignment_valuation(matrix), single_unit([4, 1, 7]))

    def test_equals_aggregated_rows(self):
        rng = np.random.Generator(np.random.PCG64(3))
        for _ in range(5):
            matrix = random_matrix(rng, 3, 4)
            expected = single_unit(matrix.rows[0])
            for row in matrix.rows[1:]:
                expected = aggregate(expected, single_unit(row))
            self.assertEqual(assignment_valuation(matrix), expected)

    def test_table_matches_matching(self):
        rng = np.random.Generator(np.random.PCG64(5))
        matrix = random_matrix(rng, 4, 4)
        v = assignment_valuation(matrix)
        for mask in range(16):
            self.assertEqual(v(mask), eval_assignment(matrix, mask)[0])

    def test_assignment_valuations_are_substitutes(self):
        rng = np.random.Generator(np.random.PCG64(8))
        for _ in range(20):
            n, k = int(rng.integers(1, 5)), int(rng.integers(2, 5))
            self.assertTrue(is_substitute(assignment_valuation(random_matrix(rng, n, k))))


class MonotoneConditionTests(SimpleTestCase):
    def test_example_matrix_is_monotone(self):
        self.assertTrue(check_monotone_W(W51))

    def test_example_hat_matrix(self):
        hat = W51.upper()
        self.assertTrue(check_hat(hat))
        self.assertEqual(hat_sums(hat), [10, 13, 3, 5])
        self.assertFalse(check_hat(W51))

    def test_raised_corner_breaks_condition_three(self):
        broken = W51.upper().replace(5, 5, 10)
        report = check_hat(broken)
        self.assertFalse(report)
        self.assertIn("3^", report.conditions())

    def test_increasing_column_breaks_condition_two(self):
        report = check_monotone_W(W51.replace(2, 1, 40))
        self.assertIn("2", report.conditions())

    def test_non_square_rejected(self):
        with self.assertRaises(UsageError):
            check_hat(WeightMatrix.of([[1, 2, 3], [0, 1, 2]]))


class ClosedFormTests(SimpleTestCase):
    def test_single_good(self):
        self.assertEqual(closed_form_eval(W51, goods(2)), 35)

    def test_all_goods(self):
        self.assertEqual(closed_form_eval(W51, goods(1, 2, 3, 4, 5)), 90)
        self.assertEqual(eval_assignment(W51, goods(1, 2, 3, 4, 5))[0], 90)

    def test_hat_matrix_agrees_with_matching(self):
        hat = W51.upper()
        for mask in range(1, 32):
            self.assertEqual(closed_form_eval(hat, mask), eval_assignment(hat, mask)[0])

    def test_random_hat_matrices_agree_with_matching(self):
        rng = np.random.Generator(np.random.PCG64(21))
        for k in range(2, 7):
            for _ in range(4):
                hat = random_hat_matrix(k, rng)
                self.assertTrue(check_hat(hat))
                self.assertEqual(closed_form_valuation(hat), assignment_valuation(hat))

    def test_precondition(self):
        with self.assertRaises(ConditionError):
            closed_form_eval(WeightMatrix.of([[1, 5], [2, 0]]), 3)

    def test_free_parameter_count(self):
        rng = np.random.Generator(np.random.PCG64(2))
        for k in range(1, 6):
            base = random_hat_matrix(k, rng, strict=True)
            points = [closed_form_valuation(base)]
            for i in range(1, k + 1):
                for g in range(i, k + 1):
                    moved = base.replace(i, g, base.w(i, g) + Fraction(1, 2))
                    self.assertTrue(check_hat(moved))
                    points.append(closed_form_valuation(moved))
            self.assertEqual(affine_dimension(points), k * (k + 1) // 2)


class CompleteHatTests(SimpleTestCase):
    def test_example_completion(self):
        full = complete_hat(W51.upper())
        self.assertTrue(check_monotone_W(full))
        self.assertEqual(list(full.rows[4]), [10, 13, 3, 5, 5])
        self.assertEqual(full.w(5, 4), 5)
        self.assertEqual(full.w(4, 3), 7)
        self.assertEqual(full.w(5, 3), 3)
        self.assertEqual(list(full.rows[4][:4]), hat_sums(W51.upper()))

    def test_completion_keeps_valuation(self):
        hat = W51.upper()
        self.assertEqual(assignment_valuation(complete_hat(hat)), assignment_valuation(hat))

    def test_completed_matrix_is_fixed(self):
        full = complete_hat(W51.upper())
        self.assertEqual(complete_hat(full), full)

    def test_random_completions_are_monotone(self):
        rng = np.random.Generator(np.random.PCG64(4))
        for k in range(2, 6):
            hat = random_hat_matrix(k, rng)
            self.assertTrue(check_monotone_W(complete_hat(hat)))

    def test_precondition(self):
        with self.assertRaises(ConditionError):
            complete_hat(W51.upper().replace(5, 5, 10))


class ParameterizationTests(SimpleTestCase):
    def test_main_subcase_interactions(self):
        matrix = case1_weight_matrix(1, 2, 3, 3, 4, 5, (10, 10, 10, 10))
        self.assertEqual(matrix.rows[3], (0, 0, 5, 0))
        f = to_interaction(assignment_valuation(matrix))
        self.assertEqual(f(goods(1, 2, 3)), 4)
        self.assertEqual(f(goods(1, 2, 4)), 4)
        self.assertEqual(f(goods(1, 3, 4)), 5)
        self.assertEqual(f(goods(2, 3, 4)), 6)
        self.assertEqual(f(goods(1, 2, 3, 4)), 9)
        self.assertEqual([f(goods(1, x)) for x in (2, 3, 4)], [1, 1, 1])
        self.assertEqual([f(goods(2, 3)), f(goods(2, 4)), f(goods(3, 4))], [2, 2, 3])

    def test_main_subcase_constraints(self):
        with self.assertRaises(ConditionError):
            case1_weight_matrix(2, 1, 3, 3, 4, 5, (10, 10, 10, 10))
        with self.assertRaises(ConditionError):
            case1_weight_matrix(1, 2, 3, 3, 4, 5, (10, 10, 4, 10))

    def test_other_parameterizations_are_substitutes(self):
        for matrix in (
            case1_weight_matrix(1, 2, 3, 5, 4, 6, (10, 10, 10, 10), subcase=EXCLUDE_K),
            case1i_weight_matrix(1, 2, 3, 2, 4, 5, (10, 10, 10, 10)),
        ):
            self.assertTrue(is_substitute(assignment_valuation(matrix)))
