from collections import Counter
from fractions import Fraction
from itertools import permutations

import numpy as np
from django.test import SimpleTestCase

from assignment.matching import assignment_valuation
from assignment.matrix import WeightMatrix
from assignment.parameterize import case1_weight_matrix, case1i_weight_matrix
from checks.properties import check_valuation
from generator.algorithm import generate
from generator.sampling import SUM_UNIFORM, UNIFORM, GenConfig
from geometry.constraints import AffineForm, primitive, rref, theta_form
from geometry.k3 import K3Params, classify_k3, k3_valuation
from geometry.k4 import (
    CASE1,
    CASE2,
    MAIN,
    NO,
    YES,
    census_k4,
    classify_k4,
    descriptor,
    is_assignment_k4,
)
from geometry.sampling import descriptor_dimension, interior_points
from valcore.bundles import mask_of
from valcore.exceptions import ConditionError, UsageError
from valcore.operators import from_interaction
from valcore.valuation import InteractionFunction, Valuation


def from_pairs(pairs, minus, top, mu):
    """Four-good valuation from δ per pair, θ of each three-good bundle (by missing good), θ(1234) and mu."""
    theta = [0] * 16
    for (i, j), x in pairs.items():
        theta[mask_of((i - 1, j - 1))] = x
    for g, t in minus.items():
        theta[15 ^ 1 << (g - 1)] = t
    theta[15] = top
    return from_interaction(InteractionFunction(4, tuple(theta), tuple(mu)))


VERTEX_AT_ONE = from_pairs(
    {(1, 2): 1, (1, 3): 1, (1, 4): 1, (2, 3): 2, (2, 4): 2, (3, 4): 3},
    {1: 6, 2: 5, 3: 4, 4: 4},
    8,
    (4, 4, 4, 4),
)

FOUR_CYCLE = from_pairs(
    {(1, 2): 1, (2, 3): 1, (3, 4): 1, (1, 4): 1, (1, 3): 5, (2, 4): 5},
    {1: 6, 2: 6, 3: 6, 4: 6},
    11,
    (10, 10, 10, 10),
)


class ConstraintTests(SimpleTestCase):
    def test_theta_form_matches_definition(self):
        v = Valuation(3, (0, 2, 3, 4, 3, 4, 4, 4))
        self.assertEqual(theta_form(3, 0b011).at(v), 1)
        self.assertEqual(theta_form(3, 0b110).at(v), 2)
        self.assertEqual(theta_form(3, 0b111).at(v), 4)

    def test_form_arithmetic(self):
        x = AffineForm.coordinate(1, 1)
        form = 2 * x - x + 3
        self.assertEqual(form.at(Valuation(1, (0, 5))), 8)

    def test_rref_drops_dependent_rows(self):
        rows, pivots = rref([[1, 2, 0], [2, 4, 0], [0, 1, 1]])
        self.assertEqual(len(rows), 2)
        self.assertEqual(pivots, [0, 1])

    def test_primitive(self):
        self.assertEqual(primitive([Fraction(1, 2), Fraction(-3, 4), 0]), (2, -3, 0))
        self.assertIsNone(primitive([0, 0]))


class K3Tests(SimpleTestCase):
    def test_three_goods_table(self):
        v = k3_valuation(K3Params((1, 2, 3), 1, 2, 4, (2, 3, 3)))
        self.assertEqual(v.table, (0, 2, 3, 4, 3, 4, 4, 4))
        self.assertTrue(check_valuation(v).substitute)
        self.assertEqual(classify_k3(v), {"δ12=δ13"})

    def test_zero_parameters_give_linear(self):
        v = k3_valuation(K3Params((1, 2, 3), 0, 0, 0, (1, 2, 3)))
        self.assertEqual(v, Valuation.linear((1, 2, 3)))
        self.assertEqual(classify_k3(v), {"δ12=δ13", "δ12=δ23", "δ13=δ23"})

    def test_a_above_b_rejected(self):
        with self.assertRaises(ConditionError):
            K3Params((1, 2, 3), 2, 1, 5, (9, 9, 9))

    def test_mu_too_small_rejected(self):
        with self.assertRaises(ConditionError):
            K3Params((1, 2, 3), 1, 2, 4, (1, 3, 3))

    def test_every_vertex(self):
        expected = {1: "δ12=δ13", 2: "δ12=δ23", 3: "δ13=δ23"}
        for perm in permutations((1, 2, 3)):
            v = k3_valuation(K3Params(perm, 1, 3, 5, (4, 4, 4)))
            self.assertTrue(check_valuation(v).substitute)
            self.assertEqual(classify_k3(v), {expected[perm[0]]})

    def test_non_substitute_rejected(self):
        with self.assertRaises(ConditionError):
            classify_k3(Valuation(3, (0, 1, 1, 3, 1, 2, 2, 3)))

    def test_wrong_size(self):
        with self.assertRaises(UsageError):
            classify_k3(Valuation.zero(4))


class CensusTests(SimpleTestCase):
    def test_seventy_five_polyhedra(self):
        census = census_k4()
        self.assertEqual(len(census), 75)
        self.assertEqual(Counter(d.case for d in census), {CASE1: 60, CASE2: 15})

    def test_six_independent_equalities(self):
        for d in census_k4():
            self.assertEqual(d.equality_rank(), 6, d.name)

    def test_each_polyhedron_is_ten_dimensional(self):
        for d in census_k4():
            self.assertEqual(descriptor_dimension(d), 10, d.name)

    def test_interior_points_classify_back(self):
        for n, d in enumerate(census_k4()):
            v = interior_points(d, seed=n)[0]
            found = classify_k4(v)
            self.assertIn(d, found)
            self.assertEqual(is_assignment_k4(v), YES if d.case == CASE1 else NO, d.name)

    def test_swapping_k_and_l_keeps_case1_main(self):
        self.assertEqual(descriptor(CASE1, MAIN, (0, 1, 2, 3)).key, descriptor(CASE1, MAIN, (0, 1, 3, 2)).key)
        self.assertNotEqual(descriptor(CASE1, MAIN, (0, 1, 2, 3)).key, descriptor(CASE1, MAIN, (1, 0, 2, 3)).key)

    def test_describe_lists_constraints(self):
        text = descriptor(CASE1, MAIN, (0, 1, 2, 3)).describe()
        self.assertIn("case 1 main (i,j,k,l)=(1,2,3,4)", text)
        self.assertIn("θ−3 = θ−4", text)

    def test_bad_labeling(self):
        with self.assertRaises(UsageError):
            descriptor(CASE1, MAIN, (0, 0, 1, 2))


class ClassifyK4Tests(SimpleTestCase):
    def test_vertex_at_good_one(self):
        self.assertTrue(check_valuation(VERTEX_AT_ONE).substitute)
        self.assertEqual(VERTEX_AT_ONE(0b0111), 8)
        found = classify_k4(VERTEX_AT_ONE)
        self.assertTrue(any(d.case == CASE1 and d.subcase == MAIN and d.labeling[:2] == (0, 1) for d in found))
        self.assertEqual(is_assignment_k4(VERTEX_AT_ONE), YES)

    def test_four_cycle_is_case2_only(self):
        self.assertTrue(check_valuation(FOUR_CYCLE).substitute)
        found = classify_k4(FOUR_CYCLE)
        self.assertTrue(found)
        self.assertTrue(all(d.case == CASE2 for d in found))
        self.assertIn(descriptor(CASE2, MAIN, (0, 1, 2, 3)), found)
        self.assertEqual(is_assignment_k4(FOUR_CYCLE), NO)

    def test_linear_is_assignment(self):
        self.assertEqual(is_assignment_k4(Valuation.linear((3, 1, 4, 1))), YES)

    def test_case1_weight_matrix_lands_in_main(self):
        v = assignment_valuation(case1_weight_matrix(1, 2, 3, 3, 4, 5, (10, 10, 10, 10)))
        found = classify_k4(v)
        self.assertIn(descriptor(CASE1, MAIN, (0, 1, 2, 3)), found)

    def test_case1i_weight_matrix_is_assignment(self):
        v = assignment_valuation(case1i_weight_matrix(1, 2, 3, 2, 4, 5, (10, 10, 10, 10)))
        self.assertEqual(is_assignment_k4(v), YES)

    def test_random_assignment_valuations_are_case1(self):
        rng = np.random.Generator(np.random.PCG64(4))
        for trial in range(60):
            n = int(rng.integers(1, 5))
            matrix = WeightMatrix.of(rng.integers(0, 10, size=(n, 4)).tolist())
            self.assertEqual(is_assignment_k4(assignment_valuation(matrix)), YES, trial)

    def test_generated_valuations_are_covered(self):
        for seed in range(80):
            model = UNIFORM if seed % 2 else SUM_UNIFORM
            v, _, _ = generate(GenConfig(4, model=model, m=4, seed=seed))
            self.assertTrue(classify_k4(v), seed)

    def test_non_substitute_rejected(self):
        with self.assertRaises(ConditionError):
            classify_k4(Valuation.from_function(4, lambda m: 10 if m == 15 else 0))

    def test_wrong_size(self):
        with self.assertRaises(UsageError):
            is_assignment_k4(Valuation.zero(3))
