import math
from fractions import Fraction
from itertools import combinations

from django.test import SimpleTestCase

from checks.local import sample_local_checks
from checks.oracle import oracle_definition
from checks.properties import check_valuation
from speckled.codes import CodeFamily, code_violations, graham_sloane_code
from speckled.construct import (
    InversionError,
    SpeckleSpec,
    build_speckled,
    cube_vertex_specs,
    invert_speckled,
    random_spec,
    zero_spec,
)
from speckled.dimension import affine_dimension, rank, structural_dimension
from speckled.serializers import SpeckleSpecSerializer
from valcore.bundles import mask_of, popcount
from valcore.exceptions import UsageError
from valcore.valuation import Valuation


class GrahamSloaneCodeTests(SimpleTestCase):
    def test_four_goods(self):
        code = graham_sloane_code(4)
        self.assertEqual(len(code), 2)
        self.assertEqual(code.members, (6, 9))
        self.assertEqual(code.residues, {2: 1})

    def test_three_goods(self):
        code = graham_sloane_code(3)
        self.assertEqual(code.members, (3,))

    def test_size_bound(self):
        for k in range(3, 17):
            self.assertGreaterEqual(len(graham_sloane_code(k)), math.ceil((2 ** (k - 1) - 2) / k), k)

    def test_sixteen_goods(self):
        self.assertGreaterEqual(len(graham_sloane_code(16)), 2048)

    def test_distance_and_weight_exhaustive(self):
        for k in range(3, 13):
            code = graham_sloane_code(k)
            self.assertEqual(code_violations(code), [], k)
            for mask in code.members:
                self.assertEqual(popcount(mask) % 2, 0)
                self.assertTrue(2 <= popcount(mask) <= k - 1)

    def test_membership_matches_listing(self):
        code = graham_sloane_code(7)
        listed = set(code.members)
        self.assertEqual({m for m in range(1 << 7) if m in code}, listed)

    def test_too_few_goods(self):
        with self.assertRaises(UsageError):
            graham_sloane_code(2)


class ExplicitCodeTests(SimpleTestCase):
    def test_close_codewords_rejected(self):
        with self.assertRaises(UsageError):
            CodeFamily.explicit(4, [3, 5])

    def test_odd_weight_rejected(self):
        with self.assertRaises(UsageError):
            CodeFamily.explicit(4, [7])

    def test_valid_code(self):
        code = CodeFamily.explicit(4, [3, 12])
        self.assertEqual(code.members, (3, 12))
        self.assertIn(12, code)
        self.assertNotIn(6, code)


class BuildSpeckledTests(SimpleTestCase):
    def test_all_specks_off(self):
        k = 5
        v = build_speckled(zero_spec(k, CodeFamily.explicit(k, [])))
        for mask in range(1 << k):
            n = popcount(mask)
            self.assertEqual(v(mask), (3 * k - 1) * n - Fraction(3 * n * (n - 1), 2))

    def test_small_explicit_code(self):
        code = CodeFamily.explicit(4, [3, 12])
        for seed in range(5):
            spec = random_spec(4, code, seed)
            v = build_speckled(spec)
            self.assertTrue(check_valuation(v).substitute)
            self.assertEqual(invert_speckled(v, code), spec)

    def test_six_goods_checker_and_oracle(self):
        code = graham_sloane_code(6)
        for seed in range(12):
            spec = random_spec(6, code, seed)
            v = build_speckled(spec)
            self.assertTrue(check_valuation(v).substitute)
            self.assertTrue(oracle_definition(v, trials=20, seed=seed))
            self.assertEqual(invert_speckled(v, code), spec)

    def test_larger_dense_instances(self):
        for k in (8, 10):
            code = graham_sloane_code(k)
            self.assertTrue(check_valuation(build_speckled(random_spec(k, code, seed=k))).substitute)

    def test_lazy_beyond_sixteen_goods(self):
        code = graham_sloane_code(18)
        v = build_speckled(random_spec(18, code, seed=1))
        self.assertTrue(v.lazy)
        report = sample_local_checks(v, samples=3000, seed=2)
        self.assertTrue(report.substitute)
        self.assertEqual(report.sampled, 3000)

    def test_parameters_outside_unit_interval(self):
        code = CodeFamily.explicit(3, [])
        with self.assertRaises(UsageError):
            SpeckleSpec(3, (0, 0, 2), (0, 0, 0, 0), {}, code)

    def test_gamma_must_match_code(self):
        code = CodeFamily.explicit(4, [3, 12])
        with self.assertRaises(UsageError):
            SpeckleSpec(4, (0,) * 4, (0,) * 5, {3: 0}, code)

    def test_serializer_counts_parameters(self):
        code = graham_sloane_code(6)
        data = SpeckleSpecSerializer(random_spec(6, code)).data
        self.assertEqual(data["parameters"], 2 * 6 - 1 + len(code))
        self.assertEqual(len(data["gamma"]), len(code))


class InvertSpeckledTests(SimpleTestCase):
    def test_empty_code(self):
        code = CodeFamily.explicit(4, [])
        spec = random_spec(4, code, seed=9)
        back = invert_speckled(build_speckled(spec), code)
        self.assertEqual(back.gamma, {})
        self.assertEqual(back, spec)

    def test_perturbed_entry_is_detected(self):
        code = graham_sloane_code(4)
        v = build_speckled(random_spec(4, code, seed=3))
        table = list(v.table)
        table[3] += Fraction(1, 2)
        with self.assertRaises(InversionError):
            invert_speckled(Valuation(4, tuple(table)), code)


class DimensionTests(SimpleTestCase):
    def test_single_valuation(self):
        self.assertEqual(affine_dimension([Valuation.zero(3)]), 0)

    def test_two_unit_vectors(self):
        vs = [Valuation(2, (0, 0, 0, 0)), Valuation(2, (0, 1, 0, 0)), Valuation(2, (0, 0, 1, 0))]
        self.assertEqual(affine_dimension(vs), 2)

    def test_empty_list(self):
        with self.assertRaises(UsageError):
            affine_dimension([])

    def test_rank_with_fractions(self):
        self.assertEqual(rank([[Fraction(1, 2), 1], [1, 2], [0, Fraction(1, 3)]]), 2)
        self.assertEqual(rank([[0, 0], [0, 0]]), 0)

    def test_cube_vertices(self):
        for k in (4, 6, 8):
            code = graham_sloane_code(k)
            vs = [build_speckled(spec) for spec in cube_vertex_specs(k, code)]
            self.assertEqual(len(vs), 2 * k + len(code))
            self.assertEqual(affine_dimension(vs), 2 * k - 1 + len(code))

    def test_structural_dimension(self):
        code = graham_sloane_code(16)
        self.assertEqual(structural_dimension(code), 31 + len(code))
        weight8 = [mask_of(c) for _, c in zip(range(2696), combinations(range(16), 8))]
        supplied = CodeFamily.explicit(16, weight8, validate=False)
        self.assertEqual(structural_dimension(supplied), 2727)
