from fractions import Fraction
from itertools import permutations

import numpy as np
from django.test import SimpleTestCase

from checks.demand import demand
from checks.local import sample_local_checks
from checks.oracle import definition_holds, oracle_definition
from checks.properties import (
    MONOTONE,
    S3,
    SUBMODULAR,
    Violation,
    check_F4,
    check_F4_valuation,
    check_s3,
    check_s3_delta,
    check_s3_theta,
    check_valuation,
    double_max,
    double_min,
    first_f4_violation,
)
from checks.serializers import CheckReportSerializer, OracleVerdictSerializer
from checks.witness import WitnessError, witness_prices
from generator.algorithm import generate
from generator.sampling import GenConfig
from valcore.bundles import mask_of, popcount
from valcore.exceptions import SizeLimitError, UsageError
from valcore.operators import to_interaction
from valcore.valuation import InteractionFunction, LazyValuation, PriceVector, Valuation

K3 = Valuation(3, (0, 2, 3, 4, 3, 4, 4, 4))
COMPLEMENTS = Valuation(2, (0, 0, 0, 1))
# singletons 4, delta12 = 0 is the unique smallest interaction
TRIANGLE = Valuation(3, (0, 4, 4, 8, 4, 6, 6, 8))


def goods(*numbers):
    return mask_of(g - 1 for g in numbers)


def theta_from_pairs(k: int, pairs: dict) -> InteractionFunction:
    theta = [0] * (1 << k)
    for (i, j), value in pairs.items():
        theta[goods(i, j)] = value
    return InteractionFunction(k, tuple(theta), (0,) * k)


class DoubleExtremeTests(SimpleTestCase):
    def test_double_min(self):
        self.assertTrue(double_min(1, 1, 2))
        self.assertFalse(double_min(1, 2, 3))
        self.assertTrue(double_min(5, 5, 5))

    def test_double_max(self):
        self.assertTrue(double_max(1, 2, 2))
        self.assertFalse(double_max(1, 1, 2))


class CheckValuationTests(SimpleTestCase):
    def test_two_goods_only_need_submodularity(self):
        report = check_valuation(Valuation(2, (0, 1, 1, 1)))
        self.assertTrue(report.substitute)
        self.assertEqual(report.violations, ())

    def test_complementary_pair(self):
        report = check_valuation(COMPLEMENTS)
        self.assertFalse(report.submodular)
        self.assertTrue(report.monotone)
        self.assertFalse(report.substitute)
        self.assertEqual(report.first_violation, Violation(SUBMODULAR, 2, 0, (0, 1), (-1,)))
        self.assertEqual(report.first_violation.describe(2), "submodular: delta_{1,2|∅} = -1 < 0")

    def test_three_goods_substitute(self):
        self.assertTrue(check_valuation(K3).substitute)

    def test_s3_failure_only(self):
        report = check_valuation(TRIANGLE)
        self.assertTrue(report.monotone and report.submodular)
        self.assertFalse(report.s3)
        self.assertEqual(report.of_family(S3)[0].values, (12, 10, 10))

    def test_monotone_failure(self):
        report = check_valuation(Valuation(2, (0, 3, 1, 2)))
        self.assertFalse(report.monotone)
        self.assertEqual(report.first_violation.family, MONOTONE)

    def test_violations_come_in_canonical_order(self):
        rng = np.random.Generator(np.random.PCG64(4))
        v = Valuation(4, (0,) + tuple(int(x) for x in rng.integers(0, 10, size=15)))
        report = check_valuation(v)
        keys = [x.sort_key for x in report.violations]
        self.assertEqual(keys, sorted(keys))
        self.assertEqual(report.substitute, report.violation_count == 0)

    def test_relabeling_keeps_verdicts(self):
        rng = np.random.Generator(np.random.PCG64(8))
        for _ in range(5):
            v = Valuation(3, (0,) + tuple(int(x) for x in rng.integers(0, 8, size=7)))
            base = check_valuation(v)
            for perm in permutations(range(3)):
                other = check_valuation(v.permute(list(perm)))
                self.assertEqual(
                    (other.monotone, other.submodular, other.s3),
                    (base.monotone, base.submodular, base.s3),
                )

    def test_size_limit(self):
        with self.assertRaises(SizeLimitError):
            check_valuation(LazyValuation(22, popcount))


class LevelFormsTests(SimpleTestCase):
    def test_three_forms_agree(self):
        rng = np.random.Generator(np.random.PCG64(12))
        for _ in range(30):
            v = Valuation(4, (0,) + tuple(int(x) for x in rng.integers(0, 6, size=15)))
            f = to_interaction(v)
            for level in (2, 3):
                self.assertEqual(check_s3(v, level), check_s3_theta(f, level))
                self.assertEqual(check_s3(v, level), check_s3_delta(v, level))

    def test_level_range(self):
        with self.assertRaises(UsageError):
            check_s3(K3, 3)


class F4Tests(SimpleTestCase):
    def test_zero_interaction(self):
        self.assertTrue(check_F4(InteractionFunction(5, (0,) * 32, (0,) * 5), 3))

    def test_four_cycle(self):
        f = theta_from_pairs(4, {(1, 2): 1, (2, 3): 1, (3, 4): 1, (1, 4): 1, (1, 3): 5, (2, 4): 7})
        self.assertTrue(check_F4(f, 2))

    def test_unique_minimum(self):
        theta = {(1, 2): 0, (3, 4): 0, (1, 3): 1, (2, 4): 1, (1, 4): 2, (2, 3): 2}
        f = theta_from_pairs(4, theta)
        self.assertFalse(check_F4(f, 2))
        self.assertEqual(first_f4_violation(f.theta, 4, 2), (0, (0, 1, 2, 3), (0, 2, 4)))

    def test_level_range(self):
        with self.assertRaises(UsageError):
            check_F4(InteractionFunction(4, (0,) * 16, (0,) * 4), 3)

    def test_s3_implies_f4_on_generated(self):
        for seed in range(12):
            v, _, _ = generate(GenConfig(6, seed=seed))
            f = to_interaction(v)
            for level in range(2, 5):
                self.assertTrue(check_F4(f, level), (seed, level))

    def test_pair_sums_have_double_minimum_for_four_goods(self):
        for seed in range(20):
            v, _, _ = generate(GenConfig(4, model="sum_uniform", m=3, seed=seed))
            self.assertTrue(check_s3_delta(v, 2))
            self.assertTrue(check_F4_valuation(v, 2), seed)


class DemandTests(SimpleTestCase):
    def test_huge_prices(self):
        self.assertEqual(set(demand(K3, (100, 100, 100))), {0})

    def test_free_goods(self):
        self.assertIn(7, demand(K3, (0, 0, 0)))
        self.assertEqual(set(demand(K3, (0, 0, 0))), {goods(1, 2), goods(1, 3), goods(2, 3), 7})
        self.assertEqual(str(demand(K3, (0, 0, 0))), "{12, 13, 23, 123}")

    def test_payoff(self):
        d = demand(COMPLEMENTS, PriceVector.of(Fraction(2, 5), Fraction(2, 5)))
        self.assertEqual(set(d), {3})
        self.assertEqual(d.payoff, Fraction(1, 5))

    def test_price_count(self):
        with self.assertRaises(UsageError):
            demand(K3, (0, 0))


class OracleTests(SimpleTestCase):
    def test_linear_passes(self):
        verdict = oracle_definition(Valuation.linear((3, 1, 2)), trials=200, seed=1)
        self.assertTrue(verdict)
        self.assertEqual(verdict.trials, 200)

    def test_complements_fail(self):
        verdict = oracle_definition(COMPLEMENTS, trials=1000, seed=0)
        self.assertFalse(verdict)
        self.assertEqual(definition_holds(COMPLEMENTS, verdict.p, verdict.q), verdict.bundle)

    def test_generated_substitutes_pass(self):
        for seed in range(15):
            v, _, _ = generate(GenConfig(2 + seed % 4, seed=seed))
            self.assertTrue(oracle_definition(v, trials=100, seed=seed), seed)

    def test_prices_must_rise(self):
        with self.assertRaises(UsageError):
            definition_holds(COMPLEMENTS, PriceVector.of(1, 1), PriceVector.of(0, 1))

    def test_size_limit(self):
        with self.assertRaises(SizeLimitError):
            oracle_definition(Valuation.zero(9), trials=1)


class WitnessTests(SimpleTestCase):
    def test_complementary_pair(self):
        p, q = witness_prices(COMPLEMENTS)
        self.assertEqual(tuple(p), (Fraction(2, 5), Fraction(2, 5)))
        self.assertEqual(tuple(q), (10, Fraction(2, 5)))
        self.assertEqual(set(demand(COMPLEMENTS, p)), {3})
        self.assertEqual(set(demand(COMPLEMENTS, q)), {0})

    def test_unique_min_triangle(self):
        p, q = witness_prices(TRIANGLE)
        self.assertEqual(tuple(p), (3, Fraction(7, 2), 3))
        self.assertEqual(tuple(q), (80, Fraction(7, 2), 3))
        self.assertEqual(definition_holds(TRIANGLE, p, q), goods(1, 2))

    def test_replay_through_oracle_test(self):
        for v in (COMPLEMENTS, TRIANGLE):
            p, q = witness_prices(v)
            self.assertIsNotNone(definition_holds(v, p, q))

    def test_substitute_has_no_witness(self):
        with self.assertRaises(WitnessError):
            witness_prices(K3)

    def test_unsupported_patterns(self):
        with self.assertRaises(WitnessError):
            witness_prices(K3, Violation(SUBMODULAR, 3, goods(3), (0, 1), (-1,)))
        with self.assertRaises(WitnessError):
            witness_prices(K3, Violation(MONOTONE, None, 0, (0,), (1, 0)))


class LocalCheckTests(SimpleTestCase):
    def test_generated_valuation_passes(self):
        v, _, _ = generate(GenConfig(6, seed=3))
        report = sample_local_checks(v, samples=2000, seed=1)
        self.assertTrue(report.substitute)
        self.assertEqual(report.sampled, 2000)

    def test_complementary_pair_is_found(self):
        v = Valuation.from_function(4, lambda m: popcount(m) + (m & 3 == 3))
        report = sample_local_checks(v, samples=500)
        self.assertFalse(report.submodular)
        self.assertTrue(report.monotone)

    def test_lazy_valuation(self):
        report = sample_local_checks(LazyValuation(22, popcount), samples=300)
        self.assertTrue(report.substitute)

    def test_too_few_goods(self):
        with self.assertRaises(UsageError):
            sample_local_checks(COMPLEMENTS, samples=10)


class SerializerTests(SimpleTestCase):
    def test_report(self):
        data = CheckReportSerializer(check_valuation(COMPLEMENTS)).data
        self.assertFalse(data["substitute"])
        self.assertEqual(data["violation_count"], 1)
        self.assertEqual(data["first_violation"]["goods"], [1, 2])
        self.assertEqual(data["first_violation"]["bundle"], "∅")
        self.assertEqual(data["first_violation"]["values"], ["-1"])

    def test_clean_report(self):
        self.assertIsNone(CheckReportSerializer(check_valuation(K3)).data["first_violation"])

    def test_verdict(self):
        p, q = witness_prices(COMPLEMENTS)
        verdict = oracle_definition(COMPLEMENTS, trials=1000, seed=0)
        data = OracleVerdictSerializer(verdict).data
        self.assertFalse(data["passed"])
        self.assertEqual(len(data["p"]), 2)
        self.assertEqual(OracleVerdictSerializer(oracle_definition(K3, trials=5)).data["p"], None)
        self.assertEqual([str(x) for x in p], ["2/5", "2/5"])
