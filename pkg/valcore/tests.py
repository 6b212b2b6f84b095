from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from checks.properties import (
    check_monotone,
    check_monotone_mu,
    check_s3,
    check_submodular,
    check_supermodular_theta,
    is_substitute,
)
from generator.algorithm import generate
from generator.sampling import GenConfig
from valcore.bundles import Bundle, label, mask_of, masks_of_size, popcount, submasks
from valcore.exceptions import ConditionError, SizeLimitError, UsageError, ValueOverflowError
from valcore.operators import (
    aggregate,
    delta,
    delta_theta,
    extend_level,
    from_interaction,
    monotone_envelope,
    satiate,
    single_unit,
    to_interaction,
)
from valcore.valuation import InteractionFunction, LazyValuation, PriceVector, Valuation
from valcore.values import as_value, format_value, parse_value

K3 = Valuation(3, (0, 2, 3, 4, 3, 4, 4, 4))


def goods(*numbers):
    return mask_of(g - 1 for g in numbers)


def random_table(rng, k, high=10):
    return Valuation(k, (0,) + tuple(int(x) for x in rng.integers(0, high, size=(1 << k) - 1)))


class ValueTests(SimpleTestCase):
    def test_integral_fraction_collapses(self):
        self.assertEqual(as_value(Fraction(4, 2)), 2)
        self.assertIsInstance(as_value(Fraction(4, 2)), int)

    def test_floats_are_refused(self):
        with self.assertRaises(UsageError):
            as_value(0.5)
        with self.assertRaises(UsageError):
            as_value(True)

    def test_canonical_text(self):
        self.assertEqual(parse_value("-7/2"), Fraction(-7, 2))
        self.assertEqual(format_value(Fraction(-7, 2)), "-7/2")
        for bad in ("3/1", "6/4", "+3", "007", "1.5"):
            with self.assertRaises(UsageError, msg=bad):
                parse_value(bad)

    def test_overflow(self):
        with self.assertRaises(ValueOverflowError):
            parse_value(str(2**64))


class BundleTests(SimpleTestCase):
    def test_goods_are_bits(self):
        self.assertEqual(mask_of([0, 2]), 0b101)
        self.assertEqual(label(0b101), "13")
        self.assertEqual(label(0), "∅")
        self.assertEqual(label(1 << 11, 12), "{12}")

    def test_bundle_from_goods(self):
        b = Bundle.from_goods(4, [2, 4])
        self.assertEqual(int(b.__index__()), 0b1010)
        self.assertIn(4, b)
        self.assertNotIn(1, b)
        self.assertEqual(b.size, 2)

    def test_submasks_and_levels(self):
        self.assertEqual(sorted(submasks(0b101)), [0, 1, 4, 5])
        self.assertEqual(masks_of_size(4, 2), [3, 5, 6, 9, 10, 12])
        self.assertTrue(all(popcount(m) == 2 for m in masks_of_size(6, 2)))

    def test_out_of_range(self):
        with self.assertRaises(UsageError):
            Bundle(8, 3)


class ValuationTests(SimpleTestCase):
    def test_empty_bundle_must_be_zero(self):
        with self.assertRaises(ConditionError):
            Valuation(1, (1, 2))

    def test_table_length(self):
        with self.assertRaises(UsageError):
            Valuation(2, (0, 1, 2))

    def test_size_limits(self):
        with self.assertRaises(SizeLimitError):
            Valuation.zero(21)
        with self.assertRaises(SizeLimitError):
            LazyValuation(25, popcount)

    def test_lazy_matches_dense(self):
        lazy = LazyValuation(4, popcount)
        self.assertEqual(lazy.dense(), Valuation.from_function(4, popcount))
        self.assertEqual(lazy(goods(1, 3, 4)), 3)

    def test_permute(self):
        v = Valuation(2, (0, 1, 2, 5))
        self.assertEqual(v.permute([1, 0]).table, (0, 2, 1, 5))

    def test_price_vector(self):
        p = PriceVector.of(1, Fraction(1, 2), 3)
        self.assertEqual(p.cost(goods(1, 2)), Fraction(3, 2))
        self.assertEqual(p.costs()[7], Fraction(9, 2))
        with self.assertRaises(UsageError):
            PriceVector.of(-1)


class InteractionTests(SimpleTestCase):
    def test_two_goods(self):
        f = to_interaction(Valuation(2, (0, 2, 3, 4)))
        self.assertEqual(f.mu, (2, 3))
        self.assertEqual(f(goods(1, 2)), 1)

    def test_linear_has_no_interaction(self):
        f = to_interaction(Valuation.linear((5, 7)))
        self.assertEqual(set(f.theta), {0})
        self.assertEqual(from_interaction(InteractionFunction(2, (0, 0, 0, 0), (5, 7))).table, (0, 5, 7, 12))

    def test_three_goods(self):
        f = to_interaction(K3)
        self.assertEqual((f(goods(1, 2)), f(goods(1, 3)), f(goods(2, 3)), f(goods(1, 2, 3))), (1, 1, 2, 4))
        self.assertEqual(from_interaction(f), K3)

    def test_round_trip(self):
        rng = np.random.Generator(np.random.PCG64(1))
        for _ in range(20):
            v = random_table(rng, 4)
            self.assertEqual(from_interaction(to_interaction(v)), v)

    def test_singletons_must_vanish(self):
        with self.assertRaises(ConditionError):
            InteractionFunction(2, (0, 1, 0, 0), (1, 1))


class DeltaTests(SimpleTestCase):
    def test_complementary_pair(self):
        self.assertEqual(delta(Valuation(2, (0, 0, 0, 1)), 0, 1), -1)

    def test_three_goods(self):
        self.assertEqual(delta(K3, 1, 2), 2)
        self.assertEqual(delta(K3, 0, 1, goods(3)), delta_theta(to_interaction(K3), 0, 1, goods(3)))

    def test_linear(self):
        v = Valuation.linear((1, 4, 2))
        self.assertEqual(delta(v, 0, 2, goods(2)), 0)

    def test_bad_pairs(self):
        with self.assertRaises(UsageError):
            delta(K3, 1, 1)
        with self.assertRaises(UsageError):
            delta(K3, 0, 1, goods(1))

    def test_valuation_and_interaction_forms_agree(self):
        rng = np.random.Generator(np.random.PCG64(7))
        for _ in range(40):
            v = random_table(rng, 3, high=6)
            f = to_interaction(v)
            self.assertEqual(check_submodular(v), check_supermodular_theta(f))
            self.assertEqual(check_monotone(v), check_monotone_mu(f))


class SatiateTests(SimpleTestCase):
    def setUp(self):
        # singletons 3, pairs 4 except {3,4} at 5, larger bundles 5
        def value(mask):
            return {0: 0, 1: 3, 2: 4}.get(popcount(mask), 5) + (mask == goods(3, 4))

        self.v = Valuation.from_function(4, value)

    def test_two_satiation_breaks_submodularity(self):
        s = satiate(self.v, 2)
        self.assertEqual(s(goods(1, 2, 3)), 4)
        self.assertEqual(s(goods(1, 2, 3, 4)), 5)
        margin = s(goods(1, 2, 3, 4)) - s(goods(1, 2, 3)) - s(goods(1, 2, 4)) + s(goods(1, 2))
        self.assertEqual(margin, 1)

    def test_extremes(self):
        self.assertEqual(satiate(self.v, 4), self.v)
        self.assertEqual(satiate(self.v, 0), Valuation.zero(4))

    def test_idempotent(self):
        s = satiate(self.v, 2)
        self.assertEqual(satiate(s, 2), s)

    def test_level_range(self):
        with self.assertRaises(UsageError):
            satiate(self.v, 5)

    def test_satiation_keeps_substitutes(self):
        for seed in range(10):
            v, _, _ = generate(GenConfig(5, seed=seed))
            for level in range(6):
                self.assertTrue(is_substitute(satiate(v, level)), (seed, level))


class AggregateTests(SimpleTestCase):
    def test_single_unit_pair(self):
        self.assertEqual(aggregate(single_unit((3, 1)), single_unit((2, 2)))(goods(1, 2)), 5)

    def test_zero_partner_is_envelope(self):
        v = Valuation(2, (0, 3, 1, 2))
        self.assertEqual(aggregate(v, Valuation.zero(2)), monotone_envelope(v))
        self.assertEqual(monotone_envelope(v).table, (0, 3, 1, 3))

    def test_commutative_and_associative(self):
        rng = np.random.Generator(np.random.PCG64(3))
        a, b, c = (random_table(rng, 3) for _ in range(3))
        self.assertEqual(aggregate(a, b), aggregate(b, a))
        self.assertEqual(aggregate(aggregate(a, b), c), aggregate(a, aggregate(b, c)))

    def test_substitutes_closed_under_aggregation(self):
        for seed in range(10):
            v1, _, _ = generate(GenConfig(4, seed=2 * seed))
            v2, _, _ = generate(GenConfig(4, model="sum_uniform", seed=2 * seed + 1))
            self.assertTrue(is_substitute(aggregate(v1, v2)), seed)

    def test_mismatched_goods(self):
        with self.assertRaises(UsageError):
            aggregate(Valuation.zero(2), Valuation.zero(3))


class SingleUnitTests(SimpleTestCase):
    def test_max_of_weights(self):
        v = single_unit((3, 1))
        self.assertEqual((v(goods(2)), v(goods(1, 2))), (1, 3))
        self.assertEqual(single_unit((0, 0, 0)), Valuation.zero(3))

    def test_random_single_unit_are_substitutes(self):
        rng = np.random.Generator(np.random.PCG64(5))
        for _ in range(20):
            self.assertTrue(is_substitute(single_unit(rng.integers(0, 9, size=5).tolist())))

    def test_negative_weight(self):
        with self.assertRaises(UsageError):
            single_unit((1, -1))


class ExtendLevelTests(SimpleTestCase):
    def test_constant_mu(self):
        f = InteractionFunction(4, (0,) * 16, (0,) * 4)
        g = extend_level(f, 2, (3, 3, 3, 3))
        self.assertEqual({g(m) for m in masks_of_size(4, 3)}, {3})

    def test_zero_mu_takes_the_minimum(self):
        theta = [0] * 8
        theta[goods(1, 2)], theta[goods(1, 3)], theta[goods(2, 3)] = 1, 2, 3
        g = extend_level(InteractionFunction(3, tuple(theta), (0, 0, 0)), 2, (0, 0, 0))
        self.assertEqual(g(7), 1)

    def test_extension_satisfies_s3(self):
        for seed in range(10):
            _, f, _ = generate(GenConfig(5, seed=seed))
            g = extend_level(f, 2, f.mu)
            self.assertTrue(check_s3(from_interaction(g), 3), seed)

    def test_level_range(self):
        with self.assertRaises(UsageError):
            extend_level(InteractionFunction(3, (0,) * 8, (0,) * 3), 3, (0, 0, 0))
