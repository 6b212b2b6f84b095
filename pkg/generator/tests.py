from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase
from rest_framework import serializers

from checks.properties import check_valuation, is_substitute
from generator.algorithm import (
    GenStats,
    IterationCapError,
    generate,
    level_satisfied,
    lift_mu,
    repair,
    run_algorithm,
)
from generator.batch import generate_batch
from generator.sampling import SUM_UNIFORM, GenConfig, sample_theta0
from generator.serializers import GenConfigSerializer, GenStatsSerializer, parse_model
from generator.tasks import generate_valuation
from valcore.bundles import mask_of, masks_of_size, popcount
from valcore.exceptions import NonIntegerError, UsageError
from valcore.operators import satiate
from valcore.valuation import InteractionFunction, Valuation


def goods(*numbers):
    return mask_of(g - 1 for g in numbers)


def from_strings(k: int, values: dict) -> InteractionFunction:
    """Bundles written as binary numbers, good 1 rightmost."""
    theta = [0] * (1 << k)
    for text, value in values.items():
        theta[int(text, 2)] = value
    return InteractionFunction(k, tuple(theta), (0,) * k)


def slow_sweeps(m: int) -> InteractionFunction:
    return from_strings(6, {
        "111100": m, "110011": m, "001111": m,
        "000111": 1, "010111": 1, "100111": 1,
    })


class SampleTheta0Tests(SimpleTestCase):
    def test_zero_width(self):
        f = sample_theta0(GenConfig(5, m=0, seed=3))
        self.assertEqual(set(f.theta), {0})

    def test_deterministic(self):
        cfg = GenConfig(6, seed=42)
        self.assertEqual(sample_theta0(cfg), sample_theta0(cfg))
        self.assertNotEqual(sample_theta0(cfg).theta, sample_theta0(GenConfig(6, seed=43)).theta)

    def test_support(self):
        for model in ("uniform", SUM_UNIFORM):
            f = sample_theta0(GenConfig(5, model=model, m=4, seed=1))
            for mask, value in enumerate(f.theta):
                size = popcount(mask)
                if size <= 1:
                    self.assertEqual(value, 0)
                self.assertTrue(0 <= value <= 4 * size)
                self.assertIsInstance(value, int)

    def test_sum_uniform_mean(self):
        pairs, triples = [], []
        for seed in range(60):
            theta = sample_theta0(GenConfig(10, model=SUM_UNIFORM, m=3, seed=seed)).theta
            pairs += [theta[m] for m in masks_of_size(10, 2)]
            triples += [theta[m] for m in masks_of_size(10, 3)]
        self.assertAlmostEqual(float(np.mean(pairs)), 3.0, delta=0.2)
        self.assertAlmostEqual(float(np.mean(triples)), 4.5, delta=0.2)

    def test_bad_config(self):
        for kwargs in ({"k": 1}, {"k": 3, "model": "normal"}, {"k": 3, "m": -1}, {"k": 3, "mu0": (1, 2)}):
            with self.assertRaises(UsageError, msg=kwargs):
                GenConfig(**kwargs)


class RunAlgorithmTests(SimpleTestCase):
    def test_valid_input_is_left_alone(self):
        f, stats = run_algorithm(InteractionFunction(4, (0,) * 16, (0,) * 4), (1, 2, 0, 3))
        self.assertEqual(set(f.theta), {0})
        self.assertEqual(f.mu, (1, 2, 0, 3))
        self.assertEqual(stats.phase_sweeps, {2: 1, 3: 1})
        self.assertEqual(stats.increments, 0)

    def test_three_goods_by_hand(self):
        theta0 = from_strings(3, {"011": 1, "101": 2, "110": 3})
        f, stats = run_algorithm(theta0, (0, 0, 0))
        self.assertEqual(
            (f(goods(1, 2)), f(goods(1, 3)), f(goods(2, 3)), f(goods(1, 2, 3))),
            (2, 2, 3, 5),
        )
        self.assertEqual(f.mu, (2, 3, 3))
        self.assertEqual(stats.phase_sweeps, {2: 2})
        self.assertEqual(stats.increments, 6)

    def test_slow_instance_takes_one_sweep_per_unit(self):
        for m in (1, 2, 3, 10, 100):
            f, stats = run_algorithm(slow_sweeps(m), (0,) * 6)
            self.assertEqual({f.theta[b] for b in masks_of_size(6, 4)}, {m})
            self.assertEqual((stats.phase_sweeps[2], stats.phase_sweeps[3]), (1, 1))
            self.assertEqual(stats.phase_sweeps[4], m + 1, m)

    def test_slow_instance_in_reverse_order(self):
        forward, _ = run_algorithm(slow_sweeps(10), (0,) * 6)
        backward, _ = run_algorithm(slow_sweeps(10), (0,) * 6, reverse=True)
        self.assertEqual(forward, backward)

    def test_iteration_cap(self):
        with self.assertRaises(IterationCapError):
            run_algorithm(slow_sweeps(100), (0,) * 6, cap=3)

    def test_non_integer_input(self):
        theta = [0] * 4
        theta[3] = Fraction(1, 2)
        with self.assertRaises(NonIntegerError):
            run_algorithm(InteractionFunction(2, tuple(theta), (0, 0)))

    def test_bad_mu0(self):
        with self.assertRaises(UsageError):
            run_algorithm(InteractionFunction(2, (0,) * 4, (0, 0)), (0, -1))

    def test_lift_mu_is_smallest(self):
        theta = [0] * 4
        theta[3] = 2
        self.assertEqual(lift_mu(theta, 2, (0, 5)), (2, 5))


class GeneratedOutputTests(SimpleTestCase):
    def test_outputs_are_substitutes(self):
        for seed in range(30):
            k = 2 + seed % 6
            model = SUM_UNIFORM if seed % 2 else "uniform"
            v, f, _ = generate(GenConfig(k, model=model, m=1 + seed % 5, seed=seed))
            report = check_valuation(v)
            self.assertTrue(report.substitute, (seed, report.first_violation))
            self.assertTrue(v.is_integral)

    def test_output_dominates_sample(self):
        cfg = GenConfig(6, m=4, seed=9)
        theta0 = sample_theta0(cfg)
        _, f, _ = generate(cfg)
        self.assertTrue(all(a >= b for a, b in zip(f.theta, theta0.theta)))

    def test_every_raise_is_needed(self):
        for seed in range(5):
            cfg = GenConfig(5, m=3, seed=seed)
            theta0 = sample_theta0(cfg)
            _, f, _ = generate(cfg)
            for b in range(1 << 5):
                if f.theta[b] > theta0.theta[b]:
                    lowered = list(f.theta)
                    lowered[b] -= 1
                    self.assertFalse(level_satisfied(lowered, 5, popcount(b)), (seed, b))

    def test_sweep_order_does_not_matter(self):
        for seed in range(8):
            theta0 = sample_theta0(GenConfig(6, seed=seed))
            forward, _ = run_algorithm(theta0)
            backward, _ = run_algorithm(theta0, reverse=True)
            self.assertEqual(forward, backward)

    def test_idempotent(self):
        _, f, _ = generate(GenConfig(6, seed=5))
        again, stats = run_algorithm(f, f.mu)
        self.assertEqual(again, f)
        self.assertEqual(stats.increments, 0)


class RepairTests(SimpleTestCase):
    def test_substitute_unchanged(self):
        v, _, _ = generate(GenConfig(4, seed=2))
        self.assertEqual(repair(v), v)

    def test_complementary_pair(self):
        self.assertEqual(repair(Valuation(2, (0, 0, 0, 1))), Valuation.zero(2))

    def test_satiated_table(self):
        def value(mask):
            return {0: 0, 1: 3, 2: 4}.get(popcount(mask), 5) + (mask == goods(3, 4))

        broken = satiate(Valuation.from_function(4, value), 2)
        self.assertFalse(is_substitute(broken))
        self.assertTrue(is_substitute(repair(broken)))

    def test_negative_singleton(self):
        fixed = repair(Valuation(2, (0, -2, 3, 1)))
        self.assertEqual(fixed, Valuation(2, (0, 0, 3, 3)))
        self.assertTrue(is_substitute(fixed))

    def test_fractions_rejected(self):
        with self.assertRaises(NonIntegerError):
            repair(Valuation(1, (0, Fraction(1, 2))))


class BatchTests(SimpleTestCase):
    def test_parallel_matches_sequential(self):
        configs = [GenConfig(5, seed=s) for s in range(6)]
        parallel = generate_batch(configs, jobs=2)
        self.assertEqual([cfg for cfg, _, _ in parallel], configs)
        self.assertEqual([v for _, v, _ in parallel], [generate(cfg)[0] for cfg in configs])

    def test_task_runs_eagerly(self):
        result = generate_valuation.apply(kwargs={"k": 3, "model": SUM_UNIFORM, "m": 2, "seed": 7}).get()
        v, _, _ = generate(GenConfig(3, model=SUM_UNIFORM, m=2, seed=7))
        self.assertEqual(result["table"], [str(x) for x in v.table])
        self.assertEqual(result["model"], "sum_uniform:2")


class SerializerTests(SimpleTestCase):
    def test_config(self):
        s = GenConfigSerializer(data={"goods": 4, "model": "sumuniform:3", "seed": 8})
        self.assertTrue(s.is_valid(), s.errors)
        self.assertEqual(s.save(), GenConfig(4, model=SUM_UNIFORM, m=3, seed=8))

    def test_invalid_config(self):
        for data in ({"goods": 21}, {"goods": 3, "model": "normal:2"}, {"goods": 3, "mu0": [1]}):
            self.assertFalse(GenConfigSerializer(data=data).is_valid(), data)

    def test_model_names(self):
        self.assertEqual(parse_model("uniform"), ("uniform", 5))
        with self.assertRaises(serializers.ValidationError):
            parse_model("uniform:x")

    def test_stats(self):
        stats = GenStats(phase_sweeps={2: 1, 3: 2}, increments=7, seconds=0.5)
        data = GenStatsSerializer({**stats.as_dict(), "seed": 1, "goods": 4, "model": "uniform:5"}).data
        self.assertEqual(data["phase_sweeps"], {"2": 1, "3": 2})
        self.assertEqual(data["increments"], 7)
