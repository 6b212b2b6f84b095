import re
from fractions import Fraction

from django.test import SimpleTestCase

from auction.ascending import RoundLimitError, effective_prices, run_auction, straightforward_demand
from auction.welfare import optimal_welfare
from generator.algorithm import generate
from generator.sampling import GenConfig
from valcore.exceptions import NonIntegerError, SizeLimitError, UsageError
from valcore.operators import single_unit
from valcore.valuation import Valuation

COMPLEMENTS = Valuation(2, (0, 0, 0, 10))
PRICES = re.compile(r"prices=\[([^\]]*)\]")


class StraightforwardDemandTests(SimpleTestCase):
    def test_goods_held_by_others_cost_one_more(self):
        self.assertEqual(tuple(effective_prices([2, 3], [0, None], 1)), (3, 3))
        self.assertEqual(tuple(effective_prices([2, 3], [0, None], 0)), (2, 3))

    def test_ties_keep_held_goods(self):
        v = Valuation(2, (0, 5, 5, 4))
        self.assertEqual(straightforward_demand(v, [0, 0], [None, 0], 0), 0b10)
        self.assertEqual(straightforward_demand(v, [0, 0], [None, None], 0), 0b01)
        self.assertEqual(straightforward_demand(single_unit((5, 5)), [0, 0], [None, None], 0), 0b11)


class RunAuctionTests(SimpleTestCase):
    def test_single_buyer_takes_everything_at_zero(self):
        v = Valuation.linear((3, 1, 2))
        result = run_auction([v], seed=5)
        self.assertEqual(result.prices, (0, 0, 0))
        self.assertEqual(result.owners, (0, 0, 0))
        self.assertEqual(result.welfare, 6)
        self.assertEqual(result.transcript, ("round 1: bids=[b1:g1@0,b1:g2@0,b1:g3@0] prices=[0,0,0] owners=[1,1,1]",))

    def test_higher_value_wins_one_good(self):
        for seed in range(10):
            result = run_auction([Valuation(1, (0, 5)), Valuation(1, (0, 3))], seed=seed)
            self.assertEqual(result.owners, (0,))
            self.assertIn(result.prices[0], (3, 4))

    def test_same_seed_same_transcript(self):
        buyers = [single_unit((4, 6, 2)), single_unit((5, 3, 3)), Valuation.linear((1, 2, 3))]
        self.assertEqual(run_auction(buyers, seed=11).transcript, run_auction(buyers, seed=11).transcript)

    def test_prices_never_fall(self):
        buyers = [single_unit((4, 6, 2)), single_unit((5, 3, 3)), Valuation.linear((1, 2, 3))]
        result = run_auction(buyers, seed=3)
        history = [[int(x) for x in PRICES.search(line).group(1).split(",")] for line in result.transcript]
        for before, after in zip(history, history[1:]):
            self.assertTrue(all(a <= b for a, b in zip(before, after)))

    def test_near_efficient_for_substitutes(self):
        for trial in range(15):
            k = 2 + trial % 3
            n = 2 + trial % 3
            buyers = [generate(GenConfig(k, m=4, seed=100 * trial + b))[0] for b in range(n)]
            best, _ = optimal_welfare(buyers)
            result = run_auction(buyers, seed=trial)
            self.assertLessEqual(result.welfare, best)
            self.assertGreaterEqual(result.welfare, best - k, trial)

    def test_complements_can_strand_a_good(self):
        buyers = [COMPLEMENTS, single_unit((8, 8))]
        best, _ = optimal_welfare(buyers)
        self.assertEqual(best, 10)
        welfare = [run_auction(buyers, seed=seed).welfare for seed in range(10)]
        self.assertTrue(any(w < best for w in welfare))

    def test_fractional_values_rejected(self):
        with self.assertRaises(NonIntegerError):
            run_auction([Valuation(1, (0, Fraction(1, 2)))])

    def test_mismatched_goods_rejected(self):
        with self.assertRaises(UsageError):
            run_auction([Valuation.zero(1), Valuation.zero(2)])

    def test_unwanted_good_stays_unowned(self):
        result = run_auction([Valuation(1, (0, -1))], seed=2)
        self.assertEqual(result.owners, (None,))
        self.assertEqual(result.prices, (0,))
        self.assertEqual((result.rounds, result.transcript, result.welfare), (0, (), 0))

    def test_round_limit(self):
        with self.assertRaises(RoundLimitError):
            run_auction([Valuation(1, (0, 5)), Valuation(1, (0, 3))], rounds=1)


class OptimalWelfareTests(SimpleTestCase):
    def test_two_single_unit_buyers(self):
        self.assertEqual(optimal_welfare([single_unit((3, 1)), single_unit((2, 2))]), (5, (0b01, 0b10)))

    def test_one_buyer_gets_everything(self):
        self.assertEqual(optimal_welfare([Valuation.linear((1, 2))]), (3, (0b11,)))

    def test_size_limit(self):
        with self.assertRaises(SizeLimitError):
            optimal_welfare([Valuation.zero(7)])
