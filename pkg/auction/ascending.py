"""
Ascending auction with straightforward bidders.

Each round every buyer demands a best bundle at its effective prices: a
good it holds costs the current price, any other good costs one more.
Buyers bid on the demanded goods they do not hold, every good with bids
goes to one bidder drawn at random at the bid amount, and the auction
stops after a round with no bids. A held good is never given back.

Goods start unowned at price 0 instead of with an arbitrary first holder.
A bid on an unowned good is placed at the current price, so the first
round plays the part of the initial provisional assignment. A good that
no buyer ever demands stays unowned and unsold.
"""
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from checks.demand import demand
from valcore.bundles import label, popcount
from valcore.exceptions import NonIntegerError, UsageError, ValuationError
from valcore.valuation import PriceVector, require_dense
from valcore.values import Value

logger = logging.getLogger(__name__)


class RoundLimitError(ValuationError):
    """The auction did not settle within the configured number of rounds."""


def max_rounds() -> int:
    return getattr(settings, "SUBVAL_AUCTION_MAX_ROUNDS", 10**5)


@dataclass(frozen=True)
class Bid:
    buyer: int
    good: int
    amount: int

    def __str__(self) -> str:
        return f"b{self.buyer + 1}:g{self.good + 1}@{self.amount}"


@dataclass(frozen=True)
class AuctionResult:
    prices: tuple[int, ...]
    owners: tuple[int | None, ...]
    bundles: tuple[int, ...]
    welfare: Value
    rounds: int
    transcript: tuple[str, ...]

    def describe(self, k: int) -> str:
        parts = [f"buyer {b + 1}: {label(m, k)}" for b, m in enumerate(self.bundles)]
        return f"welfare {self.welfare} after {self.rounds} rounds; " + ", ".join(parts)


def _owners_text(owners) -> str:
    return ",".join("-" if o is None else str(o + 1) for o in owners)


def transcript_line(rnd: int, bids, prices, owners) -> str:
    bid_text = ",".join(str(b) for b in bids)
    price_text = ",".join(str(p) for p in prices)
    return f"round {rnd}: bids=[{bid_text}] prices=[{price_text}] owners=[{_owners_text(owners)}]"


def effective_prices(prices, owners, buyer: int) -> PriceVector:
    return PriceVector(tuple(
        p if o is None or o == buyer else p + 1
        for p, o in zip(prices, owners)
    ))


def straightforward_demand(v, prices, owners, buyer: int) -> int:
    """Best bundle at effective prices; ties keep held goods, then prefer the lower-numbered goods."""
    held = sum(1 << g for g, o in enumerate(owners) if o == buyer)
    best = demand(v, effective_prices(prices, owners, buyer))
    return max(
        best.bundles,
        key=lambda m: (popcount(m & held), tuple(m >> g & 1 for g in range(v.k))),
    )


def _prepare(valuations) -> list:
    vs = [require_dense(v, "run_auction") for v in valuations]
    if not vs:
        raise UsageError("the auction needs at least one buyer")
    k = vs[0].k
    for n, v in enumerate(vs):
        if v.k != k:
            raise UsageError(f"buyer {n + 1} has K={v.k}, buyer 1 has K={k}")
        if not v.is_integral:
            raise NonIntegerError(f"buyer {n + 1} has fractional values; bids move in whole units")
    return vs


def run_auction(valuations, seed: int = 0, rounds: int | None = None) -> AuctionResult:
    vs = _prepare(valuations)
    k = vs[0].k
    limit = rounds if rounds is not None else max_rounds()
    rng = np.random.Generator(np.random.PCG64(seed))
    prices = [0] * k
    owners: list[int | None] = [None] * k
    transcript = []

    for rnd in range(1, limit + 1):
        bids = []
        for b, v in enumerate(vs):
            wanted = straightforward_demand(v, prices, owners, b)
            for g in range(k):
                if wanted >> g & 1 and owners[g] != b:
                    amount = prices[g] if owners[g] is None else prices[g] + 1
                    bids.append(Bid(b, g, amount))
        if not bids:
            break
        for g in range(k):
            on_good = [bid for bid in bids if bid.good == g]
            if not on_good:
                continue
            winner = on_good[int(rng.integers(len(on_good)))]
            prices[g] = winner.amount
            owners[g] = winner.buyer
        line = transcript_line(rnd, bids, prices, owners)
        transcript.append(line)
        logger.debug(line)
    else:
        raise RoundLimitError(f"auction still bidding after {limit} rounds")

    bundles = tuple(sum(1 << g for g, o in enumerate(owners) if o == b) for b in range(len(vs)))
    welfare = sum((v(m) for v, m in zip(vs, bundles)), 0)
    logger.info(f"auction with {len(vs)} buyers on K={k} settled after {len(transcript)} bidding rounds, welfare {welfare}")
    return AuctionResult(tuple(prices), tuple(owners), bundles, welfare, len(transcript), tuple(transcript))
