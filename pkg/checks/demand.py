from dataclasses import dataclass

from valcore.bundles import label
from valcore.exceptions import UsageError
from valcore.valuation import PriceVector, require_dense
from valcore.values import Value


@dataclass(frozen=True)
class DemandSet:
    """Bundles maximizing v(A) - p.A; never empty since v(∅) = 0 is a candidate."""

    k: int
    bundles: frozenset[int]
    payoff: Value

    def __contains__(self, bundle) -> bool:
        return int(bundle) in self.bundles

    def __iter__(self):
        return iter(sorted(self.bundles))

    def __len__(self) -> int:
        return len(self.bundles)

    def __str__(self) -> str:
        return "{" + ", ".join(label(m, self.k) for m in self) + "}"


def demand(v, prices) -> DemandSet:
    v = require_dense(v, "demand")
    if not isinstance(prices, PriceVector):
        prices = PriceVector(tuple(prices))
    if prices.k != v.k:
        raise UsageError(f"{prices.k} prices for K={v.k} goods")
    costs = prices.costs()
    payoffs = [value - cost for value, cost in zip(v.table, costs)]
    best = max(payoffs)
    return DemandSet(v.k, frozenset(m for m, x in enumerate(payoffs) if x == best), best)
