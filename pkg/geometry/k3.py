"""
Substitute valuations on three goods.

Every such valuation has two equal pairwise interactions below the third
one, so the set splits into three six-dimensional pieces, one per pair of
equal interactions.
"""
import logging
from dataclasses import dataclass

from checks.properties import check_valuation
from valcore.bundles import mask_of
from valcore.exceptions import ConditionError, UsageError
from valcore.operators import delta, from_interaction
from valcore.valuation import InteractionFunction, Valuation
from valcore.values import Value, as_value

logger = logging.getLogger(__name__)

PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class K3Params:
    """``perm`` holds goods 1..3 in the roles (i, j, k); theta(ij) = theta(ik) = a, theta(jk) = b."""

    perm: tuple[int, int, int]
    a: Value
    b: Value
    c: Value
    mu: tuple[Value, Value, Value]

    def __post_init__(self):
        if sorted(self.perm) != [1, 2, 3]:
            raise UsageError(f"perm must be a permutation of (1, 2, 3), got {self.perm}")
        a, b, c = (as_value(x) for x in (self.a, self.b, self.c))
        mu = tuple(as_value(x) for x in self.mu)
        if len(mu) != 3:
            raise UsageError("mu needs three entries")
        i, j, k = (g - 1 for g in self.perm)
        for ok, what in (
            (0 <= a <= b, "0 <= a <= b"),
            (a + b <= c, "a + b <= c"),
            (mu[i] >= c - b, "mu_i >= c - b"),
            (mu[j] >= c - a, "mu_j >= c - a"),
            (mu[k] >= c - a, "mu_k >= c - a"),
        ):
            if not ok:
                raise ConditionError(f"parameters violate {what}")
        object.__setattr__(self, "perm", tuple(self.perm))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "mu", mu)


def k3_valuation(params: K3Params) -> Valuation:
    i, j, k = (g - 1 for g in params.perm)
    theta = [0] * 8
    theta[mask_of((i, j))] = params.a
    theta[mask_of((i, k))] = params.a
    theta[mask_of((j, k))] = params.b
    theta[7] = params.c
    return from_interaction(InteractionFunction(3, tuple(theta), params.mu))


def pair_label(i: int, j: int) -> str:
    return f"δ{i + 1}{j + 1}"


def classify_k3(v) -> frozenset[str]:
    """Which of δ12=δ13, δ12=δ23, δ13=δ23 hold; at least one does for a substitute v."""
    if v.k != 3:
        raise UsageError(f"classify_k3 needs K=3, got K={v.k}")
    report = check_valuation(v)
    if not report.substitute:
        raise ConditionError("classify_k3 needs a substitute valuation", witness=report.first_violation)
    d = {pair: delta(v, *pair) for pair in PAIRS}
    found = set()
    for n, p in enumerate(PAIRS):
        for q in PAIRS[n + 1:]:
            if d[p] == d[q]:
                found.add(f"{pair_label(*p)}={pair_label(*q)}")
    logger.debug(f"K=3 memberships: {sorted(found)}")
    return frozenset(found)
