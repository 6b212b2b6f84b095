import logging
import operator
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

from django.conf import settings

from valcore.bundles import goods_of, popcount
from valcore.exceptions import ConditionError, SizeLimitError, UsageError
from valcore.values import Value, as_value

logger = logging.getLogger(__name__)


def dense_limit() -> int:
    return getattr(settings, "SUBVAL_DENSE_LIMIT", 20)


def lazy_limit() -> int:
    return getattr(settings, "SUBVAL_LAZY_LIMIT", 24)


def _linear_table(k: int, weights: Sequence[Value]) -> list[Value]:
    # table[A] = sum of weights over A, built from the lowest set bit
    table = [0] * (1 << k)
    for mask in range(1, 1 << k):
        low = mask & -mask
        table[mask] = table[mask ^ low] + weights[low.bit_length() - 1]
    return table


# ───────────── Valuation ─────────────

@dataclass(frozen=True)
class Valuation:
    """Dense table of exact values, indexed by bundle mask."""

    k: int
    table: tuple[Value, ...]
    lazy = False

    def __post_init__(self):
        if not 1 <= self.k <= dense_limit():
            raise SizeLimitError(f"K={self.k} is outside 1..{dense_limit()} for a dense table")
        table = tuple(as_value(x) for x in self.table)
        if len(table) != 1 << self.k:
            raise UsageError(f"table has {len(table)} entries, expected {1 << self.k}")
        if table[0] != 0:
            raise ConditionError("v(∅) must be 0", witness=0)
        object.__setattr__(self, "table", table)

    @classmethod
    def from_values(cls, k: int, values: Iterable) -> "Valuation":
        return cls(k, tuple(values))

    @classmethod
    def from_function(cls, k: int, fn: Callable[[int], Value]) -> "Valuation":
        return cls(k, tuple(fn(mask) for mask in range(1 << k)))

    @classmethod
    def zero(cls, k: int) -> "Valuation":
        return cls(k, (0,) * (1 << k))

    @classmethod
    def linear(cls, weights: Sequence) -> "Valuation":
        weights = [as_value(w) for w in weights]
        return cls(len(weights), tuple(_linear_table(len(weights), weights)))

    def __call__(self, bundle) -> Value:
        return self.table[operator.index(bundle)]

    def __len__(self) -> int:
        return len(self.table)

    def items(self) -> Iterator[tuple[int, Value]]:
        return enumerate(self.table)

    @property
    def full(self) -> int:
        return (1 << self.k) - 1

    @cached_property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for x in self.table)

    def dense(self) -> "Valuation":
        return self

    def permute(self, perm: Sequence[int]) -> "Valuation":
        """Relabel goods: good g of ``self`` becomes good ``perm[g]``."""
        if sorted(perm) != list(range(self.k)):
            raise UsageError(f"{list(perm)} is not a permutation of 0..{self.k - 1}")
        table = [0] * (1 << self.k)
        for mask, value in enumerate(self.table):
            image = 0
            for g in goods_of(mask):
                image |= 1 << perm[g]
            table[image] = value
        return Valuation(self.k, tuple(table))


# ───────────── LazyValuation ─────────────

@dataclass(frozen=True)
class LazyValuation:
    """Valuation given by a callback, for K beyond the dense limit."""

    k: int
    fn: Callable[[int], Value] = field(compare=False)
    lazy = True

    def __post_init__(self):
        if not 1 <= self.k <= lazy_limit():
            raise SizeLimitError(f"K={self.k} is outside 1..{lazy_limit()}")

    def __call__(self, bundle) -> Value:
        mask = operator.index(bundle)
        if not 0 <= mask < 1 << self.k:
            raise UsageError(f"mask {mask} out of range for K={self.k}")
        return as_value(self.fn(mask))

    @property
    def full(self) -> int:
        return (1 << self.k) - 1

    def dense(self) -> Valuation:
        if self.k > dense_limit():
            raise SizeLimitError(
                f"K={self.k} exceeds the dense limit {dense_limit()}; use sampled local checks"
            )
        logger.debug(f"materializing lazy valuation with K={self.k}")
        return Valuation.from_function(self.k, self)


def require_dense(v, what: str) -> Valuation:
    if v.lazy and v.k > dense_limit():
        raise SizeLimitError(f"{what} needs a dense table; K={v.k} exceeds {dense_limit()}")
    return v.dense()


# ───────────── InteractionFunction ─────────────

@dataclass(frozen=True)
class InteractionFunction:
    """theta with theta(A) = 0 for |A| <= 1, paired with the singleton values mu."""

    k: int
    theta: tuple[Value, ...]
    mu: tuple[Value, ...]

    def __post_init__(self):
        if not 1 <= self.k <= dense_limit():
            raise SizeLimitError(f"K={self.k} is outside 1..{dense_limit()}")
        theta = tuple(as_value(x) for x in self.theta)
        mu = tuple(as_value(x) for x in self.mu)
        if len(theta) != 1 << self.k or len(mu) != self.k:
            raise UsageError(f"theta needs {1 << self.k} entries and mu {self.k}")
        for mask in [0] + [1 << g for g in range(self.k)]:
            if theta[mask] != 0:
                raise ConditionError(f"theta must vanish on bundles of size <= 1, got theta[{mask}]={theta[mask]}", witness=mask)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "mu", mu)

    def __call__(self, bundle) -> Value:
        return self.theta[operator.index(bundle)]

    def level(self, size: int) -> dict[int, Value]:
        return {mask: t for mask, t in enumerate(self.theta) if popcount(mask) == size}

    @cached_property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for x in self.theta + self.mu)


# ───────────── PriceVector ─────────────

@dataclass(frozen=True)
class PriceVector:
    prices: tuple[Value, ...]

    def __post_init__(self):
        prices = tuple(as_value(p) for p in self.prices)
        for g, p in enumerate(prices):
            if p < 0:
                raise UsageError(f"price of good {g + 1} is negative ({p})")
        object.__setattr__(self, "prices", prices)

    @classmethod
    def of(cls, *prices) -> "PriceVector":
        return cls(tuple(prices))

    @property
    def k(self) -> int:
        return len(self.prices)

    def __len__(self) -> int:
        return len(self.prices)

    def __getitem__(self, g: int) -> Value:
        return self.prices[g]

    def __iter__(self):
        return iter(self.prices)

    def cost(self, bundle) -> Value:
        mask = operator.index(bundle)
        return sum((self.prices[g] for g in goods_of(mask)), 0)

    def costs(self) -> list[Value]:
        """p.A for every bundle, indexed by mask."""
        return _linear_table(self.k, self.prices)
