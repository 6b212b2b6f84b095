"""
Operators on valuations and interaction functions.

All of them are exact and return new objects; inputs are never modified.
"""
import logging
from typing import Sequence

from valcore.bundles import goods_of, popcount, submasks
from valcore.exceptions import ConditionError, UsageError
from valcore.valuation import (
    InteractionFunction,
    Valuation,
    _linear_table,
    require_dense,
)
from valcore.values import Value, as_value

logger = logging.getLogger(__name__)


def to_interaction(v) -> InteractionFunction:
    v = require_dense(v, "to_interaction")
    mu = tuple(v(1 << g) for g in range(v.k))
    linear = _linear_table(v.k, mu)
    theta = tuple(linear[mask] - v.table[mask] for mask in range(1 << v.k))
    return InteractionFunction(v.k, theta, mu)


def from_interaction(f: InteractionFunction) -> Valuation:
    linear = _linear_table(f.k, f.mu)
    return Valuation(f.k, tuple(linear[mask] - f.theta[mask] for mask in range(1 << f.k)))


def _check_pair(k: int, i: int, j: int, mask: int) -> None:
    if not (0 <= i < k and 0 <= j < k):
        raise UsageError(f"goods {i + 1},{j + 1} out of range for K={k}")
    if i == j:
        raise UsageError(f"delta needs two distinct goods, got {i + 1} twice")
    if mask >> i & 1 or mask >> j & 1:
        raise UsageError(f"goods {i + 1} and {j + 1} must lie outside the conditioning bundle")


def delta(v, i: int, j: int, bundle=0) -> Value:
    """delta_{ij|A} = v(Ai) + v(Aj) - v(Aij) - v(A)."""
    mask = int(bundle)
    _check_pair(v.k, i, j, mask)
    ai, aj = mask | 1 << i, mask | 1 << j
    return v(ai) + v(aj) - v(ai | aj) - v(mask)


def delta_theta(f: InteractionFunction, i: int, j: int, bundle=0) -> Value:
    mask = int(bundle)
    _check_pair(f.k, i, j, mask)
    ai, aj = mask | 1 << i, mask | 1 << j
    return f.theta[ai | aj] - f.theta[ai] - f.theta[aj] + f.theta[mask]


def satiate(v, level: int) -> Valuation:
    """Best sub-bundle of size at most ``level``."""
    v = require_dense(v, "satiate")
    if not 0 <= level <= v.k:
        raise UsageError(f"satiation level {level} outside 0..{v.k}")
    best = list(v.table)
    for mask in range(1, 1 << v.k):
        top = best[mask] if popcount(mask) <= level else None
        for g in goods_of(mask):
            below = best[mask ^ 1 << g]
            if top is None or below > top:
                top = below
        best[mask] = top
    return Valuation(v.k, tuple(best))


def monotone_envelope(v) -> Valuation:
    return satiate(v, v.k)


def aggregate(v1, v2) -> Valuation:
    """Max convolution: best split of each bundle between the two valuations."""
    if v1.k != v2.k:
        raise UsageError(f"cannot aggregate K={v1.k} with K={v2.k}")
    t1 = require_dense(v1, "aggregate").table
    t2 = require_dense(v2, "aggregate").table
    table = []
    for mask in range(1 << v1.k):
        table.append(max(t1[mask ^ sub] + t2[sub] for sub in submasks(mask)))
    return Valuation(v1.k, tuple(table))


def single_unit(weights: Sequence) -> Valuation:
    weights = [as_value(w) for w in weights]
    for g, w in enumerate(weights):
        if w < 0:
            raise UsageError(f"weight of good {g + 1} is negative ({w})")
    table = [0] * (1 << len(weights))
    for mask in range(1, len(table)):
        low = mask & -mask
        table[mask] = max(table[mask ^ low], weights[low.bit_length() - 1])
    return Valuation(len(weights), tuple(table))


def extend_level(f: InteractionFunction, level: int, mu: Sequence) -> InteractionFunction:
    """Define theta on bundles of size level+1 as min over i of theta(A-i) + mu(i)."""
    from checks.properties import first_f4_violation

    if not 1 <= level <= f.k - 1:
        raise UsageError(f"extension level {level} outside 1..{f.k - 1}")
    mu = tuple(as_value(m) for m in mu)
    if len(mu) != f.k:
        raise UsageError(f"mu needs {f.k} entries, got {len(mu)}")
    if 2 <= level <= f.k - 2:
        witness = first_f4_violation(f.theta, f.k, level)
        if witness is not None:
            raise ConditionError(f"theta fails F4 at level {level}", witness=witness)

    theta = list(f.theta)
    for mask in range(1 << f.k):
        if popcount(mask) == level + 1:
            theta[mask] = min(theta[mask ^ 1 << g] + mu[g] for g in goods_of(mask))
    logger.debug(f"extended theta to level {level + 1} for K={f.k}")
    return InteractionFunction(f.k, tuple(theta), mu)
