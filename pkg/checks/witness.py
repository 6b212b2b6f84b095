"""
Explicit price pairs (p, q) exposing a non-substitute valuation.

Two base patterns are supported, both conditioned on the empty bundle:
a pair of complementary goods, and a triangle whose smallest pairwise
interaction is unique. Goods outside the pattern get a prohibitive price.
"""
import logging
from fractions import Fraction

from checks.oracle import definition_holds
from checks.properties import S3, SUBMODULAR, Violation, check_valuation
from valcore.exceptions import ValuationError
from valcore.operators import delta
from valcore.valuation import PriceVector, require_dense
from valcore.values import as_value

logger = logging.getLogger(__name__)


class WitnessError(ValuationError):
    """No price witness can be built from the supported recipes."""


def _prohibitive(v) -> int:
    return 10 * max(1, max(abs(x) for x in v.table))


def _pick(v, violation: Violation | None) -> Violation:
    if violation is not None:
        return violation
    report = check_valuation(v)
    if report.substitute:
        raise WitnessError("valuation has no violation to witness")
    for x in report.violations:
        if x.bundle == 0 and x.family in (SUBMODULAR, S3):
            return x
    raise WitnessError("no violation conditioned on the empty bundle; the recipes do not apply")


def _complementary_pair(v, i: int, j: int, big: int):
    s = -delta(v, i, j)
    if s <= 0:
        raise WitnessError(f"goods {i + 1},{j + 1} are not complementary")
    p = [big] * v.k
    q = [big] * v.k
    p[i] = v(1 << i) + Fraction(2, 5) * s
    p[j] = v(1 << j) + Fraction(2, 5) * s
    q[j] = p[j]
    return p, q


def _unique_min_triangle(v, goods, big: int):
    a, b, c = goods
    pairs = {(a, b): delta(v, a, b), (a, c): delta(v, a, c), (b, c): delta(v, b, c)}
    (i, j), low = min(pairs.items(), key=lambda item: item[1])
    if sum(1 for d in pairs.values() if d == low) > 1:
        raise WitnessError("the smallest interaction of the triangle is not unique")
    k = next(g for g in goods if g not in (i, j))
    gap = min(pairs[tuple(sorted((i, k)))], pairs[tuple(sorted((j, k)))]) - low
    # surplus chain: delta_ij < x_j < x_i = x_k < min(delta_ik, delta_jk)
    x_j = low + Fraction(gap, 4)
    x_i = x_k = low + Fraction(gap, 2)
    p = [big] * v.k
    p[i] = v(1 << i) - x_i
    p[j] = v(1 << j) - x_j
    p[k] = v(1 << k) - x_k
    q = list(p)
    q[i] = big
    return p, q


def witness_prices(v, violation: Violation | None = None) -> tuple[PriceVector, PriceVector]:
    v = require_dense(v, "witness_prices")
    violation = _pick(v, violation)
    if violation.bundle != 0:
        raise WitnessError("only violations conditioned on the empty bundle have a recipe")

    big = _prohibitive(v)
    if violation.family == SUBMODULAR:
        p, q = _complementary_pair(v, *violation.goods, big)
    elif violation.family == S3:
        p, q = _unique_min_triangle(v, violation.goods, big)
    else:
        raise WitnessError(f"no price recipe for a {violation.family} violation")

    p = [as_value(x) for x in p]
    q = [as_value(x) for x in q]
    if any(x < 0 for x in p):
        raise WitnessError(f"recipe produced a negative price {p}")
    p, q = PriceVector(tuple(p)), PriceVector(tuple(q))
    if definition_holds(v, p, q) is None:
        raise WitnessError("constructed prices do not expose the violation")
    logger.info(f"witness prices p={[str(x) for x in p]} q={[str(x) for x in q]}")
    return p, q
