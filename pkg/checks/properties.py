"""
Exhaustive property sweeps: monotonicity, submodularity, S3 and F4.

Sweeps run in canonical order (ascending bundle mask, then ascending goods),
so the first violation of a report is reproducible.
"""
import logging
from dataclasses import dataclass
from itertools import combinations

from valcore.bundles import label, outside, popcount
from valcore.exceptions import UsageError
from valcore.operators import delta, to_interaction
from valcore.valuation import InteractionFunction, require_dense
from valcore.values import Value, format_value

logger = logging.getLogger(__name__)

MONOTONE = "monotone"
SUBMODULAR = "submodular"
S3 = "S3"

FAMILY_ORDER = {MONOTONE: 0, SUBMODULAR: 1, S3: 2}


def double_min(x: Value, y: Value, z: Value) -> bool:
    s = sorted((x, y, z))
    return s[0] == s[1]


def double_max(x: Value, y: Value, z: Value) -> bool:
    s = sorted((x, y, z))
    return s[1] == s[2]


# ───────────── Reports ─────────────

@dataclass(frozen=True)
class Violation:
    family: str
    level: int | None
    bundle: int
    goods: tuple[int, ...]
    values: tuple[Value, ...]

    @property
    def sort_key(self):
        return FAMILY_ORDER[self.family], self.bundle, self.goods

    def describe(self, k: int | None = None) -> str:
        a = label(self.bundle, k)
        g = ",".join(str(x + 1) for x in self.goods)
        vals = ", ".join(format_value(x) for x in self.values)
        if self.family == MONOTONE:
            return f"monotone: v({a}+{g}) < v({a}) ({vals})"
        if self.family == SUBMODULAR:
            return f"submodular: delta_{{{g}|{a}}} = {vals} < 0"
        return f"S3({self.level}): no double maximum at A={a}, goods {g} ({vals})"


@dataclass(frozen=True)
class CheckReport:
    k: int
    monotone: bool
    submodular: bool
    s3: bool
    violations: tuple[Violation, ...] = ()
    sampled: int | None = None

    @property
    def substitute(self) -> bool:
        return self.monotone and self.submodular and self.s3

    @property
    def violation_count(self) -> int:
        return len(self.violations)

    @property
    def first_violation(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def of_family(self, family: str) -> tuple[Violation, ...]:
        return tuple(x for x in self.violations if x.family == family)


def build_report(k: int, violations, sampled: int | None = None) -> CheckReport:
    violations = tuple(sorted(set(violations), key=lambda x: x.sort_key))
    families = {x.family for x in violations}
    return CheckReport(
        k=k,
        monotone=MONOTONE not in families,
        submodular=SUBMODULAR not in families,
        s3=S3 not in families,
        violations=violations,
        sampled=sampled,
    )


# ───────────── Single-tuple tests ─────────────

def monotone_violation(v, mask: int, i: int) -> Violation | None:
    low, high = v(mask), v(mask | 1 << i)
    if high < low:
        return Violation(MONOTONE, None, mask, (i,), (low, high))
    return None


def submodular_violation(v, mask: int, i: int, j: int) -> Violation | None:
    d = delta(v, i, j, mask)
    if d < 0:
        return Violation(SUBMODULAR, popcount(mask) + 2, mask, (i, j), (d,))
    return None


def s3_triple(v, mask: int, i: int, j: int, k: int) -> tuple[Value, Value, Value]:
    ai, aj, ak = mask | 1 << i, mask | 1 << j, mask | 1 << k
    return (
        v(ai | aj) + v(ak),
        v(ai | ak) + v(aj),
        v(aj | ak) + v(ai),
    )


def s3_violation(v, mask: int, i: int, j: int, k: int) -> Violation | None:
    triple = s3_triple(v, mask, i, j, k)
    if not double_max(*triple):
        return Violation(S3, popcount(mask) + 2, mask, (i, j, k), triple)
    return None


# ───────────── Full sweeps ─────────────

def check_valuation(v) -> CheckReport:
    """Evaluate all three families completely; nothing short-circuits."""
    v = require_dense(v, "check_valuation")
    k = v.k
    found = []
    for mask in range(1 << k):
        free = outside(mask, k)
        for i in free:
            x = monotone_violation(v, mask, i)
            if x:
                found.append(x)
        for i, j in combinations(free, 2):
            x = submodular_violation(v, mask, i, j)
            if x:
                found.append(x)
        for i, j, l in combinations(free, 3):
            x = s3_violation(v, mask, i, j, l)
            if x:
                found.append(x)
    report = build_report(k, found)
    logger.debug(f"check_valuation K={k}: substitute={report.substitute}, {report.violation_count} violations")
    return report


def is_substitute(v) -> bool:
    return check_valuation(v).substitute


def _check_level(k: int, level: int) -> None:
    if not 2 <= level <= k - 1:
        raise UsageError(f"S3 level {level} outside 2..{k - 1}")


def _level_tuples(k: int, level: int, width: int):
    for mask in range(1 << k):
        if popcount(mask) == level - 2:
            for goods in combinations(outside(mask, k), width):
                yield mask, goods


def s3_violations(v, level: int):
    v = require_dense(v, "S3")
    _check_level(v.k, level)
    for mask, (i, j, k) in _level_tuples(v.k, level, 3):
        x = s3_violation(v, mask, i, j, k)
        if x:
            yield x


def check_s3(v, level: int) -> bool:
    return next(s3_violations(v, level), None) is None


def check_s3_theta(f: InteractionFunction, level: int) -> bool:
    _check_level(f.k, level)
    t = f.theta
    for mask, (i, j, k) in _level_tuples(f.k, level, 3):
        ai, aj, ak = mask | 1 << i, mask | 1 << j, mask | 1 << k
        if not double_min(t[ai | aj] + t[ak], t[ai | ak] + t[aj], t[aj | ak] + t[ai]):
            return False
    return True


def check_s3_delta(v, level: int) -> bool:
    v = require_dense(v, "S3")
    _check_level(v.k, level)
    for mask, (i, j, k) in _level_tuples(v.k, level, 3):
        if not double_min(delta(v, i, j, mask), delta(v, i, k, mask), delta(v, j, k, mask)):
            return False
    return True


def check_monotone(v) -> bool:
    return check_valuation(v).monotone


def check_submodular(v) -> bool:
    v = require_dense(v, "submodularity")
    return all(
        delta(v, i, j, mask) >= 0
        for mask in range(1 << v.k)
        for i, j in combinations(outside(mask, v.k), 2)
    )


def check_supermodular_theta(f: InteractionFunction) -> bool:
    t = f.theta
    for mask in range(1 << f.k):
        for i, j in combinations(outside(mask, f.k), 2):
            ai, aj = mask | 1 << i, mask | 1 << j
            if t[ai | aj] - t[ai] - t[aj] + t[mask] < 0:
                return False
    return True


def check_monotone_mu(f: InteractionFunction) -> bool:
    """mu(k) >= theta(Ak) - theta(A) for every A without k."""
    t = f.theta
    for g in range(f.k):
        bit = 1 << g
        worst = max(t[mask | bit] - t[mask] for mask in range(1 << f.k) if not mask & bit)
        if f.mu[g] < worst:
            return False
    return True


# ───────────── F4 ─────────────

def first_f4_violation(theta, k: int, level: int):
    """First (A, i, j, k, l) where the pairwise sums lack a double minimum."""
    if not 2 <= level <= k - 2:
        raise UsageError(f"F4 level {level} outside 2..{k - 2}")
    t = theta
    for mask, (i, j, g, l) in _level_tuples(k, level, 4):
        ai, aj, ag = mask | 1 << i, mask | 1 << j, mask | 1 << g
        sums = (
            t[ai | aj] + t[ag | 1 << l],
            t[ai | ag] + t[aj | 1 << l],
            t[ai | 1 << l] + t[aj | ag],
        )
        if not double_min(*sums):
            return mask, (i, j, g, l), sums
    return None


def check_F4(f: InteractionFunction, level: int) -> bool:
    return first_f4_violation(f.theta, f.k, level) is None


def check_F4_valuation(v, level: int) -> bool:
    return check_F4(to_interaction(v), level)
