"""
Repair a nominal interaction function into a supermodular S3 one.

Phase L works on bundles of size L. Its first part raises theta(Aij) so
that theta(Aij) >= theta(Ai) + theta(Aj) - theta(A). Its second part
repeats in-place sweeps raising theta(Aij) so that
theta(Aij) + theta(Ak) >= min(theta(Aik) + theta(Aj), theta(Ajk) + theta(Ai))
until a sweep changes nothing. Values only ever increase, and the result is
the least such function above the input.
"""
import logging
import time
from dataclasses import dataclass, field
from itertools import combinations

from django.conf import settings

from generator.sampling import GenConfig, sample_theta0
from valcore.bundles import masks_of_size, outside
from valcore.exceptions import NonIntegerError, UsageError, ValuationError
from valcore.operators import from_interaction, to_interaction
from valcore.valuation import InteractionFunction, Valuation

logger = logging.getLogger(__name__)


class IterationCapError(ValuationError):
    """A phase needed more sweeps than the configured cap."""


@dataclass
class GenStats:
    phase_sweeps: dict[int, int] = field(default_factory=dict)
    increments: int = 0
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "phase_sweeps": {str(level): n for level, n in self.phase_sweeps.items()},
            "increments": self.increments,
            "seconds": round(self.seconds, 6),
        }


def _ordered(items, reverse: bool):
    items = list(items)
    return items[::-1] if reverse else items


def _require_integers(values, what: str) -> None:
    for x in values:
        if not isinstance(x, int):
            raise NonIntegerError(f"{what} must be integer valued, got {x}")


def _submodular_pass(theta, k, bundles, reverse) -> int:
    raised = 0
    for a in bundles:
        for i, j in _ordered(combinations(outside(a, k), 2), reverse):
            ai, aj = a | 1 << i, a | 1 << j
            need = theta[ai] + theta[aj] - theta[a]
            if theta[ai | aj] < need:
                raised += need - theta[ai | aj]
                theta[ai | aj] = need
    return raised


def _s3_sweep(theta, k, bundles, reverse) -> int:
    raised = 0
    for a in bundles:
        free = outside(a, k)
        for i, j in _ordered(combinations(free, 2), reverse):
            ai, aj = a | 1 << i, a | 1 << j
            aij = ai | aj
            for g in _ordered(free, reverse):
                if g == i or g == j:
                    continue
                ag = a | 1 << g
                need = min(theta[ai | ag] + theta[aj], theta[aj | ag] + theta[ai]) - theta[ag]
                if theta[aij] < need:
                    raised += need - theta[aij]
                    theta[aij] = need
    return raised


def lift_mu(theta, k: int, mu0) -> tuple[int, ...]:
    """Smallest mu >= mu0 with mu(k) >= theta(Ak) - theta(A) for every A without k."""
    mu = []
    for g in range(k):
        bit = 1 << g
        top = max(theta[a | bit] - theta[a] for a in range(1 << k) if not a & bit)
        mu.append(max(mu0[g], top))
    return tuple(mu)


def run_algorithm(theta0: InteractionFunction, mu0=None, *, reverse: bool = False, cap: int | None = None):
    k = theta0.k
    mu0 = tuple(theta0.mu if mu0 is None else mu0)
    _require_integers(theta0.theta, "theta0")
    _require_integers(mu0, "mu0")
    if len(mu0) != k:
        raise UsageError(f"mu0 needs {k} entries")
    if any(x < 0 for x in mu0):
        raise UsageError("mu0 must be nonnegative")
    if cap is None:
        cap = getattr(settings, "SUBVAL_ITERATION_CAP", 10**6)

    started = time.perf_counter()
    stats = GenStats()
    theta = list(theta0.theta)
    for level in range(2, k + 1):
        bundles = _ordered(masks_of_size(k, level - 2), reverse)
        stats.increments += _submodular_pass(theta, k, bundles, reverse)
        if level == k:
            # no three goods lie outside a (K-2)-bundle
            continue
        sweeps = 0
        while True:
            sweeps += 1
            if sweeps > cap:
                raise IterationCapError(f"phase {level} did not settle within {cap} sweeps")
            raised = _s3_sweep(theta, k, bundles, reverse)
            stats.increments += raised
            logger.debug(f"phase {level} sweep {sweeps}: raised {raised}")
            if not raised:
                break
        stats.phase_sweeps[level] = sweeps

    mu = lift_mu(theta, k, mu0)
    stats.seconds = time.perf_counter() - started
    logger.debug(f"generated K={k}: sweeps={stats.phase_sweeps}, increments={stats.increments}")
    return InteractionFunction(k, tuple(theta), mu), stats


def level_satisfied(theta, k: int, level: int) -> bool:
    """Both raise conditions hold for every bundle of size ``level``."""
    for a in masks_of_size(k, level - 2):
        free = outside(a, k)
        for i, j in combinations(free, 2):
            ai, aj = a | 1 << i, a | 1 << j
            if theta[ai | aj] < theta[ai] + theta[aj] - theta[a]:
                return False
            for g in free:
                if g == i or g == j:
                    continue
                ag = a | 1 << g
                if theta[ai | aj] + theta[ag] < min(theta[ai | ag] + theta[aj], theta[aj | ag] + theta[ai]):
                    return False
    return True


def repair(v) -> Valuation:
    """Run the deterministic phases from v's own interaction function."""
    if not v.dense().is_integral:
        raise NonIntegerError("repair needs an integer valued valuation")
    f = to_interaction(v)
    # lift_mu never returns a negative entry, so clamping the floor changes nothing
    fixed, stats = run_algorithm(f, tuple(max(0, x) for x in f.mu))
    logger.info(f"repaired K={v.k} valuation with {stats.increments} increments")
    return from_interaction(fixed)


def generate(cfg: GenConfig):
    """Sample, repair and lift: returns (valuation, interaction function, stats)."""
    theta0 = sample_theta0(cfg)
    f, stats = run_algorithm(theta0, cfg.mu0)
    return from_interaction(f), f, stats
