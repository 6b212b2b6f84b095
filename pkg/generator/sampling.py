"""
Nominal interaction functions drawn from a seeded PCG64 stream.

Every draw goes through ``numpy.random.Generator(PCG64(seed))`` so a seed
reproduces the same table on every platform.
"""
from dataclasses import dataclass, field

import numpy as np

from valcore.exceptions import UsageError
from valcore.valuation import InteractionFunction, dense_limit

UNIFORM = "uniform"
SUM_UNIFORM = "sum_uniform"
MODELS = (UNIFORM, SUM_UNIFORM)


@dataclass(frozen=True)
class GenConfig:
    k: int
    model: str = UNIFORM
    m: int = 5
    seed: int = 0
    mu0: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not 2 <= self.k <= dense_limit():
            raise UsageError(f"K={self.k} outside 2..{dense_limit()}")
        if self.model not in MODELS:
            raise UsageError(f"unknown model '{self.model}', expected one of {MODELS}")
        if self.m < 0:
            raise UsageError("m must be nonnegative")
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must fit in 64 unsigned bits")
        mu0 = tuple(self.mu0) or (0,) * self.k
        if len(mu0) != self.k or any(int(x) != x or x < 0 for x in mu0):
            raise UsageError(f"mu0 must hold {self.k} nonnegative integers")
        object.__setattr__(self, "mu0", tuple(int(x) for x in mu0))

    @property
    def label(self) -> str:
        return f"{self.model}:{self.m}"


def bundle_sizes(k: int) -> np.ndarray:
    bits = (np.arange(1 << k)[:, None] >> np.arange(k)) & 1
    return bits.sum(axis=1)


def sample_theta0(cfg: GenConfig) -> InteractionFunction:
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    n = 1 << cfg.k
    sizes = bundle_sizes(cfg.k)
    if cfg.model == UNIFORM:
        draws = rng.integers(0, cfg.m * sizes + 1, size=n)
    else:
        bits = (np.arange(n)[:, None] >> np.arange(cfg.k)) & 1
        draws = (rng.integers(0, cfg.m + 1, size=(n, cfg.k)) * bits).sum(axis=1)
    theta = np.where(sizes >= 2, draws, 0)
    return InteractionFunction(cfg.k, tuple(int(x) for x in theta), cfg.mu0)
