"""
Speckled valuations: a steep concave base made slightly uneven by
per-good, per-size and per-codeword offsets, each in [0, 1].

theta(A) = beta_|A| + [A in C] gamma_A + 3|A|(|A|-1)/2 and
mu_k = 3K - 1 + alpha_k, so v(A) = sum of mu over A minus theta(A).
"""
import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from speckled.codes import CodeFamily
from valcore.bundles import label, masks_of_size, popcount
from valcore.exceptions import UsageError, ValuationError
from valcore.valuation import LazyValuation, Valuation, _linear_table, lazy_limit, require_dense
from valcore.values import Value, as_value, format_value

logger = logging.getLogger(__name__)

GRID = 256
DENSE_SPECKLE_LIMIT = 16


class InversionError(ValuationError):
    """The table is not a speckled valuation over the given code."""


def phi(size: int) -> Value:
    return as_value(Fraction(3 * size * (size - 1), 2))


class SeededGamma(Mapping):
    """Codeword offsets drawn on demand from (seed, mask), for codes too large to list."""

    def __init__(self, code: CodeFamily, seed: int):
        self.code = code
        self.seed = seed

    def __getitem__(self, mask: int) -> Value:
        if mask not in self.code:
            raise KeyError(mask)
        rng = np.random.Generator(np.random.PCG64([self.seed, mask]))
        return as_value(Fraction(int(rng.integers(0, GRID + 1)), GRID))

    def __iter__(self):
        return self.code.masks()

    def __len__(self) -> int:
        return len(self.code)


def _in_unit(x: Value) -> bool:
    return 0 <= x <= 1


@dataclass(frozen=True, eq=False)
class SpeckleSpec:
    """alpha per good, beta per size (index 0..K, with beta_0 = beta_1 = 0), gamma per codeword."""

    k: int
    alpha: tuple[Value, ...]
    beta: tuple[Value, ...]
    gamma: Mapping = field(compare=False)
    code: CodeFamily = field(compare=False)

    def __post_init__(self):
        alpha = tuple(as_value(x) for x in self.alpha)
        beta = tuple(as_value(x) for x in self.beta)
        if self.code.k != self.k:
            raise UsageError(f"code is for K={self.code.k}, spec for K={self.k}")
        if len(alpha) != self.k or len(beta) != self.k + 1:
            raise UsageError(f"need {self.k} alphas and betas indexed 0..{self.k}")
        if beta[0] != 0 or beta[1] != 0:
            raise UsageError("beta_0 and beta_1 must be 0")
        for name, values in (("alpha", alpha), ("beta", beta)):
            for i, x in enumerate(values):
                if not _in_unit(x):
                    raise UsageError(f"{name}[{i}] = {format_value(x)} is outside [0,1]")
        if not isinstance(self.gamma, SeededGamma):
            gamma = {int(m): as_value(x) for m, x in self.gamma.items()}
            if set(gamma) != set(self.code.members):
                raise UsageError("gamma must be keyed by exactly the code's members")
            for m, x in gamma.items():
                if not _in_unit(x):
                    raise UsageError(f"gamma[{label(m, self.k)}] = {format_value(x)} is outside [0,1]")
            object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    def __eq__(self, other):
        if not isinstance(other, SpeckleSpec):
            return NotImplemented
        return (self.k, self.alpha, self.beta, dict(self.gamma)) == (other.k, other.alpha, other.beta, dict(other.gamma))

    @property
    def mu(self) -> tuple[Value, ...]:
        return tuple(3 * self.k - 1 + a for a in self.alpha)

    def theta(self, mask: int) -> Value:
        size = popcount(mask)
        if size <= 1:
            return 0
        speck = self.gamma[mask] if mask in self.code else 0
        return self.beta[size] + speck + phi(size)

    def parameter_count(self) -> int:
        return self.k + (self.k - 1) + len(self.code)


def _grid(rng: np.random.Generator, size: int) -> list[Value]:
    return [as_value(Fraction(int(j), GRID)) for j in rng.integers(0, GRID + 1, size=size)]


def random_spec(k: int, code: CodeFamily, seed: int = 0) -> SpeckleSpec:
    """Parameters drawn uniformly from the grid {j/256}."""
    rng = np.random.Generator(np.random.PCG64(seed))
    alpha = _grid(rng, k)
    beta = [0, 0] + _grid(rng, k - 1)
    if k <= DENSE_SPECKLE_LIMIT:
        members = code.members
        gamma = dict(zip(members, _grid(rng, len(members))))
    else:
        gamma = SeededGamma(code, seed)
    return SpeckleSpec(k, tuple(alpha), tuple(beta), gamma, code)


def zero_spec(k: int, code: CodeFamily) -> SpeckleSpec:
    return SpeckleSpec(k, (0,) * k, (0,) * (k + 1), {m: 0 for m in code.members}, code)


def cube_vertex_specs(k: int, code: CodeFamily) -> list[SpeckleSpec]:
    """The all-zero spec and one spec per parameter with that parameter set to 1."""
    base = zero_spec(k, code)
    specs = [base]
    for g in range(k):
        alpha = list(base.alpha)
        alpha[g] = 1
        specs.append(SpeckleSpec(k, tuple(alpha), base.beta, base.gamma, code))
    for size in range(2, k + 1):
        beta = list(base.beta)
        beta[size] = 1
        specs.append(SpeckleSpec(k, base.alpha, tuple(beta), base.gamma, code))
    for m in code.members:
        gamma = dict(base.gamma)
        gamma[m] = 1
        specs.append(SpeckleSpec(k, base.alpha, base.beta, gamma, code))
    return specs


def build_speckled(spec: SpeckleSpec):
    k = spec.k
    if k > lazy_limit():
        raise UsageError(f"K={k} is beyond the lazy limit {lazy_limit()}")
    mu = spec.mu
    if k <= DENSE_SPECKLE_LIMIT:
        linear = _linear_table(k, mu)
        return Valuation(k, tuple(linear[m] - spec.theta(m) for m in range(1 << k)))

    def value(mask: int) -> Value:
        return sum((mu[g] for g in range(k) if mask >> g & 1), 0) - spec.theta(mask)

    logger.debug(f"lazy speckled valuation for K={k}")
    return LazyValuation(k, value)


def invert_speckled(v, code: CodeFamily) -> SpeckleSpec:
    """Recover the parameters; every non-code bundle of a size must agree on beta."""
    v = require_dense(v, "invert_speckled")
    k = v.k
    if code.k != k:
        raise UsageError(f"code is for K={code.k}, valuation has K={k}")
    mu = tuple(v(1 << g) for g in range(k))
    alpha = tuple(m - (3 * k - 1) for m in mu)
    linear = _linear_table(k, mu)

    def theta(mask):
        return linear[mask] - v(mask)

    beta = [0, 0]
    for size in range(2, k + 1):
        found = None
        for mask in masks_of_size(k, size):
            if mask in code:
                continue
            b = theta(mask) - phi(size)
            if found is None:
                found = (mask, b)
            elif b != found[1]:
                logger.warning(f"speckled inversion: beta_{size} disagrees at {label(found[0], k)} and {label(mask, k)}")
                raise InversionError(
                    f"beta_{size} is {format_value(found[1])} at {label(found[0], k)} "
                    f"but {format_value(b)} at {label(mask, k)}"
                )
        if found is None:
            raise InversionError(f"every bundle of size {size} is a codeword")
        beta.append(found[1])
    gamma = {m: theta(m) - beta[popcount(m)] - phi(popcount(m)) for m in code.members}
    try:
        return SpeckleSpec(k, alpha, tuple(beta), gamma, code)
    except UsageError as exc:
        raise InversionError(str(exc)) from exc
