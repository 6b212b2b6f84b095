"""
Randomized falsifier for the price-raising definition of substitutes.

A PASS only means no counterexample was sampled; it certifies nothing.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from django.conf import settings

from checks.demand import demand
from valcore.bundles import goods_of
from valcore.exceptions import SizeLimitError, UsageError
from valcore.valuation import PriceVector, require_dense

logger = logging.getLogger(__name__)

ORACLE_MAX_GOODS = 8


@dataclass(frozen=True)
class OracleVerdict:
    passed: bool
    trials: int
    p: PriceVector | None = None
    q: PriceVector | None = None
    bundle: int | None = None

    def __bool__(self) -> bool:
        return self.passed


def definition_holds(v, p: PriceVector, q: PriceVector) -> int | None:
    """Return a bundle of D(p) with no qualifying bundle in D(q), or None."""
    if any(a > b for a, b in zip(p, q)):
        raise UsageError("the definition compares price vectors with p <= q")
    dq = demand(v, q)
    for bundle in demand(v, p):
        kept = 0
        for g in goods_of(bundle):
            if p[g] == q[g]:
                kept |= 1 << g
        if not any(kept & ~other == 0 for other in dq.bundles):
            return bundle
    return None


def oracle_definition(v, trials: int | None = None, seed: int = 0) -> OracleVerdict:
    v = require_dense(v, "oracle_definition")
    if v.k > ORACLE_MAX_GOODS:
        raise SizeLimitError(f"the definition oracle is limited to K <= {ORACLE_MAX_GOODS}")
    if trials is None:
        trials = getattr(settings, "SUBVAL_ORACLE_TRIALS", 200)

    rng = np.random.Generator(np.random.PCG64(seed))
    top = math.ceil(4 * (1 + max(v(1 << g) for g in range(v.k))))
    top = max(top, 1)

    for trial in range(trials):
        p_steps = rng.integers(0, top + 1, size=v.k)
        raise_mask = rng.random(v.k) < 0.5
        bumps = rng.integers(1, top + 1, size=v.k)
        p = PriceVector(tuple(Fraction(int(s), 4) for s in p_steps))
        q = PriceVector(tuple(
            Fraction(int(s + b), 4) if r else Fraction(int(s), 4)
            for s, b, r in zip(p_steps, bumps, raise_mask)
        ))
        bundle = definition_holds(v, p, q)
        if bundle is not None:
            logger.warning(f"definition fails on trial {trial + 1}: p={list(p)}, q={list(q)}, A={bundle}")
            return OracleVerdict(False, trial + 1, p, q, bundle)
    return OracleVerdict(True, trials)
