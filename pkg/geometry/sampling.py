"""
Interior points of the four-good polyhedra.

Each polyhedron is parameterized by ten free values: the three distinct
pairwise interactions a, b, c, a base level p and a slack s for the θ−x,
the four-good interaction and the four singleton values. A base point is
drawn strictly inside, then each parameter is nudged by ``eps`` in turn,
giving eleven affinely independent points.
"""
import logging
from fractions import Fraction

import numpy as np

from checks.properties import check_valuation
from geometry.k4 import (
    CASE1,
    EXCL_I,
    EXCL_J,
    EXCL_K,
    EXCL_L,
    FULL,
    K,
    MAIN,
    PolyhedronDescriptor,
)
from speckled.dimension import affine_dimension
from valcore.bundles import mask_of
from valcore.exceptions import ValuationError
from valcore.operators import from_interaction
from valcore.valuation import InteractionFunction, Valuation

logger = logging.getLogger(__name__)

EPS = Fraction(1, 8)
BASE_LEVEL = 20
TOP = 100
MU = 200


def _case1_thetas(subcase, a, b, c, p, s):
    # returns T for roles (i, j, k, l)
    if subcase == MAIN:
        tk = tl = p
        tj = p + s
        ti = tj + b - a
    elif subcase == EXCL_I:
        tk = tl = p
        tj = p + c - b
        ti = tj + b - a + s
    elif subcase == EXCL_J:
        tk = tl = p
        ti = p + c - a
        tj = ti - b + a + s
    elif subcase == EXCL_K:
        tj = tl = p
        ti = p + b - a
        tk = p + s
    else:
        tj = tk = p
        ti = p + b - a
        tl = p + s
    return ti, tj, tk, tl


def _case2_thetas(subcase, a, b, c, p, s):
    if subcase == MAIN:
        ti = tk = p
        tj = tl = p + s
    elif subcase == EXCL_I:
        tj = tl = p
        tk = p + c - a
        ti = tk + s
    elif subcase == EXCL_K:
        tj = tl = p
        ti = p + c - a
        tk = ti + s
    elif subcase == EXCL_J:
        ti = tk = p
        tl = p + b - a
        tj = tl + s
    else:
        ti = tk = p
        tj = p + b - a
        tl = tj + s
    return ti, tj, tk, tl


def descriptor_point(d: PolyhedronDescriptor, params) -> Valuation:
    """The valuation for parameters (a, b, c, p, s, top, mu_1..mu_4) in d's roles."""
    a, b, c, p, s, top, *mu = params
    i, j, k, l = d.labeling
    theta = [0] * (1 << K)
    if d.case == CASE1:
        pairs = {(i, j): a, (i, k): a, (i, l): a, (j, k): b, (j, l): b, (k, l): c}
        ts = _case1_thetas(d.subcase, a, b, c, p, s)
    else:
        pairs = {(i, j): a, (j, k): a, (k, l): a, (i, l): a, (i, k): b, (j, l): c}
        ts = _case2_thetas(d.subcase, a, b, c, p, s)
    for pair, x in pairs.items():
        theta[mask_of(pair)] = x
    for g, t in zip(d.labeling, ts):
        theta[FULL ^ 1 << g] = t
    theta[FULL] = top
    return from_interaction(InteractionFunction(K, tuple(theta), tuple(mu)))


def _base_params(d: PolyhedronDescriptor, rng: np.random.Generator) -> list[Fraction]:
    def jitter():
        return Fraction(int(rng.integers(0, 4)), 4)

    if d.case == CASE1:
        a = 1 + jitter()
        b = a + 1 + jitter()
        c = b + 2 + jitter()
        s = (c - b) / 2 if d.subcase == MAIN else 1 + jitter()
    else:
        a = 1 + jitter()
        b = a + 2 + jitter()
        c = a + 2 + jitter()
        s = Fraction(0) if d.subcase == MAIN else 1 + jitter()
    p = BASE_LEVEL + jitter()
    top = TOP + jitter()
    mu = [MU + jitter() for _ in range(K)]
    return [a, b, c, p, s, top, *mu]


def _inside(d: PolyhedronDescriptor, v: Valuation) -> bool:
    return d.contains(v) and check_valuation(v).substitute


def interior_points(d: PolyhedronDescriptor, seed: int = 0, eps: Fraction = EPS, tries: int = 20) -> list[Valuation]:
    rng = np.random.Generator(np.random.PCG64(seed))
    for attempt in range(tries):
        base = _base_params(d, rng)
        points = [descriptor_point(d, base)]
        for n in range(len(base)):
            nudged = list(base)
            nudged[n] += eps
            points.append(descriptor_point(d, nudged))
        if all(_inside(d, v) for v in points):
            return points
        logger.debug(f"{d.name}: attempt {attempt} left the polyhedron, redrawing")
    raise ValuationError(f"no interior sample for {d.name} after {tries} attempts")


def descriptor_dimension(d: PolyhedronDescriptor, seed: int = 0) -> int:
    return affine_dimension(interior_points(d, seed))
