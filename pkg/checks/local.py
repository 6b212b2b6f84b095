import logging

import numpy as np
from django.conf import settings

from checks.properties import (
    build_report,
    monotone_violation,
    s3_violation,
    submodular_violation,
)
from valcore.exceptions import UsageError

logger = logging.getLogger(__name__)

BATCH = 4096


def sample_local_checks(v, samples: int | None = None, seed: int = 0):
    """
    Randomized local checks for valuations too large to sweep.

    Each sample draws three distinct goods i, j, k and a bundle A avoiding
    them, then tests monotonicity at (A, i), submodularity at (A, i, j) and
    S3 at (A, i, j, k). Works on lazy valuations up to the lazy limit.
    """
    if v.k < 3:
        raise UsageError("local checks need at least three goods")
    if samples is None:
        samples = getattr(settings, "SUBVAL_LOCAL_CHECK_SAMPLES", 10**6)

    rng = np.random.Generator(np.random.PCG64(seed))
    found = []
    done = 0
    while done < samples:
        n = min(BATCH, samples - done)
        triples = rng.random((n, v.k)).argsort(axis=1)[:, :3]
        bundles = rng.integers(0, 1 << v.k, size=n, dtype=np.int64)
        for (i, j, k), raw in zip(triples.tolist(), bundles.tolist()):
            mask = raw & ~(1 << i | 1 << j | 1 << k)
            for x in (
                monotone_violation(v, mask, i),
                submodular_violation(v, mask, *sorted((i, j))),
                s3_violation(v, mask, *sorted((i, j, k))),
            ):
                if x:
                    found.append(x)
        done += n
    report = build_report(v.k, found, sampled=samples)
    logger.info(f"sampled {samples} local tuples at K={v.k}: {report.violation_count} violations")
    return report
