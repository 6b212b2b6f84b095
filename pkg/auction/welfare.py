import logging
from itertools import product

from valcore.exceptions import SizeLimitError, UsageError
from valcore.valuation import require_dense
from valcore.values import Value

logger = logging.getLogger(__name__)

MAX_GOODS = 6
MAX_BUYERS = 4


def optimal_welfare(valuations) -> tuple[Value, tuple[int, ...]]:
    """Best split of the goods among the buyers, some goods possibly unassigned."""
    vs = [require_dense(v, "optimal_welfare") for v in valuations]
    if not vs:
        raise UsageError("optimal_welfare needs at least one buyer")
    k = vs[0].k
    if any(v.k != k for v in vs):
        raise UsageError("all buyers must have the same K")
    if k > MAX_GOODS or len(vs) > MAX_BUYERS:
        raise SizeLimitError(f"brute force is limited to K <= {MAX_GOODS} and at most {MAX_BUYERS} buyers")

    best, best_split = None, None
    # owner index len(vs) means the good stays unassigned
    for owners in product(range(len(vs) + 1), repeat=k):
        split = [0] * len(vs)
        for g, o in enumerate(owners):
            if o < len(vs):
                split[o] |= 1 << g
        total = sum((v(m) for v, m in zip(vs, split)), 0)
        if best is None or total > best:
            best, best_split = total, tuple(split)
    logger.debug(f"optimal welfare {best} over {(len(vs) + 1) ** k} splits")
    return best, best_split
