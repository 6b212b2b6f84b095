import logging
import math
from fractions import Fraction
from typing import Sequence

from speckled.codes import CodeFamily, code_weights
from valcore.exceptions import UsageError
from valcore.valuation import require_dense

logger = logging.getLogger(__name__)


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        scale = math.lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * scale) for x in row])
    return out


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    m = _integer_rows(rows)
    if not m or not m[0]:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    piv_r = 0
    prev = 1
    for piv_c in range(n_cols):
        for i_row in range(piv_r, n_rows):
            if m[i_row][piv_c] != 0:
                break
        else:
            continue
        if i_row != piv_r:
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
        fp = m[piv_r][piv_c]
        for r in range(piv_r + 1, n_rows):
            fr = m[r][piv_c]
            for c in range(piv_c, n_cols):
                m[r][c] = (m[r][c] * fp - m[piv_r][c] * fr) // prev
        prev = fp
        piv_r += 1
        if piv_r == n_rows:
            break
    return piv_r


def affine_dimension(vs) -> int:
    """Dimension of the smallest affine subspace holding the given tables."""
    vs = list(vs)
    if not vs:
        raise UsageError("affine_dimension needs at least one valuation")
    k = vs[0].k
    if any(v.k != k for v in vs):
        raise UsageError("all valuations must have the same K")
    tables = [require_dense(v, "affine_dimension").table for v in vs]
    base = tables[0]
    rows = [[x - y for x, y in zip(t, base)] for t in tables[1:]]
    dim = rank(rows)
    logger.debug(f"affine dimension of {len(vs)} valuations at K={k}: {dim}")
    return dim


def structural_dimension(code: CodeFamily) -> int:
    """K alphas, K-1 betas and one gamma per codeword, when every size keeps a non-codeword."""
    k = code.k
    sizes = code.size_by_weight
    for size in code_weights(k):
        if sizes.get(size, 0) >= math.comb(k, size):
            raise UsageError(f"every bundle of size {size} is a codeword; beta_{size} is not identified")
    return k + (k - 1) + len(code)
