"""
Maximum-weight assignment of buyers to the goods of a bundle.

The matcher is Kuhn-Munkres with labels and slacks kept as exact
rationals, so tightness is an equality test rather than a tolerance.
"""
import logging
import operator

from django.conf import settings

from assignment.matrix import Assignment, WeightMatrix
from valcore.bundles import goods_of
from valcore.exceptions import SizeLimitError, UsageError
from valcore.valuation import Valuation, dense_limit
from valcore.values import Value

logger = logging.getLogger(__name__)


class KuhnMunkres:
    """Maximum-weight perfect matching on a square matrix of exact values."""

    def __init__(self, weight: list[list[Value]]):
        self.weight = weight
        self.n = len(weight)

    def dfs(self, x: int) -> bool:
        self.visx[x] = True
        for y in range(self.n):
            if self.visy[y]:
                continue
            gap = self.lx[x] + self.ly[y] - self.weight[x][y]
            if gap == 0:
                self.visy[y] = True
                if self.link[y] == -1 or self.dfs(self.link[y]):
                    self.link[y] = x
                    return True
            elif self.slack[y] is None or self.slack[y] > gap:
                self.slack[y] = gap
        return False

    def run(self) -> Value:
        n = self.n
        self.link = [-1] * n
        self.ly = [0] * n
        self.lx = [max(row) for row in self.weight]
        for x in range(n):
            self.slack = [None] * n
            while True:
                self.visx = [False] * n
                self.visy = [False] * n
                if self.dfs(x):
                    break
                d = min(self.slack[y] for y in range(n) if not self.visy[y] and self.slack[y] is not None)
                for i in range(n):
                    if self.visx[i]:
                        self.lx[i] -= d
                for y in range(n):
                    if self.visy[y]:
                        self.ly[y] += d
                    elif self.slack[y] is not None:
                        self.slack[y] -= d
        return sum((self.weight[self.link[y]][y] for y in range(n)), 0)


def _optimum(matrix: WeightMatrix, buyers, goods) -> Value:
    buyers, goods = list(buyers), list(goods)
    if not buyers or not goods:
        return 0
    size = max(len(buyers), len(goods))
    square = [[0] * size for _ in range(size)]
    for r, i in enumerate(buyers):
        for c, g in enumerate(goods):
            square[r][c] = matrix.rows[i][g]
    return KuhnMunkres(square).run()


def _bundle_goods(matrix: WeightMatrix, bundle) -> tuple[int, ...]:
    mask = operator.index(bundle)
    if mask < 0 or mask >> matrix.k:
        raise UsageError(f"bundle {mask} is not a subset of the {matrix.k} goods")
    return goods_of(mask)


def eval_assignment(matrix: WeightMatrix, bundle) -> tuple[Value, Assignment]:
    """
    Best total weight over assignments of the bundle's goods, and the
    lexicographically smallest optimal sigma (goods ascending, null item last).
    """
    goods = _bundle_goods(matrix, bundle)
    best = _optimum(matrix, range(matrix.n), goods)
    sigma = []
    free = list(goods)
    target = best
    for i in range(matrix.n):
        rest = range(i + 1, matrix.n)
        for g in free + [None]:
            gain = 0 if g is None else matrix.rows[i][g]
            remaining = [x for x in free if x != g]
            if gain + _optimum(matrix, rest, remaining) == target:
                sigma.append(g)
                free = remaining
                target -= gain
                break
    return best, Assignment(tuple(sigma))


def _injections(buyer: int, n: int, free: list[int]):
    if buyer == n:
        yield ()
        return
    for g in free + [None]:
        remaining = [x for x in free if x != g]
        for tail in _injections(buyer + 1, n, remaining):
            yield (g,) + tail


def brute_force_assignment(matrix: WeightMatrix, bundle) -> tuple[Value, Assignment]:
    """Enumerate every sigma in lexicographic order; the first maximum wins."""
    goods = _bundle_goods(matrix, bundle)
    limit = getattr(settings, "SUBVAL_BRUTE_FORCE_LIMIT", 6)
    if min(matrix.n, len(goods)) > limit:
        raise SizeLimitError(f"brute force is limited to min(n, |A|) <= {limit}")
    best, arg = None, None
    for sigma in _injections(0, matrix.n, list(goods)):
        total = sum((matrix.rows[i][g] for i, g in enumerate(sigma) if g is not None), 0)
        if best is None or total > best:
            best, arg = total, sigma
    return best, Assignment(arg)


def assignment_valuation(matrix: WeightMatrix) -> Valuation:
    """
    Full table of v(A) = max assignment weight, built buyer by buyer:
    f_i(A) = max(f_{i-1}(A), max over g in A of f_{i-1}(A - g) + w(i, g)).
    """
    if matrix.k > dense_limit():
        raise SizeLimitError(f"K={matrix.k} exceeds the dense limit {dense_limit()}")
    size = 1 << matrix.k
    table = [0] * size
    for row in matrix.rows:
        nxt = list(table)
        for mask in range(1, size):
            for g in goods_of(mask):
                cand = table[mask ^ 1 << g] + row[g]
                if cand > nxt[mask]:
                    nxt[mask] = cand
        table = nxt
    logger.debug(f"assignment valuation for {matrix.n} buyers and {matrix.k} goods")
    return Valuation(matrix.k, tuple(table))
