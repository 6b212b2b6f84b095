"""
Square weight matrices whose assignment valuation has a closed form.

A full matrix W qualifies when it is nonnegative, nonincreasing down each
column and supermodular on every 2x2 block. An upper triangular matrix
qualifies under the hat conditions, which only constrain entries on or
above the diagonal. Either way the bundle {k_1 < ... < k_L} is worth
w(1,k_1) + ... + w(L,k_L).
"""
import logging
from dataclasses import dataclass

import numpy as np

from assignment.matrix import WeightMatrix
from valcore.bundles import goods_of
from valcore.exceptions import ConditionError, UsageError
from valcore.valuation import Valuation
from valcore.values import Value, format_value

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConditionFailure:
    condition: str
    cell: tuple[int, int]
    value: Value

    def __str__(self) -> str:
        i, k = self.cell
        return f"condition {self.condition} fails at (i={i}, k={k}): {format_value(self.value)}"


@dataclass(frozen=True)
class ConditionReport:
    failures: tuple[ConditionFailure, ...] = ()

    def __bool__(self) -> bool:
        return not self.failures

    def conditions(self) -> set[str]:
        return {x.condition for x in self.failures}


def _require_square(matrix: WeightMatrix) -> int:
    if not matrix.is_square:
        raise UsageError(f"expected a square matrix, got {matrix.n}x{matrix.k}")
    return matrix.k


def _square_difference(w, i: int, k: int) -> Value:
    # 1-based top-left corner (i, k)
    return w(i + 1, k + 1) - w(i, k + 1) - w(i + 1, k) + w(i, k)


def check_monotone_W(matrix: WeightMatrix) -> ConditionReport:
    K = _require_square(matrix)
    w = matrix.w
    failures = []
    for i in range(1, K + 1):
        for k in range(1, K + 1):
            if w(i, k) < 0:
                failures.append(ConditionFailure("1", (i, k), w(i, k)))
    for i in range(1, K):
        for k in range(1, K + 1):
            if w(i + 1, k) > w(i, k):
                failures.append(ConditionFailure("2", (i, k), w(i, k) - w(i + 1, k)))
    for i in range(1, K):
        for k in range(1, K):
            d = _square_difference(w, i, k)
            if d < 0:
                failures.append(ConditionFailure("3", (i, k), d))
    return ConditionReport(tuple(failures))


def hat_sums(matrix: WeightMatrix) -> list[Value]:
    """For k = 1..K-1: sum of w(t,t) for t >= k minus sum of w(t,t+1) for k <= t < K."""
    K = _require_square(matrix)
    w = matrix.w
    sums = []
    for k in range(1, K):
        diag = sum((w(t, t) for t in range(k, K + 1)), 0)
        above = sum((w(t, t + 1) for t in range(k, K)), 0)
        sums.append(diag - above)
    return sums


def check_hat(matrix: WeightMatrix) -> ConditionReport:
    K = _require_square(matrix)
    w = matrix.w
    failures = []
    for i in range(1, K + 1):
        for k in range(1, K + 1):
            if k < i and w(i, k) != 0:
                failures.append(ConditionFailure("0^", (i, k), w(i, k)))
            if w(i, k) < 0:
                failures.append(ConditionFailure("1^", (i, k), w(i, k)))
    for i in range(1, K):
        for k in range(i + 1, K):
            d = _square_difference(w, i, k)
            if d < 0:
                failures.append(ConditionFailure("2^", (i, k), d))
    for i in range(1, K):
        if w(i + 1, K) > w(i, K):
            failures.append(ConditionFailure("3^", (i, K), w(i, K) - w(i + 1, K)))
    for k, s in enumerate(hat_sums(matrix), start=1):
        if s < 0:
            failures.append(ConditionFailure("4^", (k, k), s))
    return ConditionReport(tuple(failures))


def _require_closed_form(matrix: WeightMatrix) -> None:
    if check_monotone_W(matrix) or check_hat(matrix):
        return
    raise ConditionError("matrix satisfies neither the monotone nor the hat conditions", witness=matrix)


def _closed_form(matrix: WeightMatrix, mask: int) -> Value:
    return sum((matrix.rows[i][g] for i, g in enumerate(goods_of(mask))), 0)


def closed_form_eval(matrix: WeightMatrix, bundle) -> Value:
    _require_closed_form(matrix)
    mask = int(bundle)
    if mask < 0 or mask >> matrix.k:
        raise UsageError(f"bundle {mask} is not a subset of the {matrix.k} goods")
    return _closed_form(matrix, mask)


def closed_form_valuation(matrix: WeightMatrix) -> Valuation:
    _require_closed_form(matrix)
    return Valuation.from_function(matrix.k, lambda mask: _closed_form(matrix, mask))


def complete_hat(matrix: WeightMatrix) -> WeightMatrix:
    """
    Fill the lower triangle so every 2x2 block touching it has zero
    supermodular difference. Only entries on or above the diagonal are read.
    """
    hat = matrix.upper()
    report = check_hat(hat)
    if not report:
        raise ConditionError(f"hat conditions fail: {report.failures[0]}", witness=report.failures)
    K = hat.k
    rows = [list(row) for row in hat.rows]

    def w(i, k):
        return rows[i - 1][k - 1]

    for k in range(K - 1, 0, -1):
        for r in range(k + 1, K + 1):
            rows[r - 1][k - 1] = w(r, k + 1) + w(r - 1, k) - w(r - 1, k + 1)
    completed = WeightMatrix.of(rows)
    logger.debug(f"completed {K}x{K} hat matrix, last row {[format_value(x) for x in completed.rows[-1]]}")
    return completed


def random_hat_matrix(k: int, rng: np.random.Generator, high: int = 10, strict: bool = False) -> WeightMatrix:
    """
    Integer upper triangular matrix meeting the hat conditions, built column
    by column from the right. With ``strict`` every condition holds with a
    margin of at least one.
    """
    if k < 1:
        raise UsageError("need at least one good")
    low = 1 if strict else 0

    def draw() -> int:
        return int(rng.integers(low, high + 1))

    rows = [[0] * k for _ in range(k)]
    last = k - 1
    rows[last][last] = draw()
    for i in range(last - 1, -1, -1):
        rows[i][last] = rows[i + 1][last] + draw()
    running = rows[last][last]
    for c in range(last - 1, -1, -1):
        rows[c][c] = max(0, rows[c][c + 1] - running) + draw()
        running += rows[c][c] - rows[c][c + 1]
        for i in range(c - 1, -1, -1):
            rows[i][c] = max(0, rows[i][c + 1] + rows[i + 1][c] - rows[i + 1][c + 1]) + draw()
    return WeightMatrix.of(rows)
