"""
Four-good weight matrices that realize the vertex-at-one-good pattern.

Good i = 1 carries the three equal smallest interactions, j = 2 the next
pair, and k = 3, l = 4 the largest. Each builder checks its own parameter
constraints before building the matrix.
"""
from assignment.matrix import WeightMatrix
from valcore.exceptions import ConditionError
from valcore.values import as_value

MAIN = "main"
EXCLUDE_J = "j"
EXCLUDE_K = "k"
EXCLUDE_L = "l"
CASE1_SUBCASES = (MAIN, EXCLUDE_J, EXCLUDE_K, EXCLUDE_L)


def _require(ok: bool, what: str) -> None:
    if not ok:
        raise ConditionError(f"parameters violate {what}")


def _case1_constraints(subcase, a, b, c, d, e, f, mu) -> None:
    if subcase == MAIN:
        _require(0 <= a <= b <= c <= e <= f, "0 <= a <= b <= c <= e <= f")
        _require(0 <= e - d <= c - b, "0 <= e - d <= c - b")
        _require(mu[0] >= a + d - b + f - e, "mu1 >= a + d - b + f - e")
        _require(mu[1] >= d + f - e, "mu2 >= d + f - e")
        _require(mu[2] >= f and mu[3] >= f, "mu3, mu4 >= f")
    elif subcase == EXCLUDE_J:
        _require(0 <= a <= b <= c, "0 <= a <= b <= c")
        _require(e <= f, "e <= f")
        _require(0 <= d - b <= e - c, "0 <= d - b <= e - c")
    elif subcase in (EXCLUDE_K, EXCLUDE_L):
        _require(0 <= a <= b <= c <= e <= min(d, f), "0 <= a <= b <= c <= e <= min(d, f)")
    else:
        raise ConditionError(f"unknown subcase '{subcase}', expected one of {CASE1_SUBCASES}")


def case1_weight_matrix(a, b, c, d, e, f, mu, subcase: str = MAIN) -> WeightMatrix:
    """
    Rows (mu1, mu2, mu3, mu4), (mu1-a, mu2-b, mu3-c, 0), (0, mu2-d, mu3-e, 0)
    and (0, 0, mu3-f, 0). Subcase ``l`` swaps the last two columns.
    """
    a, b, c, d, e, f = (as_value(x) for x in (a, b, c, d, e, f))
    mu = tuple(as_value(x) for x in mu)
    if len(mu) != 4:
        raise ConditionError("mu needs four entries")
    _case1_constraints(subcase, a, b, c, d, e, f, mu)
    m1, m2, m3, m4 = mu
    rows = [
        [m1, m2, m3, m4],
        [m1 - a, m2 - b, m3 - c, 0],
        [0, m2 - d, m3 - e, 0],
        [0, 0, m3 - f, 0],
    ]
    if subcase == EXCLUDE_L:
        rows = [[r[0], r[1], r[3], r[2]] for r in rows]
    return WeightMatrix.of(rows)


def case1i_weight_matrix(a, b, c, d, e, f, mu) -> WeightMatrix:
    """Rows (mu1..mu4), (mu1-a, mu2-b, mu3-c, 0), (mu1-d, mu2-e, 0, 0), (mu1-f, 0, 0, 0)."""
    a, b, c, d, e, f = (as_value(x) for x in (a, b, c, d, e, f))
    mu = tuple(as_value(x) for x in mu)
    if len(mu) != 4:
        raise ConditionError("mu needs four entries")
    _require(a <= b <= c, "a <= b <= c")
    _require(e - b >= d - a >= 0, "e - b >= d - a >= 0")
    _require(f >= d, "f >= d")
    m1, m2, m3, m4 = mu
    return WeightMatrix.of([
        [m1, m2, m3, m4],
        [m1 - a, m2 - b, m3 - c, 0],
        [m1 - d, m2 - e, 0, 0],
        [m1 - f, 0, 0, 0],
    ])
