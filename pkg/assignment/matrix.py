from dataclasses import dataclass
from typing import Sequence

from valcore.exceptions import UsageError
from valcore.values import Value, as_value, format_value


@dataclass(frozen=True)
class WeightMatrix:
    """n buyers by K goods; row i holds buyer i's value for each single good."""

    rows: tuple[tuple[Value, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(as_value(x) for x in row) for row in self.rows)
        if not rows or not rows[0]:
            raise UsageError("a weight matrix needs at least one buyer and one good")
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise UsageError(f"row {i + 1} has {len(row)} entries, expected {width}")
            for g, x in enumerate(row):
                if x < 0:
                    raise UsageError(f"w({i + 1},{g + 1}) = {format_value(x)} is negative")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, rows: Sequence[Sequence]) -> "WeightMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def k(self) -> int:
        return len(self.rows[0])

    @property
    def is_square(self) -> bool:
        return self.n == self.k

    def w(self, i: int, g: int) -> Value:
        """1-based entry w(i, g)."""
        return self.rows[i - 1][g - 1]

    def replace(self, i: int, g: int, value) -> "WeightMatrix":
        rows = [list(row) for row in self.rows]
        rows[i - 1][g - 1] = value
        return WeightMatrix.of(rows)

    def upper(self) -> "WeightMatrix":
        """Copy with every entry below the diagonal set to zero."""
        return WeightMatrix.of(
            [[x if g >= i else 0 for g, x in enumerate(row)] for i, row in enumerate(self.rows)]
        )


@dataclass(frozen=True)
class Assignment:
    """sigma[i] is the good buyer i receives, or None for the null item."""

    sigma: tuple[int | None, ...]

    def __post_init__(self):
        taken = [g for g in self.sigma if g is not None]
        if len(taken) != len(set(taken)):
            raise UsageError(f"a good is assigned twice in {self.sigma}")

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, g) for i, g in enumerate(self.sigma) if g is not None]

    @property
    def goods(self) -> int:
        mask = 0
        for _, g in self.pairs():
            mask |= 1 << g
        return mask

    def weight(self, matrix: WeightMatrix) -> Value:
        return sum((matrix.rows[i][g] for i, g in self.pairs()), 0)

    def __str__(self) -> str:
        return "(" + ",".join("△" if g is None else str(g + 1) for g in self.sigma) + ")"
