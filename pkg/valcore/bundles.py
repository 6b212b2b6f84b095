"""
Bundles are subsets of the goods, stored as bitmasks.

Good ``g`` (0-based) is bit ``g``; user-facing labels number goods from 1.
"""
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from valcore.exceptions import UsageError


def popcount(mask: int) -> int:
    return mask.bit_count()


def goods_of(mask: int) -> tuple[int, ...]:
    out = []
    g = 0
    while mask:
        if mask & 1:
            out.append(g)
        mask >>= 1
        g += 1
    return tuple(out)


def mask_of(goods: Iterable[int]) -> int:
    mask = 0
    for g in goods:
        mask |= 1 << g
    return mask


def outside(mask: int, k: int) -> tuple[int, ...]:
    return tuple(g for g in range(k) if not mask >> g & 1)


def masks_of_size(k: int, size: int) -> list[int]:
    """Masks of the given cardinality, ascending."""
    return sorted(mask_of(c) for c in combinations(range(k), size))


def submasks(mask: int) -> Iterator[int]:
    """Every submask of ``mask``, including ``mask`` and 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def label(mask: int, k: int | None = None) -> str:
    if mask == 0:
        return "∅"
    goods = [g + 1 for g in goods_of(mask)]
    if (k or goods[-1]) <= 9:
        return "".join(str(g) for g in goods)
    return "{" + ",".join(str(g) for g in goods) + "}"


@dataclass(frozen=True, order=True)
class Bundle:
    mask: int
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise UsageError("a bundle needs at least one good")
        if not 0 <= self.mask < 1 << self.k:
            raise UsageError(f"mask {self.mask} out of range for K={self.k}")

    @classmethod
    def from_goods(cls, k: int, goods: Iterable[int]) -> "Bundle":
        """Build from 1-based good numbers."""
        return cls(mask_of(g - 1 for g in goods), k)

    def __index__(self) -> int:
        return self.mask

    def __contains__(self, good: int) -> bool:
        return bool(self.mask >> (good - 1) & 1)

    @property
    def goods(self) -> tuple[int, ...]:
        return tuple(g + 1 for g in goods_of(self.mask))

    @property
    def size(self) -> int:
        return popcount(self.mask)

    def __str__(self) -> str:
        return label(self.mask, self.k)
