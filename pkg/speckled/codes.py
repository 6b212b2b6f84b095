"""
Constant-weight codes with minimum distance 4, one weight class per even
size between 2 and K-1.

The checksum construction keeps, for each weight, the bundles whose good
numbers sum to the most popular residue mod K. Two same-weight bundles at
distance 2 differ by swapping one good for another, which changes the sum
by a nonzero amount below K, so they never share a residue.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

from valcore.bundles import goods_of, mask_of, popcount
from valcore.exceptions import UsageError
from valcore.valuation import lazy_limit

logger = logging.getLogger(__name__)

GRAHAM_SLOANE = "graham_sloane"
EXPLICIT = "explicit"

# Member lists are materialized eagerly up to this K.
ENUMERATE_LIMIT = 16


def checksum(mask: int, k: int) -> int:
    return sum(g + 1 for g in goods_of(mask)) % k


def code_weights(k: int) -> list[int]:
    return [size for size in range(2, k) if size % 2 == 0]


def residue_counts(k: int, size: int) -> list[int]:
    """How many bundles of the given size fall in each checksum class."""
    # ways[c][r]: subsets of the goods seen so far with c members and sum r mod k
    ways = [[0] * k for _ in range(size + 1)]
    ways[0][0] = 1
    for g in range(1, k + 1):
        for c in range(min(g, size), 0, -1):
            row, prev = ways[c], ways[c - 1]
            for r in range(k):
                row[(r + g) % k] += prev[r]
    return ways[size]


@dataclass(frozen=True)
class CodeFamily:
    k: int
    tag: str
    residues: dict[int, int] = field(default_factory=dict)
    listed: frozenset[int] = frozenset()

    def __contains__(self, mask: int) -> bool:
        if self.tag == EXPLICIT:
            return mask in self.listed
        size = popcount(mask)
        return size in self.residues and checksum(mask, self.k) == self.residues[size]

    @cached_property
    def size_by_weight(self) -> dict[int, int]:
        if self.tag == EXPLICIT:
            out = {size: 0 for size in code_weights(self.k)}
            for mask in self.listed:
                out[popcount(mask)] += 1
            return out
        return {size: residue_counts(self.k, size)[r] for size, r in self.residues.items()}

    def __len__(self) -> int:
        return sum(self.size_by_weight.values())

    def masks(self, size: int | None = None) -> Iterator[int]:
        """Members in ascending mask order within each weight class."""
        sizes = code_weights(self.k) if size is None else [size]
        for s in sizes:
            if self.tag == EXPLICIT:
                yield from sorted(m for m in self.listed if popcount(m) == s)
            else:
                yield from sorted(mask_of(c) for c in combinations(range(self.k), s) if mask_of(c) in self)

    @cached_property
    def members(self) -> tuple[int, ...]:
        if self.k > ENUMERATE_LIMIT:
            raise UsageError(f"members are only listed up to K={ENUMERATE_LIMIT}; use membership tests")
        return tuple(self.masks())

    @classmethod
    def explicit(cls, k: int, masks: Iterable[int], validate: bool = True) -> "CodeFamily":
        code = cls(k=k, tag=EXPLICIT, listed=frozenset(int(m) for m in masks))
        if validate:
            problems = code_violations(code)
            if problems:
                raise UsageError(f"invalid code: {problems[0]}")
        return code

    @property
    def label(self) -> str:
        if self.tag == GRAHAM_SLOANE:
            return "graham_sloane(" + ",".join(f"{s}:{r}" for s, r in sorted(self.residues.items())) + ")"
        return "explicit"


def graham_sloane_code(k: int) -> CodeFamily:
    if not 3 <= k <= lazy_limit():
        raise UsageError(f"codes need 3 <= K <= {lazy_limit()}, got {k}")
    residues = {}
    for size in code_weights(k):
        counts = residue_counts(k, size)
        best = max(counts)
        residues[size] = counts.index(best)
    code = CodeFamily(k=k, tag=GRAHAM_SLOANE, residues=residues)
    logger.debug(f"checksum code for K={k}: residues {residues}, {len(code)} members")
    return code


def code_violations(code: CodeFamily) -> list[str]:
    """Weight and distance problems, listed in mask order."""
    problems = []
    k = code.k
    for mask in sorted(code.listed) if code.tag == EXPLICIT else ():
        size = popcount(mask)
        if mask <= 0 or mask >> k:
            problems.append(f"mask {mask} out of range for K={k}")
        elif size % 2 or not 2 <= size <= k - 1:
            problems.append(f"mask {mask} has weight {size}, expected an even weight in 2..{k - 1}")
    if problems:
        return problems
    for size in code_weights(k):
        members = list(code.masks(size))
        for a, b in combinations(members, 2):
            if popcount(a ^ b) < 4:
                return [f"masks {a} and {b} are at distance {popcount(a ^ b)}"]
    return problems
