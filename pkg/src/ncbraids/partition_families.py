"""
The two companion partition lattices used by the cumulant transforms:
all set partitions (the classical family) and interval partitions (the
boolean family), next to the noncrossing family from nc_lattice.

A family is addressed by one of the string tags in FAMILIES. Elements of
all three families expose ``.n`` and ``.blocks`` with the same canonical
shape as NcPartition, so weight computations can be written once. Interval
partitions are stored by their cut positions (a composition of n), which
makes the join an intersection of cut sets and the count 2^(n-1) immediate.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable

from . import nc_lattice
from .errors import CapExceededError, InvalidPartitionError
from .nc_lattice import Blocks, NcPartition, _validate_blocks

FAMILIES = ("free", "classical", "boolean")

SET_PARTITION_CAP = 9    # Bell(9) = 21147
INTERVAL_CAP = 16        # 2^15 = 32768


@dataclass(frozen=True)
class SetPartition:
    """An arbitrary partition of {1..n}, canonical like NcPartition but
    without the noncrossing constraint."""

    n: int
    blocks: Blocks

    def __post_init__(self):
        canon, n = _validate_blocks(self.blocks)
        if n != self.n or canon != self.blocks:
            raise InvalidPartitionError("blocks are not a canonical partition of {1..n}")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> SetPartition:
        canon, n = _validate_blocks(blocks)
        return cls(n, canon)

    def to_json_blocks(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]


@dataclass(frozen=True)
class IntervalPartition:
    """A partition of {1..n} into contiguous intervals.

    ``cuts`` holds the positions c with a block boundary between c and c+1,
    so cuts is a subset of {1..n-1} and the empty cut set is the one-block
    partition.
    """

    n: int
    cuts: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidPartitionError(f"ground set must be nonempty, got n = {self.n}")
        if list(self.cuts) != sorted(set(self.cuts)):
            raise InvalidPartitionError("cuts must be strictly increasing")
        if self.cuts and not (1 <= self.cuts[0] and self.cuts[-1] <= self.n - 1):
            raise InvalidPartitionError("cuts must lie in 1..n-1")

    @property
    def blocks(self) -> Blocks:
        bounds = (0,) + self.cuts + (self.n,)
        return tuple(tuple(range(lo + 1, hi + 1)) for lo, hi in zip(bounds, bounds[1:]))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> IntervalPartition:
        canon, n = _validate_blocks(blocks)
        cuts = []
        pos = 0
        for block in canon:
            if block != tuple(range(pos + 1, pos + len(block) + 1)):
                raise InvalidPartitionError(f"block {block} is not a contiguous interval")
            pos += len(block)
            if pos < n:
                cuts.append(pos)
        return cls(n, tuple(cuts))

    def to_json_blocks(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]


def enumerate_set_partitions(n: int, cap: int | None = None) -> list[SetPartition]:
    """All Bell(n) set partitions of {1..n} in a fixed deterministic order."""
    cap = SET_PARTITION_CAP if cap is None else cap
    if n < 1:
        raise InvalidPartitionError(f"n must be positive, got {n}")
    if n > cap:
        raise CapExceededError(f"enumerate_set_partitions: n = {n} exceeds cap {cap}")
    return list(_set_partitions(n))


@lru_cache(maxsize=None)
def _set_partitions(n: int) -> tuple[SetPartition, ...]:
    # restricted growth strings: a[i] <= 1 + max(a[:i]), element i joins block a[i]
    out = []
    a = [0] * n

    def grow(i: int, width: int):
        if i == n:
            blocks = [[] for _ in range(width)]
            for x in range(n):
                blocks[a[x]].append(x + 1)
            out.append(SetPartition(n, tuple(tuple(b) for b in blocks)))
            return
        for v in range(width + 1):
            a[i] = v
            grow(i + 1, max(width, v + 1))

    grow(0, 0)
    out.sort(key=lambda p: p.blocks)
    return tuple(out)


def enumerate_interval_partitions(n: int, cap: int | None = None) -> list[IntervalPartition]:
    """All 2^(n-1) interval partitions of {1..n}, by increasing cut sets."""
    cap = INTERVAL_CAP if cap is None else cap
    if n < 1:
        raise InvalidPartitionError(f"n must be positive, got {n}")
    if n > cap:
        raise CapExceededError(f"enumerate_interval_partitions: n = {n} exceeds cap {cap}")
    out = []
    for r in range(n):
        for cuts in combinations(range(1, n), r):
            out.append(IntervalPartition(n, cuts))
    return out


def interval_join(a: IntervalPartition, b: IntervalPartition) -> IntervalPartition:
    """Join of interval partitions: intersect the cut sets."""
    if a.n != b.n:
        raise InvalidPartitionError(f"ground sets differ: {a.n} vs {b.n}")
    return IntervalPartition(a.n, tuple(sorted(set(a.cuts) & set(b.cuts))))


def classical_join(a: SetPartition, b: SetPartition) -> SetPartition:
    """Join in the full partition lattice: transitive closure via union-find."""
    if a.n != b.n:
        raise InvalidPartitionError(f"ground sets differ: {a.n} vs {b.n}")
    parent = list(range(a.n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for block in a.blocks + b.blocks:
        root = find(block[0])
        for x in block[1:]:
            parent[find(x)] = root
    groups: dict[int, list[int]] = {}
    for x in range(1, a.n + 1):
        groups.setdefault(find(x), []).append(x)
    return SetPartition(a.n, tuple(sorted(tuple(g) for g in groups.values())))


def enumerate_family(family: str, n: int, cap: int | None = None) -> list:
    """Enumerate the partitions of one lattice family, deterministic order."""
    if family == "free":
        return nc_lattice.enumerate_nc(n, cap=cap)
    if family == "classical":
        return enumerate_set_partitions(n, cap=cap)
    if family == "boolean":
        return enumerate_interval_partitions(n, cap=cap)
    raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")


def join_family(family: str, a, b):
    """Least upper bound of a and b inside the given lattice family."""
    if family == "free":
        if not isinstance(a, NcPartition) or not isinstance(b, NcPartition):
            raise InvalidPartitionError("free join expects NcPartition values")
        return nc_lattice.join(a, b)
    if family == "classical":
        if not isinstance(a, SetPartition) or not isinstance(b, SetPartition):
            raise InvalidPartitionError("classical join expects SetPartition values")
        return classical_join(a, b)
    if family == "boolean":
        if not isinstance(a, IntervalPartition) or not isinstance(b, IntervalPartition):
            raise InvalidPartitionError("boolean join expects IntervalPartition values")
        return interval_join(a, b)
    raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")


def family_top(family: str, n: int):
    """The one-block partition of the family."""
    if family == "free":
        return nc_lattice.top(n)
    if family == "classical":
        return SetPartition(n, (tuple(range(1, n + 1)),))
    if family == "boolean":
        return IntervalPartition(n, ())
    raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")


def family_bottom(family: str, n: int):
    """The all-singletons partition of the family."""
    if family == "free":
        return nc_lattice.bottom(n)
    if family == "classical":
        return SetPartition(n, tuple((i,) for i in range(1, n + 1)))
    if family == "boolean":
        return IntervalPartition(n, tuple(range(1, n)))
    raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")
