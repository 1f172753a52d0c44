"""
Noncrossing partitions of {1, ..., n} and their lattice structure.

A partition is kept in canonical form: each block is a strictly increasing
tuple of 1-based labels and blocks are ordered by their minimum element.
Equality and hashing are structural on the canonical form, so NcPartition
values can be used as dict keys and set members.

The order is reverse refinement: ``a <= b`` iff every block of ``a`` is
contained in some block of ``b``. Under this order NC(n) is a lattice whose
bottom is the all-singletons partition and whose top is the one-block
partition. All values are immutable and every operation is a pure function,
so everything here is safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Mapping

from .errors import CapExceededError, InvalidPartitionError

# Default resource caps; every cap can be overridden per call.
ENUM_CAP = 12         # Cat_12 = 208012 partitions
MOBIUS_ORACLE_CAP = 7

Blocks = tuple[tuple[int, ...], ...]


def catalan(n: int) -> int:
    """The nth Catalan number C(2n, n) / (n + 1), exactly.

    >>> [catalan(n) for n in range(7)]
    [1, 1, 2, 5, 14, 42, 132]
    """
    if n < 0:
        raise ValueError(f"catalan is undefined for n = {n}")
    return math.comb(2 * n, n) // (n + 1)


def _crossing_pair(blocks: Blocks, n: int) -> tuple[int, int] | None:
    """Return indices of two crossing blocks, or None if noncrossing.

    Scans 1..n keeping a stack of open blocks. A partition is noncrossing
    exactly when every element either opens a new block or extends the block
    currently on top of the stack.
    """
    owner = {}
    first = {}
    last = {}
    for bi, block in enumerate(blocks):
        for x in block:
            owner[x] = bi
        first[bi] = block[0]
        last[bi] = block[-1]
    stack: list[int] = []
    for x in range(1, n + 1):
        bi = owner[x]
        if x == first[bi]:
            stack.append(bi)
        elif stack[-1] != bi:
            return bi, stack[-1]
        if x == last[bi]:
            stack.pop()
    return None


def _validate_blocks(blocks: Iterable[Iterable[int]]) -> tuple[Blocks, int]:
    """Canonicalize raw blocks and check they partition {1..n}; return (blocks, n)."""
    canon = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[:1]))
    seen: set[int] = set()
    count = 0
    for block in canon:
        if not block:
            raise InvalidPartitionError("empty block")
        for x in block:
            if not isinstance(x, int) or x < 1:
                raise InvalidPartitionError(f"labels must be positive integers, got {x!r}")
        if len(set(block)) != len(block):
            raise InvalidPartitionError(f"repeated label inside block {block}")
        seen.update(block)
        count += len(block)
    n = max(seen, default=0)
    if n == 0:
        raise InvalidPartitionError("empty partition (n = 0 is rejected)")
    if count != len(seen) or seen != set(range(1, n + 1)):
        raise InvalidPartitionError("blocks do not partition {1..n}")
    return canon, n


@dataclass(frozen=True)
class NcPartition:
    """A noncrossing partition of {1..n} in canonical form."""

    n: int                 # ground-set size, >= 1
    blocks: Blocks         # strictly increasing tuples, ordered by minimum

    def __post_init__(self):
        if self.n < 1:
            raise InvalidPartitionError(f"ground set must be nonempty, got n = {self.n}")
        canon, n = _validate_blocks(self.blocks)
        if n != self.n:
            raise InvalidPartitionError(f"blocks cover {{1..{n}}} but n = {self.n}")
        if canon != self.blocks:
            raise InvalidPartitionError("blocks are not in canonical form")
        crossing = _crossing_pair(self.blocks, self.n)
        if crossing is not None:
            a, b = crossing
            raise InvalidPartitionError(
                f"blocks {self.blocks[a]} and {self.blocks[b]} cross")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> NcPartition:
        """Build a partition from raw blocks, canonicalizing them first."""
        canon, n = _validate_blocks(blocks)
        return cls(n, canon)

    def to_json_blocks(self) -> list[list[int]]:
        """Blocks as plain nested lists, the JSON wire format."""
        return [list(b) for b in self.blocks]

    def block_of(self, x: int) -> tuple[int, ...]:
        for block in self.blocks:
            if x in block:
                return block
        raise KeyError(x)

    def num_blocks(self) -> int:
        return len(self.blocks)

    def is_bottom(self) -> bool:
        return len(self.blocks) == self.n

    def is_top(self) -> bool:
        return len(self.blocks) == 1

    def __repr__(self):
        inner = ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)
        return f"NcPartition({self.n}, {{{inner}}})"


@dataclass(frozen=True)
class BlockProfile:
    """Counts of block sizes of a partition: counts[k] blocks of size k."""

    n: int
    counts: Mapping[int, int]

    def __post_init__(self):
        if sum(k * c for k, c in self.counts.items()) != self.n:
            raise InvalidPartitionError("block sizes do not sum to n")
        if any(c < 0 for c in self.counts.values()):
            raise InvalidPartitionError("negative block count")


def bottom(n: int) -> NcPartition:
    """The all-singletons partition, the lattice bottom."""
    return NcPartition(n, tuple((i,) for i in range(1, n + 1)))


def top(n: int) -> NcPartition:
    """The one-block partition, the lattice top."""
    return NcPartition(n, (tuple(range(1, n + 1)),))


def is_noncrossing(blocks: Iterable[Iterable[int]]) -> bool:
    """Whether the given set partition has no crossing quadruple.

    The input must be a valid partition of {1..n} (n inferred from the
    labels); anything else raises InvalidPartitionError.
    """
    canon, n = _validate_blocks(blocks)
    return _crossing_pair(canon, n) is None


@lru_cache(maxsize=None)
def _nc_blocks_of_size(n: int) -> tuple[Blocks, ...]:
    """All noncrossing partitions of {1..n} as canonical block tuples, sorted.

    Recursion on the block containing 1: its elements split the rest of the
    line into gaps, and each gap is partitioned independently. Results are
    memoized per size because gaps are contiguous runs that only need
    relabeling.
    """
    if n == 0:
        return ((),)
    out: list[Blocks] = []
    for rest in _subsets(range(2, n + 1)):
        first = (1,) + rest
        # gap i is the open interval between consecutive elements of the
        # first block (and after its last element)
        bounds = first + (n + 1,)
        gap_choices = []
        for lo, hi in zip(bounds, bounds[1:]):
            size = hi - lo - 1
            offset = lo
            gap_choices.append(
                tuple(_shift_blocks(p, offset) for p in _nc_blocks_of_size(size)))
        for combo in product(*gap_choices):
            blocks = (first,)
            for gap_blocks in combo:
                blocks += gap_blocks
            out.append(blocks)
    out.sort()
    return tuple(out)


def _subsets(items) -> Iterable[tuple[int, ...]]:
    items = tuple(items)
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def _shift_blocks(blocks: Blocks, offset: int) -> Blocks:
    return tuple(tuple(x + offset for x in b) for b in blocks)


def enumerate_nc(n: int, cap: int | None = None) -> list[NcPartition]:
    """All noncrossing partitions of {1..n}, lexicographically ordered.

    The order is lexicographic on the canonical block representation and is
    the fixed indexing order used by the incidence matrix. The list has
    exactly catalan(n) entries.
    """
    cap = ENUM_CAP if cap is None else cap
    if n < 1:
        raise InvalidPartitionError(f"n must be positive, got {n}")
    if n > cap:
        raise CapExceededError(f"enumerate_nc: n = {n} exceeds cap {cap}")
    return list(_nc_partitions(n))


@lru_cache(maxsize=None)
def _nc_partitions(n: int) -> tuple[NcPartition, ...]:
    return tuple(NcPartition(n, blocks) for blocks in _nc_blocks_of_size(n))


def _block_index(p: NcPartition) -> list[int]:
    """idx[x] = position of the block of x, for x in 1..n (idx[0] unused)."""
    idx = [0] * (p.n + 1)
    for bi, block in enumerate(p.blocks):
        for x in block:
            idx[x] = bi
    return idx


def _require_same_n(a: NcPartition, b: NcPartition) -> None:
    if a.n != b.n:
        raise InvalidPartitionError(f"ground sets differ: {a.n} vs {b.n}")


def leq(a: NcPartition, b: NcPartition) -> bool:
    """Reverse refinement order: every block of a inside some block of b."""
    _require_same_n(a, b)
    idx = _block_index(b)
    return all(all(idx[x] == idx[block[0]] for x in block) for block in a.blocks)


def meet(a: NcPartition, b: NcPartition) -> NcPartition:
    """Greatest lower bound: pairwise intersections of blocks.

    The meet in the full partition lattice of two noncrossing partitions is
    itself noncrossing, so no further adjustment is needed.
    """
    _require_same_n(a, b)
    ia, ib = _block_index(a), _block_index(b)
    groups: dict[tuple[int, int], list[int]] = {}
    for x in range(1, a.n + 1):
        groups.setdefault((ia[x], ib[x]), []).append(x)
    blocks = tuple(sorted(tuple(g) for g in groups.values()))
    return NcPartition(a.n, blocks)


def join(a: NcPartition, b: NcPartition) -> NcPartition:
    """Least upper bound in NC(n).

    First the full partition lattice join (transitive closure of the union
    of the block relations, via union-find), then crossing blocks are merged
    until the result is noncrossing. Each merge strictly decreases the block
    count, so the loop terminates; the result is the minimal noncrossing
    coarsening, which is the NC join.
    """
    _require_same_n(a, b)
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
    blocks = sorted(tuple(g) for g in groups.values())

    while True:
        crossing = _crossing_pair(tuple(blocks), a.n)
        if crossing is None:
            break
        i, j = crossing
        merged = tuple(sorted(blocks[i] + blocks[j]))
        blocks = sorted([blk for k, blk in enumerate(blocks) if k not in (i, j)] + [merged])
    return NcPartition(a.n, tuple(blocks))


def kreweras(p: NcPartition) -> NcPartition:
    """The Kreweras complement, a lattice anti-automorphism of NC(n).

    The partition embeds into the symmetric group as the permutation whose
    cycles are the blocks traversed in increasing order; the complement is
    read off from the cycles of sigma^{-1} followed by the long cycle
    1 -> 2 -> ... -> n -> 1 (rightmost factor applied first). This is the
    convention under which the complement of the top is the bottom and the
    square of the complement is the rotation i -> i - 1.
    """
    n = p.n
    sigma_inv = [0] * (n + 1)
    for block in p.blocks:
        k = len(block)
        for t in range(k):
            sigma_inv[block[(t + 1) % k]] = block[t]
    comp = [0] * (n + 1)
    for x in range(1, n + 1):
        gamma_x = x % n + 1
        comp[x] = sigma_inv[gamma_x]
    blocks = []
    seen = [False] * (n + 1)
    for x in range(1, n + 1):
        if seen[x]:
            continue
        cycle = []
        y = x
        while not seen[y]:
            seen[y] = True
            cycle.append(y)
            y = comp[y]
        blocks.append(tuple(sorted(cycle)))
    return NcPartition(n, tuple(sorted(blocks)))


# Frozen regression constant: applying the Kreweras complement twice rotates
# labels by this shift, uniformly in n (determined empirically, then pinned).
KREWERAS_SQUARE_SHIFT = -1


def rotate(p: NcPartition, s: int) -> NcPartition:
    """Relabel every element i to ((i - 1 + s) mod n) + 1 and recanonicalize."""
    n = p.n
    blocks = tuple(sorted(tuple(sorted((x - 1 + s) % n + 1 for x in b)) for b in p.blocks))
    return NcPartition(n, blocks)


def block_profile(p: NcPartition) -> BlockProfile:
    """Block-size statistics of p: how many blocks of each size."""
    counts: dict[int, int] = {}
    for block in p.blocks:
        counts[len(block)] = counts.get(len(block), 0) + 1
    return BlockProfile(p.n, counts)


def mobius_to_zero(p: NcPartition) -> int:
    """Mobius value mu(p, bottom) by the multiplicative product formula.

    Each block of size k contributes a factor (-1)^(k-1) * catalan(k-1).
    """
    value = 1
    for block in p.blocks:
        k = len(block)
        factor = catalan(k - 1)
        if (k - 1) % 2:
            factor = -factor
        value *= factor
    return value


def mobius_oracle(p: NcPartition, cap: int | None = None) -> int:
    """Mobius value mu(p, bottom) by the defining recursion on [bottom, p].

    Independent of the product formula: enumerates the interval below p and
    applies mu(p, p) = 1, mu(p, y) = -sum of mu(p, u) over y < u <= p.
    Exponential in n, hence the small cap.
    """
    cap = MOBIUS_ORACLE_CAP if cap is None else cap
    if p.n > cap:
        raise CapExceededError(f"mobius_oracle: n = {p.n} exceeds cap {cap}")
    interval = [q for q in enumerate_nc(p.n) if leq(q, p)]
    # coarser elements (fewer blocks) first, so every u > y is ready when y runs
    interval.sort(key=lambda q: len(q.blocks))
    mu: dict[NcPartition, int] = {}
    for y in interval:
        if y == p:
            mu[y] = 1
            continue
        mu[y] = -sum(mu[u] for u in interval if u != y and leq(y, u))
    return mu[bottom(p.n)]
