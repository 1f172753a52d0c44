"""
Counting engine for the dual Garside structure on braids.

The divisors of the dual Garside element on n strands are in bijection with
noncrossing partitions, and a pair (a, b) of divisors sits in normal position
exactly when the Kreweras complement of a meets b in the bottom partition.
This module builds the 0/1 incidence matrix M_n of that relation over the
fixed enumeration order of NC(n), and derives from it:

- the counts b(n, d) of normal sequences of length at most d, via iterated
  row-vector products with M_n (never materializing matrix powers);
- the exact determinant of M_n by fraction-free (Bareiss) elimination over
  big integers, with the closed product formula as an independent oracle;
- determinants of meet matrices Phi(x, y) = phi(x ^ y) for arbitrary exact
  weight functions, together with the Mobius matrix of the lattice order;
- the Perron root of M_n by power iteration on M_n + I;
- the total number of size-k blocks over all of NC(n).

Matrix rows are stored as Python integers used as bitsets ("dense
bit-matrix"), bit j of row i being the (i, j) entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .errors import CapExceededError, ConvergenceError, InvalidPartitionError
from .nc_lattice import (
    ENUM_CAP,
    NcPartition,
    bottom,
    catalan,
    enumerate_nc,
    kreweras,
    leq,
    meet,
)

MATRIX_CAP = 9        # Cat_9 = 4862 rows
DET_CAP = 8
MEET_DET_CAP = 6
SPECTRAL_CAP = 8
SPECTRAL_MAX_ITER = 100_000


@dataclass(frozen=True)
class IncidenceMatrix:
    """The 0/1 normality matrix over a fixed enumeration order of NC(n)."""

    n: int
    order: tuple[NcPartition, ...]   # row/column indexing of NC(n)
    rows: tuple[int, ...]            # bitsets; bit j of rows[i] is entry (i, j)

    @property
    def size(self) -> int:
        return len(self.order)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def dense(self) -> list[list[int]]:
        m = self.size
        return [[(row >> j) & 1 for j in range(m)] for row in self.rows]

    def ones(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    def to_csv(self) -> str:
        """Rows of comma-separated 0/1 entries, after a header line holding
        the partition order as a JSON array of block lists."""
        import json

        header = json.dumps([p.to_json_blocks() for p in self.order],
                            separators=(",", ":"))
        lines = [header]
        m = self.size
        for row in self.rows:
            lines.append(",".join(str((row >> j) & 1) for j in range(m)))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CountVector:
    """Counts of normal sequences of length d grouped by final partition."""

    n: int
    d: int
    order: tuple[NcPartition, ...]
    counts: tuple[int, ...]          # aligned with order; entries nonnegative

    def total(self) -> int:
        return sum(self.counts)

    def value(self, p: NcPartition) -> int:
        return self.counts[self.order.index(p)]

    def as_dict(self) -> dict[NcPartition, int]:
        return dict(zip(self.order, self.counts))


def normal_pair(a: NcPartition, b: NcPartition) -> bool:
    """Whether (a, b) is a normal pair: kreweras(a) meets b in the bottom."""
    return meet(kreweras(a), b).is_bottom()


def _pair_mask(p: NcPartition) -> int:
    """Bitset over element pairs (i < j) lying in a common block of p.

    Two partitions have meet bottom iff their pair masks are disjoint, which
    turns each incidence entry into a single AND.
    """
    m = 0
    n = p.n
    for block in p.blocks:
        for i, j in combinations(block, 2):
            m |= 1 << ((i - 1) * n + (j - 1))
    return m


@lru_cache(maxsize=None)
def _incidence_rows(n: int) -> tuple[int, ...]:
    """Bitset rows of M_n over the enumerate_nc order."""
    order = enumerate_nc(n)
    masks = [_pair_mask(p) for p in order]
    rows = []
    for p in order:
        ka = _pair_mask(kreweras(p))
        row = 0
        for j, mb in enumerate(masks):
            if not (ka & mb):
                row |= 1 << j
        rows.append(row)
    return tuple(rows)


def incidence_matrix(n: int, order: Sequence[NcPartition] | None = None,
                     cap: int | None = None) -> IncidenceMatrix:
    """The normality incidence matrix of NC(n).

    With no explicit order the rows follow enumerate_nc(n); passing a
    reordering of NC(n) produces the simultaneously row/column permuted
    matrix, which leaves all derived quantities unchanged.
    """
    cap = MATRIX_CAP if cap is None else cap
    if n > cap:
        raise CapExceededError(f"incidence_matrix: n = {n} exceeds cap {cap}")
    if order is None:
        return IncidenceMatrix(n, tuple(enumerate_nc(n)), _incidence_rows(n))
    order = tuple(order)
    if sorted(order, key=lambda p: p.blocks) != enumerate_nc(n):
        raise InvalidPartitionError("order must be a permutation of NC(n)")
    masks = [_pair_mask(p) for p in order]
    rows = []
    for p in order:
        ka = _pair_mask(kreweras(p))
        row = 0
        for j, mb in enumerate(masks):
            if not (ka & mb):
                row |= 1 << j
        rows.append(row)
    return IncidenceMatrix(n, order, tuple(rows))


@lru_cache(maxsize=None)
def _adjacency(n: int) -> tuple[tuple[int, ...], ...]:
    """adjacency[i] = column indices of the ones in row i of M_n."""
    m = catalan(n)
    return tuple(
        tuple(j for j in range(m) if (row >> j) & 1)
        for row in _incidence_rows(n)
    )


def count_braids(n: int, d: int, cap: int | None = None) -> int:
    """The number of braids of normal length at most d on n strands.

    Equals the sum of all entries of M_n^(d-1), computed as d - 1 successive
    row-vector products of the all-ones vector with M_n. For d = 1 no matrix
    is needed and the count is catalan(n).
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if d == 1:
        effective = ENUM_CAP if cap is None else cap
        if n > effective:
            raise CapExceededError(f"count_braids: n = {n} exceeds cap {effective}")
        if n < 1:
            raise InvalidPartitionError(f"n must be positive, got {n}")
        return catalan(n)
    return count_by_last(n, d, cap=cap).total()


def count_by_last(n: int, d: int, cap: int | None = None) -> CountVector:
    """Counts of length-d normal sequences grouped by their final partition."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    cap = MATRIX_CAP if cap is None else cap
    if n > cap:
        raise CapExceededError(f"count_by_last: n = {n} exceeds cap {cap}")
    order = tuple(enumerate_nc(n))
    m = len(order)
    v = [1] * m
    adj = _adjacency(n)
    for _ in range(d - 1):
        new = [0] * m
        for i, vi in enumerate(v):
            if vi:
                for j in adj[i]:
                    new[j] += vi
        v = new
    return CountVector(n, d, order, tuple(v))


def determinant_formula(n: int) -> int:
    """Closed product formula for |det M_n|:
    product over k = 2..n of catalan(k-1) ** C(2n-k-1, n-1)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    value = 1
    for k in range(2, n + 1):
        value *= catalan(k - 1) ** math.comb(2 * n - k - 1, n - 1)
    return value


def determinant_exact(n: int, cap: int | None = None) -> int:
    """Signed determinant of M_n by fraction-free Bareiss elimination.

    Big-integer arithmetic throughout, full pivoting on magnitude with the
    sign tracked through row and column swaps. Exact for any n, but cubic in
    Cat_n, hence the cap.
    """
    cap = DET_CAP if cap is None else cap
    if n > cap:
        raise CapExceededError(f"determinant_exact: n = {n} exceeds cap {cap}")
    matrix = incidence_matrix(n, cap=cap).dense()
    return _bareiss(matrix)


def _bareiss(matrix: list[list[int]]) -> int:
    """Fraction-free elimination; consumes its argument."""
    a = matrix
    m = len(a)
    if m == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(m - 1):
        best, bi, bj = 0, -1, -1
        for i in range(k, m):
            ai = a[i]
            for j in range(k, m):
                v = ai[j]
                if v and abs(v) > best:
                    best, bi, bj = abs(v), i, j
        if bi < 0:
            return 0
        if bi != k:
            a[k], a[bi] = a[bi], a[k]
            sign = -sign
        if bj != k:
            for row in a:
                row[k], row[bj] = row[bj], row[k]
            sign = -sign
        ak = a[k]
        pivot = ak[k]
        for i in range(k + 1, m):
            ai = a[i]
            aik = ai[k]
            ai[k + 1:] = [(pivot * ai[j] - aik * ak[j]) // prev
                          for j in range(k + 1, m)]
        prev = pivot
    return sign * a[m - 1][m - 1]


def meet_matrix_det(n: int, phi: Callable[[NcPartition], Fraction | int],
                    cap: int | None = None) -> Fraction:
    """Determinant of the meet matrix Phi(x, y) = phi(meet(x, y)) over NC(n).

    Exact Gaussian elimination over rationals. The companion identity says
    this equals the product over x of phi_hat(x), where phi_hat is the
    Mobius transform of phi along the lattice order; see mobius_matrix.
    """
    cap = MEET_DET_CAP if cap is None else cap
    if n > cap:
        raise CapExceededError(f"meet_matrix_det: n = {n} exceeds cap {cap}")
    order = enumerate_nc(n)
    values = {p: Fraction(phi(p)) for p in order}
    mat = [[values[meet(x, y)] for y in order] for x in order]
    m = len(mat)
    det = Fraction(1)
    for k in range(m):
        pivot_row = next((i for i in range(k, m) if mat[i][k] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != k:
            mat[k], mat[pivot_row] = mat[pivot_row], mat[k]
            det = -det
        pivot = mat[k][k]
        det *= pivot
        for i in range(k + 1, m):
            factor = mat[i][k] / pivot
            if factor:
                row, krow = mat[i], mat[k]
                for j in range(k + 1, m):
                    row[j] -= factor * krow[j]
    return det


def mobius_matrix(n: int, cap: int | None = None) -> tuple[list[NcPartition], list[list[int]]]:
    """The Mobius matrix of NC(n): the inverse of the order matrix.

    Returns (order, mu) with mu[i][j] = mu(order[i], order[j]) when
    order[j] <= order[i] and 0 otherwise, where order is the enumerate_nc
    indexing. Computed by inverting the unitriangular order matrix along a
    linear extension, independent of the multiplicative product formula.
    """
    cap = MEET_DET_CAP if cap is None else cap
    if n > cap:
        raise CapExceededError(f"mobius_matrix: n = {n} exceeds cap {cap}")
    order = enumerate_nc(n)
    m = len(order)
    below = [[leq(order[j], order[i]) for j in range(m)] for i in range(m)]
    # finer elements (more blocks) first gives a linear extension
    ext = sorted(range(m), key=lambda i: -len(order[i].blocks))
    pos = {idx: t for t, idx in enumerate(ext)}
    mu = [[0] * m for _ in range(m)]
    for i in range(m):
        mu[i][i] = 1
        # fill mu(x, z) for z < x in decreasing extension position
        for t in range(pos[i] - 1, -1, -1):
            z = ext[t]
            if not below[i][z]:
                continue
            total = 0
            for s in range(t + 1, pos[i] + 1):
                u = ext[s]
                if below[i][u] and below[u][z]:
                    total += mu[i][u]
            mu[i][z] = -total
    return order, mu


@dataclass(frozen=True)
class SpectralResult:
    """Perron root estimate from power iteration."""

    value: float                 # spectral radius estimate
    iterations: int
    achieved_tol: float          # last difference of Rayleigh quotients
    vector: tuple[float, ...]    # final normalized iterate, entrywise positive
    converged: bool


def spectral_radius(n: int, tol: float = 1e-9, cap: int | None = None,
                    max_iter: int = SPECTRAL_MAX_ITER) -> SpectralResult:
    """Spectral radius of M_n by power iteration on M_n + I.

    The shift by the identity moves the spectrum right by exactly one, making
    the dominant eigenvalue strictly dominant for the nonnegative matrix; the
    returned value subtracts the one again. Iteration starts from the
    deterministic all-ones vector and stops when successive Rayleigh
    quotients differ by less than tol.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    cap = SPECTRAL_CAP if cap is None else cap
    if n > cap:
        raise CapExceededError(f"spectral_radius: n = {n} exceeds cap {cap}")
    mat = incidence_matrix(n, cap=cap)
    a = np.array(mat.dense(), dtype=np.float64) + np.eye(mat.size)
    x = np.ones(mat.size) / math.sqrt(mat.size)
    prev = None
    for it in range(1, max_iter + 1):
        y = a @ x
        lam = float(x @ y)
        x = y / np.linalg.norm(y)
        if prev is not None:
            diff = abs(lam - prev)
            if diff < tol:
                return SpectralResult(lam - 1.0, it, diff, tuple(x), True)
        prev = lam
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations",
        estimate=(prev if prev is not None else float("nan")) - 1.0,
        iterate=tuple(x),
        iterations=max_iter,
    )


def part_size_total(n: int, k: int, cap: int | None = None) -> int:
    """Total number of size-k blocks over all noncrossing partitions of {1..n}.

    By direct enumeration; equals C(2n-k-1, n-1), which the test suite
    checks independently.
    """
    if not (1 <= k <= n):
        raise ValueError(f"need 1 <= k <= n, got k = {k}, n = {n}")
    cap = ENUM_CAP if cap is None else cap
    if n > cap:
        raise CapExceededError(f"part_size_total: n = {n} exceeds cap {cap}")
    total = 0
    for p in enumerate_nc(n):
        total += sum(1 for b in p.blocks if len(b) == k)
    return total
