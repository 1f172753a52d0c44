"""
Moment-cumulant transforms over three partition lattices, the product
formula for cumulants of independent variables, and the generating-series
identity linking the two transforms.

Sequences are 1-indexed mathematically: a sequence (t_1, ..., t_N) is passed
as a plain Python sequence whose slot l-1 holds t_l. All arithmetic is exact
(integers and fractions.Fraction); nothing here touches floating point.

The lattice family is selected by tag ("free", "classical", "boolean"); the
moment of order n is the sum over the family's partitions of {1..n} of the
multiplicative weight prod over blocks b of t_{|b|}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .errors import CapExceededError
from .partition_families import (
    FAMILIES,
    enumerate_family,
    family_bottom,
    family_top,
    join_family,
)

Rational = Union[Fraction, int]

# Feasibility guards for the brute-force tuple sums.
PRODUCT_MAX_K = 4
PRODUCT_MAX_N = {"free": 6, "classical": 6, "boolean": 10}


def _as_fractions(seq: Sequence[Rational]) -> tuple[Fraction, ...]:
    terms = tuple(Fraction(t) for t in seq)
    if not terms:
        raise ValueError("sequence must have at least one term")
    return terms


def partition_weight(p, t: Sequence[Rational]) -> Fraction:
    """Multiplicative weight of a partition: product over blocks of t_{|b|}.

    Works for any of the three partition types; t is 1-indexed by block size.
    """
    terms = _as_fractions(t)
    w = Fraction(1)
    for block in p.blocks:
        size = len(block)
        if size > len(terms):
            raise ValueError(
                f"block of size {size} exceeds sequence length {len(terms)}")
        w *= terms[size - 1]
    return w


def moments_from_cumulants(r: Sequence[Rational], family: str = "free",
                           cap: int | None = None) -> tuple[Fraction, ...]:
    """Moments of the sequence with cumulants r, over the given lattice family.

    M_n is the sum of the multiplicative weights of all partitions of {1..n}
    in the family.
    """
    terms = _as_fractions(r)
    out = []
    for n in range(1, len(terms) + 1):
        total = Fraction(0)
        for p in enumerate_family(family, n, cap=cap):
            w = Fraction(1)
            for block in p.blocks:
                w *= terms[len(block) - 1]
            total += w
        out.append(total)
    return tuple(out)


def cumulants_from_moments(m: Sequence[Rational], family: str = "free",
                           cap: int | None = None) -> tuple[Fraction, ...]:
    """Inverse of moments_from_cumulants, by the triangular solve
    R_n = M_n - sum of weights of all partitions except the one-block one."""
    terms = _as_fractions(m)
    r: list[Fraction] = []
    for n in range(1, len(terms) + 1):
        partial = Fraction(0)
        for p in enumerate_family(family, n, cap=cap):
            if len(p.blocks) == 1:
                continue
            w = Fraction(1)
            for block in p.blocks:
                w *= r[len(block) - 1]
            partial += w
        r.append(terms[n - 1] - partial)
    return tuple(r)


@lru_cache(maxsize=None)
def _join_table(family: str, n: int) -> tuple[tuple[tuple[int, ...], ...], int, int]:
    """(join index table, bottom index, top index) for the family on {1..n}."""
    elements = enumerate_family(family, n)
    index = {p: i for i, p in enumerate(elements)}
    table = tuple(
        tuple(index[join_family(family, a, b)] for b in elements)
        for a in elements
    )
    return table, index[family_bottom(family, n)], index[family_top(family, n)]


def _check_product_guard(family: str, n: int, k: int) -> None:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")
    if k < 1:
        raise ValueError(f"need at least one sequence, got k = {k}")
    if k > PRODUCT_MAX_K or n > PRODUCT_MAX_N[family]:
        raise CapExceededError(
            f"tuple enumeration guard exceeded: family={family}, n={n}, k={k} "
            f"(limits: k <= {PRODUCT_MAX_K}, n <= {PRODUCT_MAX_N[family]})")


def _joining_tuple_sum(family: str, n: int, weights: list[list]) -> Fraction | int:
    """Sum over k-tuples of partitions whose join is the top partition of the
    product of per-position weights.

    Walks the k-fold product depth first, carrying the running join. Once the
    running join reaches the top every completion qualifies, so the remaining
    positions contribute their total weight as a single factor.
    """
    table, bottom_idx, top_idx = _join_table(family, n)
    k = len(weights)
    m = len(table)
    # suffix[d] = product over positions >= d of the position's total weight
    suffix = [1] * (k + 1)
    for d in range(k - 1, -1, -1):
        suffix[d] = sum(weights[d]) * suffix[d + 1]

    total = 0

    def walk(depth: int, joined: int, w) -> None:
        nonlocal total
        if joined == top_idx:
            total += w * suffix[depth]
            return
        if depth == k:
            return
        joined_row = table[joined]
        ws = weights[depth]
        for x in range(m):
            walk(depth + 1, joined_row[x], w * ws[x])

    walk(0, bottom_idx, 1)
    return total


def product_cumulants(rs: Sequence[Sequence[Rational]], family: str = "free",
                      order: int | None = None) -> tuple[Fraction, ...]:
    """Cumulants of a product of independent variables from factor cumulants.

    The cumulant of order n is the sum, over all k-tuples of partitions of
    {1..n} in the family whose join is the one-block partition, of the
    product of the factor weights. Exact brute-force evaluation, guarded by
    PRODUCT_MAX_K / PRODUCT_MAX_N.
    """
    seqs = [_as_fractions(r) for r in rs]
    k = len(seqs)
    if order is None:
        order = min(len(s) for s in seqs)
    if any(len(s) < order for s in seqs):
        raise ValueError(f"every sequence needs at least {order} terms")
    _check_product_guard(family, order, k)
    # integer fast path: weights stay Python ints when every input is integral
    integral = all(f.denominator == 1 for s in seqs for f in s[:order])
    out = []
    for n in range(1, order + 1):
        elements = enumerate_family(family, n)
        weights = []
        for s in seqs:
            terms = [t.numerator for t in s] if integral else s
            weights.append(
                [_weight_of(p, terms) for p in elements])
        out.append(Fraction(_joining_tuple_sum(family, n, weights)))
    return tuple(out)


def _weight_of(p, terms):
    w = 1
    for block in p.blocks:
        w *= terms[len(block) - 1]
    return w


def count_joining_tuples(family: str, n: int, k: int) -> int:
    """Number of k-tuples of partitions of {1..n} in the family whose join is
    the one-block partition. Brute force over the k-fold product."""
    _check_product_guard(family, n, k)
    m = len(enumerate_family(family, n))
    ones = [[1] * m for _ in range(k)]
    return int(_joining_tuple_sum(family, n, ones))


@dataclass(frozen=True)
class FormalSeries:
    """A truncated power series with constant term exactly 1."""

    coeffs: tuple[Fraction, ...]   # c_0 .. c_N

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] != 1:
            raise ValueError("constant term must be 1")

    @classmethod
    def from_tail(cls, terms: Sequence[Rational]) -> FormalSeries:
        """Build 1 + t_1 z + t_2 z^2 + ... from the 1-indexed tail."""
        return cls((Fraction(1),) + _as_fractions(terms))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def tail(self) -> tuple[Fraction, ...]:
        return self.coeffs[1:]


def _mul_trunc(a: list[Fraction], b: list[Fraction], order: int) -> list[Fraction]:
    c = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a):
        if ai:
            for j in range(min(len(b), order + 1 - i)):
                if b[j]:
                    c[i + j] += ai * b[j]
    return c


def _shifted_powers(m_series: FormalSeries) -> list[list[Fraction]]:
    """Powers (z*M(z))^l for l = 0..N, truncated at order N."""
    order = m_series.order
    base = [Fraction(0)] + list(m_series.coeffs[:order])  # z * M(z) truncated
    powers = [[Fraction(1)] + [Fraction(0)] * order]
    for _ in range(order):
        powers.append(_mul_trunc(powers[-1], base, order))
    return powers


def series_compose_check(m_series: FormalSeries, r_series: FormalSeries) -> bool:
    """Whether R(z M(z)) equals M(z) through the common truncation order."""
    if m_series.order != r_series.order:
        raise ValueError("series must share one truncation order")
    order = m_series.order
    powers = _shifted_powers(m_series)
    acc = [Fraction(1)] + [Fraction(0)] * order
    for l in range(1, order + 1):
        rl = r_series.coeffs[l]
        if rl:
            for idx in range(l, order + 1):
                acc[idx] += rl * powers[l][idx]
    return tuple(acc) == m_series.coeffs


def series_solve_R(m_series: FormalSeries) -> FormalSeries:
    """The unique series R with R(z M(z)) = M(z), order by order.

    The coefficient of z^n in the composition is R_n plus terms involving
    only R_1 .. R_{n-1}, because z M(z) starts with z; each step is a single
    linear solve.
    """
    order = m_series.order
    powers = _shifted_powers(m_series)
    r: list[Fraction] = []
    for n in range(1, order + 1):
        acc = Fraction(0)
        for l in range(1, n):
            acc += r[l - 1] * powers[l][n]
        r.append(m_series.coeffs[n] - acc)
    return FormalSeries((Fraction(1),) + tuple(r))
