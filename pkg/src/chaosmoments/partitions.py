"""
Set partitions and non-crossing partitions of ``{1, ..., n}``.

Set partitions are generated from restricted-growth strings, non-crossing
ones by decomposing on the block that contains the first point. Both
generators emit canonical partitions (blocks sorted by least element,
elements ascending inside a block) in a deterministic order.

Enumeration is exponential, so it is gated by caps. The defaults can be
overridden per call or through the environment variables
``CHAOSMOMENTS_SET_PARTITION_CAP`` and ``CHAOSMOMENTS_NC_PARTITION_CAP``.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .errors import CapacityError, InvalidInputError

__all__ = [
    "SetPartition",
    "NonCrossingPartition",
    "enumerate_set_partitions",
    "enumerate_noncrossing_partitions",
    "catalan_number",
    "bell_number",
    "partition_counts",
    "block_type_counts",
    "is_noncrossing",
    "set_partition_cap",
    "noncrossing_cap",
]

DEFAULT_SET_PARTITION_CAP = 12
DEFAULT_NONCROSSING_CAP = 14

FAMILIES = ("all", "noncrossing", "noncrossing_no_singleton", "all_no_singleton")


def set_partition_cap():
    return int(os.environ.get("CHAOSMOMENTS_SET_PARTITION_CAP", DEFAULT_SET_PARTITION_CAP))


def noncrossing_cap():
    return int(os.environ.get("CHAOSMOMENTS_NC_PARTITION_CAP", DEFAULT_NONCROSSING_CAP))


@dataclass(frozen=True, slots=True)
class SetPartition:
    """A partition of ``{1..n}`` stored as a tuple of ascending tuples."""

    blocks: tuple
    n: int

    def __len__(self):
        return len(self.blocks)

    @property
    def block_sizes(self):
        return tuple(len(b) for b in self.blocks)

    def has_singleton(self):
        return any(len(b) == 1 for b in self.blocks)

    def is_canonical(self):
        """Check disjointness, coverage, non-empty blocks and canonical order."""
        seen = [x for b in self.blocks for x in b]
        if sorted(seen) != list(range(1, self.n + 1)):
            return False
        if any(len(b) == 0 or list(b) != sorted(b) for b in self.blocks):
            return False
        firsts = [b[0] for b in self.blocks]
        return firsts == sorted(firsts)

    def is_noncrossing(self):
        return is_noncrossing(self.blocks)

    def __str__(self):
        return "".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)


class NonCrossingPartition(SetPartition):
    """A :class:`SetPartition` known to be non-crossing."""

    __slots__ = ()


def is_noncrossing(blocks):
    """Literal four-index test: no ``p1 < q1 < p2 < q2`` across two blocks."""
    label = {}
    for i, b in enumerate(blocks):
        for x in b:
            label[x] = i
    points = sorted(label)
    for a in range(len(points)):
        for b in range(a + 1, len(points)):
            if label[points[a]] == label[points[b]]:
                continue
            for c in range(b + 1, len(points)):
                if label[points[c]] != label[points[a]]:
                    continue
                for d in range(c + 1, len(points)):
                    if label[points[d]] == label[points[b]]:
                        return False
    return True


def _check_n(n, cap, what):
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InvalidInputError(f"ground-set size must be a positive integer, got {n!r}")
    if n > cap:
        raise CapacityError(n, cap, what)


def _rgs_to_blocks(rgs):
    blocks = [[] for _ in range(max(rgs) + 1)]
    for i, label in enumerate(rgs, start=1):
        blocks[label].append(i)
    return tuple(tuple(b) for b in blocks)


def _restricted_growth_strings(n):
    # a[0] = 0, a[i] <= 1 + max(a[:i]); iterate lexicographically
    a = [0] * n
    m = [0] * n  # m[i] = max(a[:i+1])
    while True:
        yield a
        i = n - 1
        while i > 0 and a[i] > m[i - 1]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        m[i] = max(m[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            m[j] = m[i]


def enumerate_set_partitions(n, cap=None):
    """
    All set partitions of ``{1..n}``, ``Bell(n)`` of them.

    Parameters
    ----------
    n : int
        Ground-set size, ``1 <= n <= cap``.
    cap : int, optional
        Enumeration cap; defaults to :func:`set_partition_cap`.
    """
    _check_n(n, set_partition_cap() if cap is None else cap, "set partitions")
    return [SetPartition(_rgs_to_blocks(a), n) for a in _restricted_growth_strings(n)]


@lru_cache(maxsize=None)
def _nc_interval(lo, hi):
    """Non-crossing partitions of the integer interval [lo, hi] as block tuples."""
    if lo > hi:
        return [()]
    out = []
    rest = list(range(lo + 1, hi + 1))
    # choose the other members of lo's block; the gaps are filled independently
    for mask in range(1 << len(rest)):
        block = [lo] + [x for j, x in enumerate(rest) if mask >> j & 1]
        gaps = [(block[i] + 1, block[i + 1] - 1) for i in range(len(block) - 1)]
        gaps.append((block[-1] + 1, hi))
        partial = [(tuple(block),)]
        for g_lo, g_hi in gaps:
            sub = _nc_interval(g_lo, g_hi)
            partial = [p + s for p in partial for s in sub]
        out.extend(partial)
    return out


def enumerate_noncrossing_partitions(n, cap=None, min_block=1):
    """
    All non-crossing partitions of ``{1..n}``, ``Catalan(n)`` of them.

    ``min_block`` filters to partitions whose blocks all have at least that
    many elements (``min_block=2`` gives the singleton-free family).
    """
    _check_n(n, noncrossing_cap() if cap is None else cap, "non-crossing partitions")
    out = []
    for blocks in _nc_interval(1, n):
        if min_block > 1 and any(len(b) < min_block for b in blocks):
            continue
        out.append(NonCrossingPartition(tuple(sorted(blocks)), n))
    return out


def catalan_number(n):
    if n < 0:
        raise InvalidInputError(f"Catalan index must be non-negative, got {n}")
    return comb(2 * n, n) // (n + 1)


@lru_cache(maxsize=None)
def _bell_row(n):
    # Bell triangle; returns row n, whose first entry is Bell(n)
    if n == 0:
        return (1,)
    prev = _bell_row(n - 1)
    row = [prev[-1]]
    for x in prev:
        row.append(row[-1] + x)
    return tuple(row)


def bell_number(n):
    if n < 0:
        raise InvalidInputError(f"Bell index must be non-negative, got {n}")
    return _bell_row(n)[0]


@lru_cache(maxsize=None)
def _no_singleton_count(n):
    # b(n+1) = sum_{k>=1} C(n,k) b(n-k): choose the companions of point n+1
    if n == 0:
        return 1
    m = n - 1
    return sum(comb(m, k) * _no_singleton_count(m - k) for k in range(1, m + 1))


@lru_cache(maxsize=None)
def _riordan(n):
    # (n+1) R(n) = (n-1) (2 R(n-1) + 3 R(n-2))
    if n == 0:
        return 1
    if n == 1:
        return 0
    return (n - 1) * (2 * _riordan(n - 1) + 3 * _riordan(n - 2)) // (n + 1)


def partition_counts(n, family):
    """Exact partition counts from closed recursions (no enumeration)."""
    if not isinstance(n, int) or n < 1:
        raise InvalidInputError(f"n must be a positive integer, got {n!r}")
    if family == "all":
        return bell_number(n)
    if family == "noncrossing":
        return catalan_number(n)
    if family == "noncrossing_no_singleton":
        return _riordan(n)
    if family == "all_no_singleton":
        return _no_singleton_count(n)
    raise InvalidInputError(f"unknown partition family {family!r}; expected one of {FAMILIES}")


@lru_cache(maxsize=None)
def block_type_counts(n, noncrossing, cap=None):
    """
    Multiplicity of every block-size multiset among the partitions of ``n``.

    Returns a tuple of ``(sizes, count)`` pairs where ``sizes`` is a sorted
    tuple of block sizes. Summing a multiplicative weight over partitions
    only needs these multiplicities, so the enumeration is done once per n.
    """
    if noncrossing:
        _check_n(n, noncrossing_cap() if cap is None else cap, "non-crossing partitions")
        parts = enumerate_noncrossing_partitions(n, cap=cap)
    else:
        _check_n(n, set_partition_cap() if cap is None else cap, "set partitions")
        parts = enumerate_set_partitions(n, cap=cap)
    counter = Counter(tuple(sorted(p.block_sizes)) for p in parts)
    return tuple(sorted(counter.items()))
