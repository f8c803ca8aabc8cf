"""van Emde Boas tree over ``[0, U)``.

Standard layout: ``min`` is kept out of the clusters, ``max`` is cached, the
base case is ``U = 2``. Clusters are created on first use so allocation stays
proportional to ``U``. ``max_depth`` records the deepest recursion seen, which
is bounded by ``ceil(log2 log2 U) + 1``.
"""
from __future__ import annotations

from .errors import UniverseOverflow


class _Node:
    __slots__ = ("u", "bits", "lo_bits", "min", "max", "summary", "clusters")

    def __init__(self, bits: int):
        self.bits = bits
        self.u = 1 << bits
        self.lo_bits = bits >> 1
        self.min = None
        self.max = None
        self.summary = None
        self.clusters = None if bits <= 1 else [None] * (1 << (bits - self.lo_bits))

    def _cluster(self, h):
        c = self.clusters[h]
        if c is None:
            c = self.clusters[h] = _Node(self.lo_bits)
        return c

    def _summary(self):
        if self.summary is None:
            self.summary = _Node(self.bits - self.lo_bits)
        return self.summary

    def contains(self, x, depth, stats):
        stats.see(depth)
        if x == self.min or x == self.max:
            return True
        if self.bits <= 1:
            return False
        h, l = x >> self.lo_bits, x & ((1 << self.lo_bits) - 1)
        c = self.clusters[h]
        return c is not None and c.contains(l, depth + 1, stats)

    def successor(self, x, depth, stats):
        stats.see(depth)
        if self.bits <= 1:
            if x == 0 and self.max == 1:
                return 1
            return None
        if self.min is not None and x < self.min:
            return self.min
        lb = self.lo_bits
        h, l = x >> lb, x & ((1 << lb) - 1)
        c = self.clusters[h]
        if c is not None and c.max is not None and l < c.max:
            return (h << lb) | c.successor(l, depth + 1, stats)
        if self.summary is None:
            return None
        nh = self.summary.successor(h, depth + 1, stats)
        if nh is None:
            return None
        return (nh << lb) | self.clusters[nh].min

    def insert(self, x, depth, stats):
        stats.see(depth)
        if self.min is None:
            self.min = self.max = x
            return
        if x < self.min:
            x, self.min = self.min, x
        if self.bits > 1:
            lb = self.lo_bits
            h, l = x >> lb, x & ((1 << lb) - 1)
            c = self._cluster(h)
            if c.min is None:
                self._summary().insert(h, depth + 1, stats)
                c.min = c.max = l
            else:
                c.insert(l, depth + 1, stats)
        if x > self.max:
            self.max = x

    def delete(self, x, depth, stats):
        stats.see(depth)
        if self.min == self.max:
            self.min = self.max = None
            return
        if self.bits <= 1:
            self.min = 1 if x == 0 else 0
            self.max = self.min
            return
        lb = self.lo_bits
        if x == self.min:
            first = self.summary.min
            x = (first << lb) | self.clusters[first].min
            self.min = x
        h, l = x >> lb, x & ((1 << lb) - 1)
        c = self.clusters[h]
        c.delete(l, depth + 1, stats)
        if c.min is None:
            self.summary.delete(h, depth + 1, stats)
            if x == self.max:
                smax = self.summary.max
                self.max = self.min if smax is None else (smax << lb) | self.clusters[smax].max
        elif x == self.max:
            self.max = (h << lb) | c.max


class _Stats:
    __slots__ = ("max_depth",)

    def __init__(self):
        self.max_depth = 0

    def see(self, d):
        if d > self.max_depth:
            self.max_depth = d


class VebTree:
    def __init__(self, universe: int):
        if universe < 1:
            raise ValueError("universe must be positive")
        self.universe = universe
        bits = max(1, (universe - 1).bit_length())
        self.capacity = 1 << bits
        self._root = _Node(bits)
        self._stats = _Stats()
        self._size = 0

    @property
    def max_depth(self) -> int:
        return self._stats.max_depth

    def __len__(self):
        return self._size

    def _check(self, x):
        if not 0 <= x < self.universe:
            raise UniverseOverflow(f"key {x} outside [0, {self.universe})")

    def contains(self, x: int) -> bool:
        self._check(x)
        return self._root.contains(x, 0, self._stats)

    __contains__ = contains

    def insert(self, x: int) -> None:
        self._check(x)
        if not self._root.contains(x, 0, self._stats):
            self._root.insert(x, 0, self._stats)
            self._size += 1

    def delete(self, x: int) -> None:
        self._check(x)
        if self._root.contains(x, 0, self._stats):
            self._root.delete(x, 0, self._stats)
            self._size -= 1

    def min(self):
        return self._root.min

    def max(self):
        return self._root.max

    def successor(self, x: int):
        self._check(x)
        return self._root.successor(x, 0, self._stats)

    def __iter__(self):
        x = self._root.min
        while x is not None:
            yield x
            x = self._root.successor(x, 0, self._stats)

    def clear(self) -> None:
        """Delete members one at a time; cost follows membership, not ``U``."""
        while self._root.min is not None:
            self._root.delete(self._root.min, 0, self._stats)
        self._size = 0
