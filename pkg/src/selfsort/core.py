"""Shared primitives: the V-list, predecessor search and comparison counting.

Only comparisons that involve input values (key vs key, key vs boundary) are
charged to a :class:`ComparisonCounter`; index arithmetic is free.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyTraining


class ComparisonCounter:
    __slots__ = ("count",)

    def __init__(self, count: int = 0):
        self.count = count

    def add(self, k: int = 1) -> None:
        self.count += k

    def __repr__(self):
        return f"ComparisonCounter({self.count})"


@dataclass(frozen=True)
class VList:
    """Non-decreasing boundaries ``v_1..v_M``; ``v_0=-inf`` and ``v_{M+1}=+inf`` are implicit.

    Interval ``r`` is ``[v_r, v_{r+1})`` for ``r`` in ``0..M``.
    """

    boundaries: tuple

    def __post_init__(self):
        b = self.boundaries
        for lo, hi in zip(b, b[1:]):
            if hi < lo:
                raise ValueError("V-list boundaries must be non-decreasing")
        for v in b:
            if not math.isfinite(v):
                raise ValueError("V-list boundaries must be finite")

    @property
    def size(self) -> int:
        return len(self.boundaries)

    @property
    def num_intervals(self) -> int:
        return len(self.boundaries) + 1

    def interval_bounds(self, r: int) -> tuple[float, float]:
        b = self.boundaries
        lo = b[r - 1] if r > 0 else -math.inf
        hi = b[r] if r < len(b) else math.inf
        return lo, hi


def build_vlist(samples: Sequence[float], stride: int) -> VList:
    """Pick every ``stride``-th sample (1-based ranks ``stride, 2*stride, ...``)."""
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if len(samples) == 0:
        raise EmptyTraining("no samples to build a V-list from")
    picked = tuple(float(v) for v in samples[stride - 1 :: stride])
    return VList(picked)


def predecessor_index(vlist: VList, x: float, counter: ComparisonCounter | None = None) -> int:
    """Largest ``r`` with ``v_r <= x`` (``v_0 = -inf``), by binary search."""
    return bisect_counted(vlist.boundaries, x, counter)


def bisect_counted(bounds: Sequence[float], x: float, counter: ComparisonCounter | None = None) -> int:
    # number of entries <= x; at most ceil(log2(len+1)) comparisons
    lo, hi = 0, len(bounds)
    steps = 0
    while lo < hi:
        mid = (lo + hi) >> 1
        steps += 1
        if x < bounds[mid]:
            hi = mid
        else:
            lo = mid + 1
    if counter is not None:
        counter.count += steps
    return lo


def verify_sorted(values: Sequence[float], order: Sequence[int], counter: ComparisonCounter | None = None) -> bool:
    """Check ``values[order]`` is non-decreasing; charges ``len(order) - 1`` comparisons."""
    ok = True
    prev = None
    for i in order:
        v = values[i]
        if prev is not None and v < prev:
            ok = False
        prev = v
    if counter is not None and len(order) > 1:
        counter.count += len(order) - 1
    return ok


def insertion_sort_counted(items: list, values: Sequence[float], counter: ComparisonCounter | None = None) -> list:
    """Stable insertion sort of indices ``items`` by ``values``."""
    out = list(items)
    c = 0
    for j in range(1, len(out)):
        cur = out[j]
        key = values[cur]
        i = j - 1
        while i >= 0:
            c += 1
            if values[out[i]] > key:
                out[i + 1] = out[i]
                i -= 1
            else:
                break
        out[i + 1] = cur
    if counter is not None:
        counter.count += c
    return out


def merge_sort_counted(items: Sequence[int], values: Sequence[float], counter: ComparisonCounter | None = None) -> list:
    """Stable bottom-up merge sort of indices by ``values`` with counted comparisons.

    This is also the benchmark baseline.
    """
    a = list(items)
    n = len(a)
    c = 0
    width = 1
    while width < n:
        out = []
        for lo in range(0, n, 2 * width):
            left = a[lo : lo + width]
            right = a[lo + width : lo + 2 * width]
            i = j = 0
            nl, nr = len(left), len(right)
            while i < nl and j < nr:
                c += 1
                if values[right[j]] < values[left[i]]:
                    out.append(right[j])
                    j += 1
                else:
                    out.append(left[i])
                    i += 1
            if i < nl:
                out.extend(left[i:])
            if j < nr:
                out.extend(right[j:])
        a = out
        width *= 2
    if counter is not None:
        counter.count += c
    return a


def ceil_ln(x: float) -> int:
    return max(1, math.ceil(math.log(x))) if x > 1 else 1
