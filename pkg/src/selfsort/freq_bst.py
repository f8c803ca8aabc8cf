"""Weight-balanced search trees over ordered half-open key ranges.

Keys are ids (slabs or V-list intervals) that carry an x-range ``[lo, hi)``.
The root is the first key at which the prefix weight reaches half of the
total; both sides recurse. Every subtree therefore weighs at most half of its
parent, which bounds the depth of a key of weight ``w`` by ``log2(W / w)``.

A lookup deeper than ``depth_cutoff`` gives up, as does one that falls into a
gap between stored keys; the caller then binary-searches the full key space.
"""
from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from itertools import accumulate
from typing import NamedTuple

from .core import ComparisonCounter

# Hit allowed at depth == cutoff; flip to make "below the cutoff" strict.
HIT_AT_CUTOFF = True


class Hit(NamedTuple):
    key: int
    depth: int


FALLBACK = None


def depth_cutoff(epsilon: float, size: int) -> int:
    """``floor((epsilon / 3) * log2(size))``."""
    if size <= 1:
        return 0
    return int(math.floor(epsilon / 3 * math.log2(size) + 1e-12))


@dataclass
class FreqBST:
    keys: list          # key ids in x order
    lo: list
    hi: list
    weights: list
    left: list
    right: list
    root: int
    depth_cutoff: int

    def __len__(self):
        return len(self.keys)

    def depths(self) -> dict:
        """Depth of every stored key id."""
        out = {}
        stack = [(self.root, 0)] if self.root >= 0 else []
        while stack:
            node, d = stack.pop()
            out[self.keys[node]] = d
            if self.left[node] >= 0:
                stack.append((self.left[node], d + 1))
            if self.right[node] >= 0:
                stack.append((self.right[node], d + 1))
        return out

    def expected_depth(self) -> float:
        total = sum(self.weights)
        if not total:
            return 0.0
        d = self.depths()
        return sum(w * d[k] for k, w in zip(self.keys, self.weights)) / total

    def inorder(self) -> list:
        out, stack, node = [], [], self.root
        while stack or node >= 0:
            while node >= 0:
                stack.append(node)
                node = self.left[node]
            node = stack.pop()
            out.append(self.keys[node])
            node = self.right[node]
        return out

    def to_pairs(self) -> list:
        return [[k, w] for k, w in zip(self.keys, self.weights)]


def build_freq_bst(keys, ranges, weights, cutoff: int) -> FreqBST:
    """Build over ``keys`` (x order) with ranges ``[(lo, hi), ...]`` and weights >= 1.

    Zero-weight keys are dropped.
    """
    kept = [(k, r, w) for k, r, w in zip(keys, ranges, weights) if w > 0]
    ks = [k for k, _, _ in kept]
    lo = [float(r[0]) for _, r, _ in kept]
    hi = [float(r[1]) for _, r, _ in kept]
    ws = [w for _, _, w in kept]
    n = len(ks)
    left = [-1] * n
    right = [-1] * n
    prefix = [0] + list(accumulate(ws))

    def split(a, b):
        # first m in [a, b) where 2 * (prefix[m+1] - prefix[a]) >= total
        base = prefix[a]
        total = prefix[b] - base
        m = bisect_left(prefix, base + total / 2, a + 1, b + 1) - 1
        return min(max(m, a), b - 1)

    root = -1
    if n:
        root = split(0, n)
        stack = [(root, 0, n)]
        while stack:
            m, a, b = stack.pop()
            if a < m:
                c = split(a, m)
                left[m] = c
                stack.append((c, a, m))
            if m + 1 < b:
                c = split(m + 1, b)
                right[m] = c
                stack.append((c, m + 1, b))
    return FreqBST(ks, lo, hi, ws, left, right, root, cutoff)


def lookup(tree: FreqBST, x: float, counter: ComparisonCounter | None = None):
    """Return ``Hit(key, depth)`` or ``FALLBACK`` (``None``)."""
    node = tree.root
    depth = 0
    limit = tree.depth_cutoff if HIT_AT_CUTOFF else tree.depth_cutoff - 1
    c = 0
    lo, hi, left, right = tree.lo, tree.hi, tree.left, tree.right
    result = FALLBACK
    while node >= 0 and depth <= limit:
        c += 1
        if x < lo[node]:
            node = left[node]
        else:
            c += 1
            if x >= hi[node]:
                node = right[node]
            else:
                result = Hit(tree.keys[node], depth)
                break
        depth += 1
    if counter is not None:
        counter.count += c
    return result
