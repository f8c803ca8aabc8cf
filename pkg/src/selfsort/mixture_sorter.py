"""Self-improving sorter for a hidden mixture of at most ``m`` product distributions.

The V-list has ``mn`` boundaries, i.e. ``mn + 1`` intervals, grouped into
``n`` contiguous buckets (``m`` intervals each, the last one ``m + 1``).
Sorting places every ``x_i`` with its own frequency tree (binary search over
all intervals on a miss), collects per-interval lists, sorts each list, and
walks the non-empty intervals bucket by bucket through van Emde Boas trees so
no step costs ``O(mn)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import chain, islice

import numpy as np

from .core import (ComparisonCounter, VList, build_vlist, insertion_sort_counted, merge_sort_counted,
                   predecessor_index, verify_sorted)
from .errors import DimensionMismatch, InsufficientTraining
from .freq_bst import FreqBST, build_freq_bst, depth_cutoff, lookup
from .linear_sorter import SortOutcome
from .veb import VebTree

INSERTION_SORT_LIMIT = 16


def training_sizes(n: int, m: int, epsilon: float, freq_multiplier: float = 1.0) -> tuple[int, int, int]:
    """(instances per index block, V-list stride, frequency batch)."""
    mn = m * n
    stride = max(1, math.ceil(math.log(mn))) if mn > 1 else 1
    freq_batch = max(1, math.ceil(freq_multiplier * mn ** epsilon))
    return m * stride, stride, freq_batch


def bucket_of(r: int, m: int, n: int) -> int:
    return min(r // m, n - 1)


@dataclass
class MixtureSorterModel:
    n: int
    m: int
    epsilon: float
    vlist: VList
    trees: list                 # FreqBST per index
    weights: list               # per index [(interval, count), ...]

    @property
    def num_intervals(self) -> int:
        return self.vlist.size + 1

    def bucket_sizes(self) -> list[int]:
        sizes = [0] * self.n
        for r in range(self.num_intervals):
            sizes[bucket_of(r, self.m, self.n)] += 1
        return sizes


class OperationScratch:
    """Reusable per-call state; empty between calls."""

    def __init__(self, model: MixtureSorterModel):
        n, m = model.n, model.m
        self.m = m
        self.n = n
        self.lists: list = [None] * model.num_intervals
        self.touched: list = []
        self.vebs = [VebTree(m if b < n - 1 else m + 1) for b in range(n)]
        self.veb_ops = 0

    def is_empty(self) -> bool:
        return (not self.touched and all(x is None for x in self.lists)
                and all(v.min() is None for v in self.vebs))


def train_mixture(stream, n: int | None = None, m: int = 1, epsilon: float = 0.5,
                  freq_multiplier: float = 1.0) -> MixtureSorterModel:
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if m < 1:
        raise ValueError("m must be >= 1")
    stream = iter(stream)
    first = list(islice(stream, 1))
    if not first:
        raise InsufficientTraining(1, 0)
    n = n or len(first[0])
    block, stride, t_freq = training_sizes(n, m, epsilon, freq_multiplier)
    needed = n * block + t_freq

    samples = np.empty(n * block)
    got = 0
    stream = chain(first, stream)
    for i in range(n):
        for a in range(block):
            row = next(stream, None)
            if row is None:
                raise InsufficientTraining(needed, got)
            if len(row) != n:
                raise DimensionMismatch(f"instance of length {len(row)}, expected {n}")
            samples[i * block + a] = row[i]
            got += 1
    freq_rows = [np.asarray(x, dtype=float) for x in islice(stream, t_freq)]
    got += len(freq_rows)
    if got < needed:
        raise InsufficientTraining(needed, got)

    samples.sort()
    vlist = build_vlist(samples.tolist(), stride)
    freq = np.vstack(freq_rows)
    if freq.shape[1] != n:
        raise DimensionMismatch(f"instance of length {freq.shape[1]}, expected {n}")
    # interval of every (instance, index) value
    where = np.searchsorted(np.asarray(vlist.boundaries), freq, side="right")
    cutoff = depth_cutoff(epsilon, m * n)
    trees, weights = [], []
    for i in range(n):
        keys, counts = np.unique(where[:, i], return_counts=True)
        pairs = list(zip(keys.tolist(), counts.tolist()))
        weights.append(pairs)
        trees.append(_interval_tree(vlist, pairs, cutoff))
    return MixtureSorterModel(n, m, epsilon, vlist, trees, weights)


def _interval_tree(vlist: VList, pairs, cutoff) -> FreqBST:
    keys = [r for r, _ in pairs]
    return build_freq_bst(keys, [vlist.interval_bounds(r) for r in keys], [w for _, w in pairs], cutoff)


def sort_mixture(model: MixtureSorterModel, scratch: OperationScratch, instance,
                 counter: ComparisonCounter | None = None) -> SortOutcome:
    values = instance.tolist() if isinstance(instance, np.ndarray) else list(instance)
    n, m = model.n, model.m
    if len(values) != n:
        raise DimensionMismatch(f"instance of length {len(values)}, model expects {n}")
    look = ComparisonCounter()
    tree_fallbacks = 0
    lists, touched, vebs = scratch.lists, scratch.touched, scratch.vebs
    vops = 0
    vlist = model.vlist
    for i, (x, tree) in enumerate(zip(values, model.trees)):
        hit = lookup(tree, x, look)
        if hit is None:
            tree_fallbacks += 1
            r = predecessor_index(vlist, x, look)
        else:
            r = hit.key
        lst = lists[r]
        if lst is None:
            lists[r] = [i]
            touched.append(r)
        else:
            lst.append(i)
        b = r // m
        if b >= n:
            b = n - 1
        local = r - b * m
        veb = vebs[b]
        vops += 1
        if not veb.contains(local):
            veb.insert(local)
            vops += 1

    intra = ComparisonCounter()
    occupancy = {}
    for r in touched:
        lst = lists[r]
        occupancy[r] = len(lst)
        if len(lst) > 1:
            if len(lst) <= INSERTION_SORT_LIMIT:
                lists[r] = insertion_sort_counted(lst, values, intra)
            else:
                lists[r] = merge_sort_counted(lst, values, intra)

    order: list[int] = []
    for b, veb in enumerate(vebs):
        local = veb.min()
        if local is None:
            continue
        vops += 1
        base = b * m
        while local is not None:
            order.extend(lists[base + local])
            local = veb.successor(local)
            vops += 1
        veb.clear()
    for r in touched:
        lists[r] = None
    touched.clear()
    scratch.veb_ops = vops

    ver = ComparisonCounter()
    ok = len(order) == n and verify_sorted(values, order, ver)
    out = SortOutcome(order, lookup=look.count, merge=intra.count, verify=ver.count,
                      tree_fallbacks=tree_fallbacks, group_sizes=dict(occupancy), occupancy=occupancy)
    if not ok:
        fb = ComparisonCounter()
        out.order = merge_sort_counted(range(n), values, fb)
        out.fallback_sort = fb.count
        out.correctness_fallback = True
    if counter is not None:
        counter.add(out.total)
    return out


def model_to_dict(model: MixtureSorterModel) -> dict:
    return {
        "kind": "mixture",
        "n": model.n,
        "m": model.m,
        "epsilon": model.epsilon,
        "vlist": list(model.vlist.boundaries),
        "weights": [[list(p) for p in pairs] for pairs in model.weights],
        "depth_cutoff": depth_cutoff(model.epsilon, model.m * model.n),
    }


def model_from_dict(d: dict) -> MixtureSorterModel:
    vlist = VList(tuple(float(v) for v in d["vlist"]))
    cutoff = int(d["depth_cutoff"])
    weights = [[(int(r), int(w)) for r, w in pairs] for pairs in d["weights"]]
    trees = [_interval_tree(vlist, pairs, cutoff) for pairs in weights]
    return MixtureSorterModel(int(d["n"]), int(d["m"]), float(d["epsilon"]), vlist, trees, weights)
