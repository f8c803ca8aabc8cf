"""Self-improving sorter for inputs with hidden linear classes.

Training consumes three batches: one to learn constant indices, classes and
lines; one whose pooled values give the V-list; one whose representative
values give slab frequencies for the per-class search trees.

Sorting an instance: each class's representative value picks a slab, whose
stored version yields the class members in order together with their
V-list intervals. Runs sharing an interval are merged with a min-heap, then
intervals are concatenated left to right (constant indices first in the
interval their value opens). A final O(n) check falls back to merge sort on
the rare misprediction, so output is always sorted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import islice

import numpy as np

from .core import (ComparisonCounter, VList, build_vlist, merge_sort_counted, predecessor_index,
                   verify_sorted)
from .errors import DimensionMismatch, InsufficientTraining
from .freq_bst import FreqBST, build_freq_bst, depth_cutoff, lookup
from .linear_learner import (ClassPartition, detect_degenerates, fit_lines, learn_classes,
                             learning_batch_size, DEFAULT_TOL)
from .slab_index import ClassLine, SlabIndex, build_slab_index, locate_slab


def training_sizes(n: int, epsilon: float, freq_multiplier: float = 1.0) -> tuple[int, int, int]:
    """Instances for (class learning, V-list, slab frequencies)."""
    vlist_batch = max(1, math.ceil(math.log(n))) if n > 1 else 1
    freq_batch = max(1, math.ceil(freq_multiplier * n ** epsilon))
    return learning_batch_size(n), vlist_batch, freq_batch


@dataclass
class LinearSorterModel:
    n: int
    epsilon: float
    partition: ClassPartition
    vlist: VList
    marks: dict                 # interval r -> degenerate indices whose value is v_r
    slabs: list                 # SlabIndex per class
    trees: list                 # FreqBST per class
    slab_weights: list = field(default_factory=list)   # per class [(slab, count), ...]

    @property
    def num_classes(self) -> int:
        return len(self.partition.classes)


@dataclass
class SortOutcome:
    order: list
    lookup: int = 0
    merge: int = 0
    verify: int = 0
    fallback_sort: int = 0
    tree_fallbacks: int = 0
    correctness_fallback: bool = False
    group_sizes: dict = field(default_factory=dict)     # interval -> number of runs (|Z_r|)
    occupancy: dict = field(default_factory=dict)       # interval -> number of values (|N_r|)

    @property
    def total(self) -> int:
        return self.lookup + self.merge + self.verify + self.fallback_sort


def _take(stream, k):
    return [np.asarray(x, dtype=float) for x in islice(stream, k)]


def train_linear(stream, epsilon: float, n: int | None = None, tol: float = DEFAULT_TOL,
                 freq_multiplier: float = 1.0) -> LinearSorterModel:
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    stream = iter(stream)
    first = _take(stream, 1)
    if not first:
        raise InsufficientTraining(1, 0)
    n = n or first[0].size
    t1, t2, t3 = training_sizes(n, epsilon, freq_multiplier)
    needed = t1 + t2 + t3

    batch1 = first + _take(stream, t1 - 1)
    batch2 = _take(stream, t2)
    batch3 = _take(stream, t3)
    got = len(batch1) + len(batch2) + len(batch3)
    if got < needed:
        raise InsufficientTraining(needed, got)
    for inst in batch1 + batch2 + batch3:
        if inst.size != n:
            raise DimensionMismatch(f"instance of length {inst.size}, expected {n}")

    learn = np.vstack(batch1)
    degenerates = detect_degenerates(learn)
    partition = fit_lines(learn_classes(learn, degenerates, tol=tol), learn)

    pooled = np.sort(np.concatenate(batch2))
    vlist = build_vlist(pooled.tolist(), t2)

    marks: dict[int, list[int]] = {}
    for i, c in sorted(partition.degenerates.items()):
        r = predecessor_index(vlist, c)
        marks.setdefault(r, []).append(i)

    cutoff = depth_cutoff(epsilon, n)
    freq = np.vstack(batch3)
    slabs, trees, weights = [], [], []
    for members, s in zip(partition.classes, partition.representatives):
        lines = [ClassLine(i, *partition.lines[i]) for i in members]
        si = build_slab_index(lines, vlist)
        counts: dict[int, int] = {}
        for x in freq[:, s].tolist():
            j = locate_slab(si, x)
            counts[j] = counts.get(j, 0) + 1
        pairs = sorted(counts.items())
        slabs.append(si)
        trees.append(_slab_tree(si, pairs, cutoff))
        weights.append(pairs)
    return LinearSorterModel(n, epsilon, partition, vlist, marks, slabs, trees, weights)


def _slab_tree(si: SlabIndex, pairs, cutoff) -> FreqBST:
    keys = [j for j, _ in pairs]
    return build_freq_bst(keys, [si.slab_range(j) for j in keys], [w for _, w in pairs], cutoff)


def _heap_merge(runs, values, counter_box):
    """Merge sorted index runs by value with a binary min-heap; ties by run order."""
    heap = []  # entries [value, run id, position]
    c = 0

    def less(u, w):
        nonlocal c
        c += 1
        if u[0] < w[0]:
            return True
        if w[0] < u[0]:
            return False
        return u[1] < w[1]

    def sift_up(k):
        while k:
            parent = (k - 1) >> 1
            if less(heap[k], heap[parent]):
                heap[k], heap[parent] = heap[parent], heap[k]
                k = parent
            else:
                break

    def sift_down(k):
        size = len(heap)
        while True:
            child = 2 * k + 1
            if child >= size:
                break
            if child + 1 < size and less(heap[child + 1], heap[child]):
                child += 1
            if less(heap[child], heap[k]):
                heap[k], heap[child] = heap[child], heap[k]
                k = child
            else:
                break

    for rid, run in enumerate(runs):
        heap.append([values[run[0]], rid, 0])
        sift_up(len(heap) - 1)
    out = []
    while heap:
        top = heap[0]
        run = runs[top[1]]
        out.append(run[top[2]])
        nxt = top[2] + 1
        if nxt < len(run):
            heap[0] = [values[run[nxt]], top[1], nxt]
        else:
            last = heap.pop()
            if not heap:
                break
            heap[0] = last
        sift_down(0)
    counter_box[0] += c
    return out


def sort_linear(model: LinearSorterModel, instance, counter: ComparisonCounter | None = None) -> SortOutcome:
    """Sort one instance; returns the sorted index order plus comparison accounting."""
    values = instance.tolist() if isinstance(instance, np.ndarray) else list(instance)
    n = model.n
    if len(values) != n:
        raise DimensionMismatch(f"instance of length {len(values)}, model expects {n}")
    M = model.vlist.size
    look = ComparisonCounter()
    tree_fallbacks = 0
    buckets: list = [None] * (M + 1)

    for si, tree, s in zip(model.slabs, model.trees, model.partition.representatives):
        x = values[s]
        hit = lookup(tree, x, look)
        if hit is None:
            tree_fallbacks += 1
            slab = locate_slab(si, x, look)
        else:
            slab = hit.key
        g = si.global_index
        run = None
        run_r = -1
        for l, r in si.tree.walk(si.roots[slab]):
            if r != run_r:
                run = []
                run_r = r
                if buckets[r] is None:
                    buckets[r] = [run]
                else:
                    buckets[r].append(run)
            run.append(g[l])

    merge_box = [0]
    order: list[int] = []
    group_sizes = {}
    occupancy = {}
    marks = model.marks
    for r in range(M + 1):
        marked = marks.get(r)
        if marked:
            order.extend(marked)
        runs = buckets[r]
        if runs is None:
            continue
        group_sizes[r] = len(runs)
        occupancy[r] = sum(len(run) for run in runs)
        if len(runs) == 1:
            order.extend(runs[0])
        else:
            order.extend(_heap_merge(runs, values, merge_box))
    for r, marked in marks.items():
        occupancy[r] = occupancy.get(r, 0) + len(marked)

    ver = ComparisonCounter()
    ok = len(order) == n and verify_sorted(values, order, ver)
    out = SortOutcome(order, lookup=look.count, merge=merge_box[0], verify=ver.count,
                      tree_fallbacks=tree_fallbacks, group_sizes=group_sizes, occupancy=occupancy)
    if not ok:
        fb = ComparisonCounter()
        out.order = merge_sort_counted(range(n), values, fb)
        out.fallback_sort = fb.count
        out.correctness_fallback = True
    if counter is not None:
        counter.add(out.total)
    return out


# --- serialization -----------------------------------------------------------


def model_to_dict(model: LinearSorterModel) -> dict:
    return {
        "kind": "linear",
        "n": model.n,
        "epsilon": model.epsilon,
        "partition": model.partition.to_dict(),
        "vlist": list(model.vlist.boundaries),
        "marks": [[r, idx] for r, idx in sorted(model.marks.items())],
        "slabs": [si.to_dict() for si in model.slabs],
        "slab_weights": [[list(p) for p in pairs] for pairs in model.slab_weights],
        "depth_cutoff": model.trees[0].depth_cutoff if model.trees else depth_cutoff(model.epsilon, model.n),
    }


def model_from_dict(d: dict) -> LinearSorterModel:
    slabs = [SlabIndex.from_dict(x) for x in d["slabs"]]
    weights = [[(int(j), int(w)) for j, w in pairs] for pairs in d["slab_weights"]]
    cutoff = int(d["depth_cutoff"])
    trees = [_slab_tree(si, pairs, cutoff) for si, pairs in zip(slabs, weights)]
    return LinearSorterModel(
        n=int(d["n"]),
        epsilon=float(d["epsilon"]),
        partition=ClassPartition.from_dict(d["partition"]),
        vlist=VList(tuple(float(v) for v in d["vlist"])),
        marks={int(r): [int(i) for i in idx] for r, idx in d["marks"]},
        slabs=slabs,
        trees=trees,
        slab_weights=weights,
    )
