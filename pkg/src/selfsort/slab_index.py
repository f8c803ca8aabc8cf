"""Vertical-slab decomposition of one class's line arrangement.

The arrangement consists of the class lines ``y = slope*x + intercept`` (``x``
being the representative's value) and the horizontal lines ``y = v_r``. A
left-to-right sweep over its vertices yields one version of a persistent
sequence per slab: the lines in bottom-to-top order, each tagged with the
V-list interval it lies in throughout the slab.
"""
from __future__ import annotations

from array import array
from dataclasses import dataclass

import numpy as np

from .core import ComparisonCounter, VList, bisect_counted
from .errors import ZeroSlopeLine
from .persistent import PersistentSequence


@dataclass(frozen=True)
class ClassLine:
    index: int
    slope: float
    intercept: float

    def at(self, x: float) -> float:
        return self.slope * x + self.intercept


class SlabIndex:
    """Slab boundaries plus one persistent version per slab.

    Slab ``j`` spans ``[boundaries[j-1], boundaries[j])`` with the outer slabs
    unbounded; there are ``len(boundaries) + 1`` slabs.
    """

    def __init__(self, lines, num_boundaries, boundaries, initial_order, initial_labels,
                 change_counts, change_pos, change_line, change_label):
        self.lines = list(lines)
        self.num_vlist = num_boundaries
        self.boundaries = list(boundaries)
        self.global_index = [ln.index for ln in self.lines]
        self.initial_order = list(initial_order)
        self.initial_labels = list(initial_labels)
        self.change_counts = array("i", change_counts)
        self.change_pos = array("i", change_pos)
        self.change_line = array("i", change_line)
        self.change_label = array("i", change_label)
        self.tree = PersistentSequence(self.initial_order, self.initial_labels)
        roots = array("i", [self.tree.initial_root])
        root = self.tree.initial_root
        k = 0
        for cnt in self.change_counts:
            for _ in range(cnt):
                root = self.tree.set(root, self.change_pos[k], self.change_line[k], self.change_label[k])
                k += 1
            self.tree.commit()
            roots.append(root)
        self.roots = roots

    @property
    def num_slabs(self) -> int:
        return len(self.boundaries) + 1

    def slab_range(self, slab: int) -> tuple[float, float]:
        lo = self.boundaries[slab - 1] if slab > 0 else -np.inf
        hi = self.boundaries[slab] if slab < len(self.boundaries) else np.inf
        return float(lo), float(hi)

    def entries_local(self, slab: int) -> list[tuple[int, int]]:
        return self.tree.walk(self.roots[slab])

    def to_dict(self) -> dict:
        return {
            "lines": [[ln.index, ln.slope, ln.intercept] for ln in self.lines],
            "num_vlist": self.num_vlist,
            "boundaries": self.boundaries,
            "initial_order": self.initial_order,
            "initial_labels": self.initial_labels,
            "change_counts": self.change_counts.tolist(),
            "changes": [self.change_pos.tolist(), self.change_line.tolist(), self.change_label.tolist()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SlabIndex":
        pos, line, label = d["changes"]
        return cls([ClassLine(int(i), float(a), float(b)) for i, a, b in d["lines"]], int(d["num_vlist"]),
                   [float(x) for x in d["boundaries"]], d["initial_order"], d["initial_labels"],
                   d["change_counts"], pos, line, label)


def build_slab_index(lines, vlist: VList) -> SlabIndex:
    """Sweep the arrangement of ``lines`` and the V-list horizontals from left to right.

    Leftmost slab: lines by decreasing slope, positive slopes labelled 0 and
    negative ones ``M``. Crossing ``y = v_r`` upward relabels a line to the
    largest interval starting at ``v_r``; crossing downward to the interval
    just below. Lines meeting at a vertex are reordered by their order right
    of it, which is a swap for two lines and a block reversal for concurrent ones.
    """
    lines = list(lines)
    if not lines:
        raise ValueError("need at least one line")
    for ln in lines:
        if ln.slope == 0:
            raise ZeroSlopeLine(f"line for index {ln.index} has zero slope")
    s = len(lines)
    a = np.array([ln.slope for ln in lines], dtype=float)
    b = np.array([ln.intercept for ln in lines], dtype=float)
    v = np.asarray(vlist.boundaries, dtype=float)
    M = v.size

    order = sorted(range(s), key=lambda l: (-a[l], b[l], lines[l].index))
    label_of = [0 if a[l] > 0 else M for l in range(s)]
    init_labels = [label_of[l] for l in order]

    # line/horizontal crossings with the label each one sets
    if M:
        x_h = ((v[None, :] - b[:, None]) / a[:, None]).ravel()
        up = np.searchsorted(v, v, side="right")
        down = np.searchsorted(v, v, side="left")
        lab_h = np.where(a[:, None] > 0, up[None, :], down[None, :]).ravel()
        line_h = np.repeat(np.arange(s), M)
    else:
        x_h = np.empty(0)
        lab_h = np.empty(0, dtype=np.int64)
        line_h = np.empty(0, dtype=np.int64)
    # line/line crossings; -1 marks a reorder participant
    p, q = np.triu_indices(s, 1)
    keep = a[p] != a[q]
    p, q = p[keep], q[keep]
    x_s = (b[q] - b[p]) / (a[p] - a[q])

    ev_x = np.concatenate([x_h, x_s, x_s])
    ev_line = np.concatenate([line_h, p, q]).astype(np.int64)
    ev_lab = np.concatenate([lab_h, np.full(2 * x_s.size, -1)]).astype(np.int64)
    bounds, ev_b = np.unique(ev_x, return_inverse=True)
    ev_b = ev_b.ravel()
    srt = np.argsort(ev_b, kind="stable")
    ev_b = ev_b[srt].tolist()
    ev_line = ev_line[srt].tolist()
    ev_lab = ev_lab[srt].tolist()
    bounds_list = bounds.tolist()
    nb = len(bounds_list)

    pos_of = [0] * s
    for p_, l in enumerate(order):
        pos_of[l] = p_
    cur = list(order)
    positive = (a > 0).tolist()
    al, bl = a.tolist(), b.tolist()

    counts, cpos, cline, clab = [], [], [], []
    k = 0
    nev = len(ev_b)
    for j in range(nb):
        relabel = {}
        movers = set()
        while k < nev and ev_b[k] == j:
            l, lab = ev_line[k], ev_lab[k]
            if lab < 0:
                movers.add(l)
            elif l in relabel:
                relabel[l] = max(relabel[l], lab) if positive[l] else min(relabel[l], lab)
            else:
                relabel[l] = lab
            k += 1
        n_changes = 0
        for l in sorted(relabel):
            if relabel[l] != label_of[l]:
                label_of[l] = relabel[l]
                cpos.append(pos_of[l])
                cline.append(l)
                clab.append(label_of[l])
                n_changes += 1
        if movers:
            x = bounds_list[j]
            xm = x + (bounds_list[j + 1] - x) / 2 if j + 1 < nb else x + max(1.0, abs(x))
            slots = sorted(pos_of[l] for l in movers)
            ranked = sorted(movers, key=lambda l: (al[l] * xm + bl[l], al[l], lines[l].index))
            for slot, l in zip(slots, ranked):
                if cur[slot] != l:
                    cur[slot] = l
                    pos_of[l] = slot
                    cpos.append(slot)
                    cline.append(l)
                    clab.append(label_of[l])
                    n_changes += 1
        counts.append(n_changes)
    return SlabIndex(lines, M, bounds_list, order, init_labels, counts, cpos, cline, clab)


def locate_slab(index: SlabIndex, x: float, counter: ComparisonCounter | None = None) -> int:
    """Slab whose half-open x-range contains ``x``."""
    return bisect_counted(index.boundaries, x, counter)


def slab_entries(index: SlabIndex, slab: int) -> list[tuple[int, int]]:
    """``(input index, interval)`` pairs of the slab, bottom to top."""
    g = index.global_index
    return [(g[l], r) for l, r in index.tree.walk(index.roots[slab])]
