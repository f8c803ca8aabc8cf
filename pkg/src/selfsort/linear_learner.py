"""Training-time recovery of constant indices, hidden linear classes and their lines."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientTraining, LengthMismatch, RepresentativeDegenerate

DEFAULT_TOL = 1e-9


def learning_batch_size(n: int) -> int:
    """Instances needed for class learning: ``ceil(3 ln^2 n)``, at least 3."""
    return max(3, math.ceil(3 * math.log(n) ** 2)) if n > 1 else 3


@dataclass
class ClassPartition:
    degenerates: dict
    classes: list
    representatives: list
    lines: dict = field(default_factory=dict)

    def class_sets(self) -> tuple:
        return tuple(sorted(tuple(sorted(c)) for c in self.classes))

    def to_dict(self) -> dict:
        return {
            "degenerates": [[i, c] for i, c in sorted(self.degenerates.items())],
            "classes": [list(c) for c in self.classes],
            "representatives": list(self.representatives),
            "lines": [[i, a, b] for i, (a, b) in sorted(self.lines.items())],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClassPartition":
        return cls(
            degenerates={int(i): float(c) for i, c in d["degenerates"]},
            classes=[list(map(int, c)) for c in d["classes"]],
            representatives=[int(s) for s in d["representatives"]],
            lines={int(i): (float(a), float(b)) for i, a, b in d["lines"]},
        )


def _as_matrix(instances) -> np.ndarray:
    try:
        x = np.asarray(instances, dtype=float)
    except ValueError:
        raise LengthMismatch("instances have different lengths") from None
    if x.ndim != 2:
        raise LengthMismatch("instances have different lengths")
    return x


def detect_degenerates(instances) -> dict:
    """Indices whose value is identical in every supplied instance, with that value."""
    x = _as_matrix(instances)
    if x.shape[0] == 0:
        return {}
    const = np.all(x == x[0], axis=0)
    return {int(i): float(x[0, i]) for i in np.flatnonzero(const)}


def collinear(p1, p2, p3, tol: float = DEFAULT_TOL) -> bool:
    """Zero test of the 3x3 determinant with rows ``(x, y, 1)``, relative to the largest coordinate cubed."""
    (x1, y1), (x2, y2), (x3, y3) = p1, p2, p3
    det = (x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1)
    scale = max(abs(x1), abs(y1), abs(x2), abs(y2), abs(x3), abs(y3))
    return abs(det) <= tol * scale ** 3


class _UnionFind:
    def __init__(self, items):
        self.parent = {i: i for i in items}

    def find(self, i):
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            if rj < ri:
                ri, rj = rj, ri
            self.parent[rj] = ri


def learn_classes(instances, degenerates=(), tol: float = DEFAULT_TOL) -> ClassPartition:
    """Group indices whose consecutive-instance point triples are all collinear.

    Pairs that pass every triple test are joined; classes are connected components.
    """
    x = _as_matrix(instances)
    if x.shape[0] < 3:
        raise InsufficientTraining(3, x.shape[0])
    if isinstance(degenerates, dict):
        deg = dict(degenerates)
    else:
        deg = {int(i): float(x[0, i]) for i in degenerates}
    idx = [i for i in range(x.shape[1]) if i not in deg]
    uf = _UnionFind(idx)
    if len(idx) > 1:
        cols = x[:, idx]
        # per-triple differences relative to the first point of each window
        d1 = cols[1:-1] - cols[:-2]
        d2 = cols[2:] - cols[:-2]
        mag = np.abs(cols)
        win_scale = np.maximum(np.maximum(mag[:-2], mag[1:-1]), mag[2:])
        for p in range(len(idx) - 1):
            det = d1[:, p : p + 1] * d2[:, p + 1 :] - d1[:, p + 1 :] * d2[:, p : p + 1]
            scale = np.maximum(win_scale[:, p : p + 1], win_scale[:, p + 1 :])
            ok = np.all(np.abs(det) <= tol * scale ** 3, axis=0)
            for q in np.flatnonzero(ok):
                uf.union(idx[p], idx[p + 1 + int(q)])
    groups: dict[int, list[int]] = {}
    for i in idx:
        groups.setdefault(uf.find(i), []).append(i)
    classes = sorted(groups.values(), key=lambda c: c[0])
    return ClassPartition(
        degenerates=deg,
        classes=classes,
        representatives=[c[0] for c in classes],
    )


def fit_lines(partition: ClassPartition, instances) -> ClassPartition:
    """Express each class member as a line in its representative's value.

    The two instances used are those with the smallest and largest
    representative value, which distinguishes them whenever any pair does.
    """
    x = _as_matrix(instances)
    lines = {}
    for members, s in zip(partition.classes, partition.representatives):
        col = x[:, s]
        a, b = int(np.argmin(col)), int(np.argmax(col))
        if x.shape[0] < 2 or col[a] == col[b]:
            raise RepresentativeDegenerate(f"index {s} never changes across the training instances")
        xs_a, xs_b = col[a], col[b]
        for i in members:
            if i == s:
                lines[i] = (1.0, 0.0)
                continue
            slope = (x[b, i] - x[a, i]) / (xs_b - xs_a)
            lines[i] = (float(slope), float(x[a, i] - slope * xs_a))
    return ClassPartition(dict(partition.degenerates), [list(c) for c in partition.classes],
                          list(partition.representatives), lines)
