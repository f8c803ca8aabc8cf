"""Persistent fixed-length sequence backed by a balanced tree with path copying.

Slots hold ``(item, label)`` integer pairs. The tree shape is the balanced
tree over slot positions ``0..size-1`` (root at the middle position); every
update copies the root-to-slot path, so each version costs ``O(log size)``
fresh nodes and old versions stay valid. Nodes live in flat ``array('i')``
pools to keep ~10^7 nodes affordable.
"""
from __future__ import annotations

from array import array


class PersistentSequence:
    def __init__(self, items, labels):
        if len(items) != len(labels):
            raise ValueError("items and labels differ in length")
        self.size = len(items)
        self.left = array("i")
        self.right = array("i")
        self.item = array("i")
        self.label = array("i")
        self._frozen = 0
        self.initial_root = self._build(list(items), list(labels), 0, self.size)
        self._frozen = len(self.item)

    @property
    def node_count(self) -> int:
        return len(self.item)

    def _new(self, lft, rgt, item, label) -> int:
        self.left.append(lft)
        self.right.append(rgt)
        self.item.append(item)
        self.label.append(label)
        return len(self.item) - 1

    def _build(self, items, labels, lo, hi) -> int:
        if lo >= hi:
            return -1
        mid = (lo + hi) >> 1
        lft = self._build(items, labels, lo, mid)
        rgt = self._build(items, labels, mid + 1, hi)
        return self._new(lft, rgt, items[mid], labels[mid])

    def commit(self) -> None:
        """Seal the nodes created so far; later updates copy them instead of writing in place."""
        self._frozen = len(self.item)

    def set(self, root: int, pos: int, item: int, label: int) -> int:
        """Return the root of a version with slot ``pos`` replaced.

        Nodes created since the last :meth:`commit` are overwritten in place,
        so several updates can share one new version.
        """
        if not 0 <= pos < self.size:
            raise IndexError(pos)
        L, R, I, B = self.left, self.right, self.item, self.label
        frozen = self._frozen
        lo, hi = 0, self.size
        node = root
        new_root = -1
        parent = -1
        went_left = False
        while True:
            mid = (lo + hi) >> 1
            if node < frozen:
                node = self._new(L[node], R[node], I[node], B[node])
            if parent < 0:
                new_root = node
            elif went_left:
                L[parent] = node
            else:
                R[parent] = node
            if pos == mid:
                I[node] = item
                B[node] = label
                return new_root
            parent = node
            if pos < mid:
                went_left = True
                hi = mid
                node = L[node]
            else:
                went_left = False
                lo = mid + 1
                node = R[node]

    def get(self, root: int, pos: int) -> tuple[int, int]:
        lo, hi = 0, self.size
        node = root
        while True:
            mid = (lo + hi) >> 1
            if pos == mid:
                return self.item[node], self.label[node]
            if pos < mid:
                hi = mid
                node = self.left[node]
            else:
                lo = mid + 1
                node = self.right[node]

    def walk(self, root: int) -> list[tuple[int, int]]:
        """In-order slot contents of one version."""
        L, R, I, B = self.left, self.right, self.item, self.label
        out = []
        stack = []
        node = root
        while stack or node >= 0:
            while node >= 0:
                stack.append(node)
                node = L[node]
            node = stack.pop()
            out.append((I[node], B[node]))
            node = R[node]
        return out
