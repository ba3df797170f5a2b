"""Preference interval tree (PIT) over the gaps of a sorted list.

For a list ``r_1 > r_2 > ... > r_l`` (most preferred first) the tree has
``l + 1`` leaves holding, left to right, the intervals
``(-inf, r_l), (r_l, r_{l-1}), ..., (r_1, +inf)``.  Every internal node
covers the union of its children's intervals and keeps the separating item
as ``mid``.

Nodes live in an index arena: parallel ``int64`` arrays addressed by node id,
with ``-1`` for a missing link.  The root is node ``0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import EmptyList

NEG_INF = -1
POS_INF = -2
NO_NODE = -1


def boundary_str(b: int) -> str:
    if b == NEG_INF:
        return "-inf"
    if b == POS_INF:
        return "+inf"
    return str(b)


def pit_depth(size: int) -> int:
    """Depth (in levels) of a PIT built from ``size`` items: ``ceil(1 + log2(size + 1))``."""
    return 1 + size.bit_length()


@dataclass(frozen=True)
class PitNode:
    left: int
    right: int
    mid: Optional[int]
    parent: Optional[int]
    lchild: Optional[int]
    rchild: Optional[int]

    @property
    def is_leaf(self) -> bool:
        return self.mid is None


class Pit:
    """Immutable PIT arena.  Build with :func:`build_pit`."""

    __slots__ = ("left", "right", "mid", "parent", "lchild", "rchild",
                 "leaf_slot", "node_depth", "depth", "size")

    def __init__(self, left, right, mid, parent, lchild, rchild, leaf_slot, node_depth, size):
        self.left = left
        self.right = right
        self.mid = mid
        self.parent = parent
        self.lchild = lchild
        self.rchild = rchild
        # leaf_slot[u] = left-to-right leaf position for leaves, -1 for internal nodes
        self.leaf_slot = leaf_slot
        self.node_depth = node_depth
        self.depth = int(node_depth.max())
        self.size = size
        for a in (left, right, mid, parent, lchild, rchild, leaf_slot, node_depth):
            a.setflags(write=False)

    root = 0

    def __len__(self) -> int:
        return len(self.left)

    def node(self, u: int) -> PitNode:
        def opt(a):
            v = int(a[u])
            return None if v == NO_NODE else v
        mid = int(self.mid[u])
        return PitNode(int(self.left[u]), int(self.right[u]),
                       None if self.lchild[u] == NO_NODE else mid,
                       opt(self.parent), opt(self.lchild), opt(self.rchild))

    def is_leaf(self, u: int) -> bool:
        return self.lchild[u] == NO_NODE

    def leaves(self) -> list[int]:
        """Leaf node ids ordered left to right."""
        ids = np.flatnonzero(self.leaf_slot >= 0)
        return [int(u) for u in ids[np.argsort(self.leaf_slot[ids])]]

    def insertion_index(self, leaf: int) -> int:
        """Index at which an item inside ``leaf``'s interval goes in the most-preferred-first list."""
        return self.size - int(self.leaf_slot[leaf])

    def dump(self) -> str:
        lines = []
        for u in range(len(self)):
            mid = "-" if self.is_leaf(u) else boundary_str(int(self.mid[u]))
            par = "-" if self.parent[u] == NO_NODE else str(int(self.parent[u]))
            lines.append(f"{int(self.node_depth[u])} {u}: ({boundary_str(int(self.left[u]))}, "
                         f"{boundary_str(int(self.right[u]))}) mid={mid} parent={par}")
        return "\n".join(lines)


def build_pit(sorted_items: Sequence[int]) -> Pit:
    """Build the PIT of a most-preferred-first list by recursive bisection.

    A node covering ``k`` leaf intervals gives the first ``ceil(k/2)`` of them
    to its left child.
    """
    items = [int(x) for x in sorted_items]
    if not items:
        raise EmptyList("cannot build a preference interval tree from an empty list")
    size = len(items)
    # bounds[k] is the left end of leaf k; leaf k = (bounds[k], bounds[k+1])
    bounds = [NEG_INF] + items[::-1] + [POS_INF]
    n_nodes = 2 * (size + 1) - 1

    left = np.empty(n_nodes, np.int64)
    right = np.empty(n_nodes, np.int64)
    mid = np.full(n_nodes, NO_NODE, np.int64)
    parent = np.full(n_nodes, NO_NODE, np.int64)
    lchild = np.full(n_nodes, NO_NODE, np.int64)
    rchild = np.full(n_nodes, NO_NODE, np.int64)
    leaf_slot = np.full(n_nodes, -1, np.int64)
    depth = np.empty(n_nodes, np.int64)

    # breadth-first so node ids grow with depth; each entry: (id, parent, lo, hi, depth)
    queue = [(0, NO_NODE, 0, size + 1, 1)]
    next_id = 1
    head = 0
    while head < len(queue):
        u, par, lo, hi, d = queue[head]
        head += 1
        left[u], right[u], parent[u], depth[u] = bounds[lo], bounds[hi], par, d
        k = hi - lo
        if k == 1:
            leaf_slot[u] = lo
            continue
        split = lo + (k + 1) // 2
        mid[u] = bounds[split]
        lchild[u], rchild[u] = next_id, next_id + 1
        queue.append((next_id, u, lo, split, d + 1))
        queue.append((next_id + 1, u, split, hi, d + 1))
        next_id += 2
    return Pit(left, right, mid, parent, lchild, rchild, leaf_slot, depth, size)


def locate_interval(pit: Pit, probe: int, precedes: Callable[[int, int], bool]) -> int:
    """Leaf whose interval contains ``probe``, given exact comparisons.

    ``precedes(a, b)`` must return True when item ``a`` is preferred to ``b``.
    """
    u = pit.root
    while not pit.is_leaf(u):
        if precedes(probe, int(pit.mid[u])):
            u = int(pit.rchild[u])
        else:
            u = int(pit.lchild[u])
    return u


def order_from_ranking(ranking: Sequence[int]) -> Callable[[int, int], bool]:
    pos = {item: k for k, item in enumerate(ranking)}
    return lambda a, b: pos[a] < pos[b]
