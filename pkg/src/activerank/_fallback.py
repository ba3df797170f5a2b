"""Pure-Python implementation of the sampling kernels (see ``_core.pyx``)."""
from __future__ import annotations

from . import _walk


def atc_pair(p, b_max, bounds, rng):
    """Attempting comparison against an item beaten with probability ``p``.

    Returns ``(probe_wins, comparisons)``.
    """
    calls = 0
    random = rng.random

    def duel(_):
        nonlocal calls
        calls += 1
        return random() < p

    won = _walk.atc_loop(duel, 0, int(b_max), bounds.tolist(), rng)
    return won, calls


def ati_walk_row(row, left, right, mid, parent, lchild, rchild,
                 b_max, bounds, early, post_threshold, t_max, rng, calls):
    """Insertion walk with win probabilities ``row[j]``; adds per-opponent counts to ``calls``."""
    random = rng.random
    row = row.tolist()
    counter = [0] * len(row)

    def duel(j):
        counter[j] += 1
        return random() < row[j]

    leaf = _walk.ati_walk(
        duel, left.tolist(), right.tolist(), mid.tolist(), parent.tolist(),
        lchild.tolist(), rchild.tolist(), [int(b) for b in b_max],
        [b.tolist() for b in bounds], early.tolist(), post_threshold, int(t_max), rng)
    for j, c in enumerate(counter):
        calls[j] += c
    return leaf
