"""Pure-Python attempting comparison and insertion walk.

These loops are written against a ``duel(j) -> bool`` callable that answers
"did the probe beat ``j``" with one comparison.  They serve two purposes:
the generic path for arbitrary oracles, and (through :mod:`._fallback`) the
reference twin of the compiled kernels in ``_core.pyx``.  Any change here
must be mirrored there; the test-suite checks both produce identical draws.

Thresholds are precomputed tables (see :mod:`.ranking`) so both
implementations compare against bit-identical floats.
"""
from __future__ import annotations

from .pit import NEG_INF, NO_NODE, POS_INF


def atc_loop(duel, j, b_max, bounds, rng) -> bool:
    """Return True if the probe is judged preferred to ``j``."""
    if j == NEG_INF:
        return True
    if j == POS_INF:
        return False
    wins = 0
    for t in range(1, b_max + 1):
        if duel(j):
            wins += 1
        p_hat = wins / t
        b = bounds[t]
        if p_hat > 0.5 + b:
            return True
        if p_hat < 0.5 - b:
            return False
    if 2 * wins != b_max:
        return 2 * wins > b_max
    return rng.random() < 0.5


def ati_walk(duel, left, right, mid, parent, lchild, rchild,
             b_max, bounds, early, post_threshold, t_max, rng) -> int:
    """Counter-augmented random walk; returns the chosen leaf id or -1 (unsure).

    ``b_max[k]``/``bounds[k]`` configure the comparisons made at the root
    (k=0), at leaves (k=1) and at other internal nodes (k=2).
    """
    n_nodes = len(left)
    counts = [0] * n_nodes
    x = 0
    for t in range(1, t_max + 1):
        if x == 0:
            if atc_loop(duel, mid[x], b_max[0], bounds[0], rng):
                x = rchild[x]
            else:
                x = lchild[x]
        elif lchild[x] == NO_NODE:
            if (atc_loop(duel, left[x], b_max[1], bounds[1], rng)
                    and not atc_loop(duel, right[x], b_max[1], bounds[1], rng)):
                counts[x] += 1
                if counts[x] > early[t]:
                    return x
            elif counts[x] > 0:
                counts[x] -= 1
            else:
                x = parent[x]
        else:
            if (not atc_loop(duel, left[x], b_max[2], bounds[2], rng)
                    or atc_loop(duel, right[x], b_max[2], bounds[2], rng)):
                x = parent[x]
            elif atc_loop(duel, mid[x], b_max[2], bounds[2], rng):
                x = rchild[x]
            else:
                x = lchild[x]
    best, best_count = -1, -1
    for u in range(n_nodes):
        if lchild[u] == NO_NODE and counts[u] > best_count:
            best, best_count = u, counts[u]
    if best_count >= post_threshold:
        return best
    return -1
