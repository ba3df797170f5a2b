"""Exact ranking by iterative insertion.

The stack, bottom up:

* :func:`atc` -- attempting comparison: sequentially compare two items with
  an anytime confidence band, giving up after a budget set by a guessed gap.
* :func:`ati` -- attempting insertion: a counter-augmented random walk on the
  preference interval tree of the sorted list.  A guess that is too
  optimistic makes it answer "unsure" (``None``) rather than misplace the item.
* :func:`iai` -- retry :func:`ati` with halving guesses until it inserts.
* :func:`iir` -- insert items ``2..n`` one by one.

Logarithms are natural.  Comparisons against the ``-inf``/``+inf`` sentinels of
the tree are resolved without consulting the oracle and are not counted.

Oracles that expose ``win_prob``/``win_row`` (an instance-backed
:class:`~activerank.instance.ComparisonOracle`) are sampled by the compiled
kernels when the algorithm's generator is the oracle's own; any other oracle
goes through the generic loop, which calls ``oracle.compare`` once per
comparison.  Both paths make the same draws in the same order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import _walk, kernels
from .errors import InvalidParam, ScheduleExhausted
from .pit import NEG_INF, POS_INF, build_pit

PI2 = math.pi ** 2
Q = 15 / 16
ROOT_CONFIDENCE = 1 - Q
LEAF_CONFIDENCE = 1 - math.sqrt(Q)
INNER_CONFIDENCE = 1 - Q ** (1 / 3)
DEFAULT_SCHEDULE_CAP = 64


def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 1.0:
        raise InvalidParam(f"confidence delta must lie in (0, 1), got {delta!r}")


def atc_budget(epsilon: float, delta: float) -> int:
    return max(1, math.ceil(math.log(2 / delta) / (2 * epsilon * epsilon)))


def atc_bound(t: int, delta: float) -> float:
    """Half-width of the anytime confidence band after ``t`` comparisons."""
    return math.sqrt(math.log(PI2 * t * t / (3 * delta)) / (2 * t))


@lru_cache(maxsize=64)
def _bound_table(delta: float, length: int) -> np.ndarray:
    table = np.empty(length + 1)
    table[0] = math.inf
    for t in range(1, length + 1):
        table[t] = atc_bound(t, delta)
    table.setflags(write=False)
    return table


def _table_length(b_max: int) -> int:
    return 1 << max(6, (b_max - 1).bit_length())


@dataclass(frozen=True)
class AtcParams:
    epsilon: float
    delta: float

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 0.5:
            raise InvalidParam(f"epsilon must lie in (0, 1/2], got {self.epsilon!r}")
        _check_delta(self.delta)

    @property
    def b_max(self) -> int:
        return atc_budget(self.epsilon, self.delta)

    def bound(self, t: int) -> float:
        return atc_bound(t, self.delta)


def _fast(oracle, rng, use_kernel: bool) -> bool:
    return use_kernel and hasattr(oracle, "win_row") and (rng is None or rng is oracle.rng)


def _rng_of(oracle, rng):
    return rng if rng is not None else oracle.rng


def atc(oracle, i: int, j: int, params: AtcParams, rng=None, *, use_kernel: bool = True) -> int:
    """Attempting comparison of item ``i`` against item or sentinel ``j``; returns the winner."""
    if j == NEG_INF:
        return i
    if j == POS_INF:
        return j
    if i == j:
        raise InvalidParam("cannot compare an item with itself")
    b_max = params.b_max
    bounds = _bound_table(params.delta, _table_length(b_max))
    if _fast(oracle, rng, use_kernel):
        won, calls = kernels.atc_pair(oracle.win_prob(i, j), b_max, bounds, oracle.rng)
        oracle.stats.record_pair(i, j, calls)
    else:
        won = _walk.atc_loop(lambda k: oracle.compare((i, k)) == i, j, b_max, bounds,
                             _rng_of(oracle, rng))
    return i if won else j


# ---------------------------------------------------------------------------
# Attempting insertion


def ati_t_max(depth: int, delta: float) -> int:
    return math.ceil(max(4 * depth, 512 / 25 * math.log(2 / delta)))


def early_threshold(t: int, delta: float) -> float:
    return t / 2 + math.sqrt(t / 2 * math.log(PI2 * t * t / (3 * delta))) + 1


@lru_cache(maxsize=256)
def _early_table(delta: float, t_max: int) -> np.ndarray:
    table = np.empty(t_max + 1)
    table[0] = math.inf
    for t in range(1, t_max + 1):
        table[t] = early_threshold(t, delta)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=64)
def _walk_bounds(length: int) -> np.ndarray:
    stacked = np.ascontiguousarray(np.stack([
        _bound_table(ROOT_CONFIDENCE, length),
        _bound_table(LEAF_CONFIDENCE, length),
        _bound_table(INNER_CONFIDENCE, length),
    ]))
    stacked.setflags(write=False)
    return stacked


def ati_budgets(epsilon: float) -> np.ndarray:
    """Per-comparison budgets at the root, leaves and other internal nodes."""
    return np.array([atc_budget(epsilon, d) for d in (ROOT_CONFIDENCE, LEAF_CONFIDENCE, INNER_CONFIDENCE)],
                    dtype=np.int64)


def ati_call_bound(epsilon: float, t_max: int) -> int:
    """Worst-case number of comparisons a single insertion attempt can spend."""
    return 3 * t_max * int(ati_budgets(epsilon).max())


def ati(oracle, i: int, sorted_items: Sequence[int], epsilon: float, delta: float, rng=None,
        *, use_kernel: bool = True) -> Optional[list]:
    """Try to insert ``i`` into the most-preferred-first list ``sorted_items``.

    Returns the new list, or ``None`` when the attempt is unsure.
    """
    if not 0.0 < epsilon <= 0.5:
        raise InvalidParam(f"epsilon must lie in (0, 1/2], got {epsilon!r}")
    _check_delta(delta)
    sorted_items = list(sorted_items)
    if i in sorted_items:
        raise InvalidParam(f"item {i} is already in the list")
    tree = build_pit(sorted_items)
    t_max = ati_t_max(tree.depth, delta)
    b_max = ati_budgets(epsilon)
    bounds = _walk_bounds(_table_length(int(b_max.max())))
    early = _early_table(delta, t_max)
    post = 1 + 5 / 16 * t_max

    if _fast(oracle, rng, use_kernel):
        row = oracle.win_row(i)
        calls = np.zeros(len(row), dtype=np.int64)
        leaf = kernels.ati_walk_row(row, tree.left, tree.right, tree.mid, tree.parent,
                                    tree.lchild, tree.rchild, b_max, bounds, early, post,
                                    t_max, oracle.rng, calls)
        oracle.stats.record_pairs(i, calls)
    else:
        leaf = _walk.ati_walk(
            lambda k: oracle.compare((i, k)) == i,
            tree.left.tolist(), tree.right.tolist(), tree.mid.tolist(), tree.parent.tolist(),
            tree.lchild.tolist(), tree.rchild.tolist(), b_max.tolist(),
            [b.tolist() for b in bounds], early.tolist(), post, t_max, _rng_of(oracle, rng))

    if leaf < 0:
        return None
    k = tree.insertion_index(leaf)
    return sorted_items[:k] + [i] + sorted_items[k:]


# ---------------------------------------------------------------------------
# Iterative insertion


@dataclass(frozen=True)
class InsertionSchedule:
    """Guess ``2^-(tau+1)`` and confidence ``6 delta / (pi^2 tau^2)`` for attempt ``tau``."""

    delta: float
    cap: int = DEFAULT_SCHEDULE_CAP

    def epsilon(self, tau: int) -> float:
        return 2.0 ** -(tau + 1)

    def confidence(self, tau: int) -> float:
        return 6 * self.delta / (PI2 * tau * tau)


@dataclass(frozen=True)
class Insertion:
    sorted: list
    attempts: int
    comparisons: int


def iai(oracle, i: int, sorted_items: Sequence[int], delta: float,
        schedule_cap: int = DEFAULT_SCHEDULE_CAP, rng=None, *, use_kernel: bool = True) -> Insertion:
    """Insert ``i`` with overall confidence ``1 - delta`` by retrying :func:`ati`."""
    _check_delta(delta)
    schedule = InsertionSchedule(delta, schedule_cap)
    before = oracle.stats.total
    for tau in range(1, schedule.cap + 1):
        placed = ati(oracle, i, sorted_items, schedule.epsilon(tau), schedule.confidence(tau), rng,
                     use_kernel=use_kernel)
        if placed is not None:
            return Insertion(placed, tau, oracle.stats.total - before)
    raise ScheduleExhausted(i, schedule.cap)


@dataclass(frozen=True)
class RankingOutcome:
    ranking: tuple
    comparisons_used: int
    per_item_insertion_cost: tuple
    attempts: tuple = ()
    failed: bool = False
    reason: str = ""


def iir(oracle, n: int, delta: float, rng=None, *, schedule_cap: int = DEFAULT_SCHEDULE_CAP,
        use_kernel: bool = True) -> RankingOutcome:
    """Rank items ``1..n``; correct with probability at least ``1 - delta``.

    Raises :class:`ScheduleExhausted` if some item cannot be inserted.
    """
    if n < 1:
        raise InvalidParam(f"n must be positive, got {n!r}")
    _check_delta(delta)
    answer = [1]
    cost = [0] * n
    attempts = [0] * n
    start = oracle.stats.total
    for item in range(2, n + 1):
        ins = iai(oracle, item, answer, delta / (n - 1), schedule_cap, rng, use_kernel=use_kernel)
        answer = ins.sorted
        cost[item - 1] = ins.comparisons
        attempts[item - 1] = ins.attempts
    return RankingOutcome(tuple(answer), oracle.stats.total - start, tuple(cost), tuple(attempts))
