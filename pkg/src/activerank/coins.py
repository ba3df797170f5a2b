"""Turning biased coins into comparisons.

Pick one of the coins uniformly at random and toss it; repeat until a toss
shows heads and report that coin.  Coin ``k`` is reported with probability
``mu_k / sum(mu)``, i.e. the coins behave like items of a multinomial-logit
instance with scores proportional to their head probabilities.  Every report
costs exactly one head, and ``m / sum(mu)`` tosses on average.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import InvalidParam
from .instance import OracleStats, _check_set


def _check_coins(mus: Sequence[float]) -> None:
    for mu in mus:
        if not 0.0 < mu <= 1.0:
            raise InvalidParam(f"head probabilities must lie in (0, 1], got {mu!r}")


def coin_reduction_compare_listwise(mus: Sequence[float], rng: np.random.Generator) -> tuple[int, int]:
    """Return ``(index of the winning coin, number of tosses)``."""
    if len(mus) < 2:
        raise InvalidParam("need at least two coins")
    _check_coins(mus)
    m = len(mus)
    tosses = 0
    while True:
        w = int(rng.integers(m))
        tosses += 1
        if rng.random() < mus[w]:
            return w, tosses


def coin_reduction_compare(mu_i: float, mu_j: float, rng: np.random.Generator) -> tuple[int, int]:
    """Pairwise case: winner is 0 (first coin) w.p. ``mu_i / (mu_i + mu_j)``."""
    return coin_reduction_compare_listwise((mu_i, mu_j), rng)


class CoinOracle:
    """Comparison oracle backed by coins; item ``k`` is the coin ``mus[k-1]``.

    ``heads`` equals the number of comparisons answered and ``tosses`` the
    total number of coin flips spent on them.
    """

    supports_listwise = True

    def __init__(self, mus: Sequence[float], rng: np.random.Generator):
        _check_coins(mus)
        self.mus = tuple(float(m) for m in mus)
        self.rng = rng
        self.stats = OracleStats()
        self.tosses = 0

    @property
    def n(self) -> int:
        return len(self.mus)

    @property
    def heads(self) -> int:
        return self.stats.total

    def compare(self, items: Sequence[int]) -> int:
        _check_set(items, self.n)
        w, tosses = coin_reduction_compare_listwise([self.mus[k - 1] for k in items], self.rng)
        self.tosses += tosses
        self.stats.record(items)
        return items[w]
