"""m-wise merge sort for the regime where comparisons are almost never wrong.

Every iteration of the merge loop counts as one listwise comparison, even when
only one list still has items (no oracle call is made then).  With this
accounting sorting ``m**t`` items costs exactly ``t * m**t`` comparisons.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidParam


@dataclass
class MergeCounter:
    listwise_comparisons: int = 0


def listwise_merge(oracle, lists: Sequence[Sequence[int]], counter: MergeCounter) -> list:
    """Merge most-preferred-first lists by repeatedly comparing their heads."""
    if len(lists) < 2:
        raise InvalidParam("need at least two lists to merge")
    owner = {}
    for k, lst in enumerate(lists):
        for item in lst:
            owner[item] = k
    heads = [0] * len(lists)
    merged = []
    total = sum(len(lst) for lst in lists)
    while len(merged) < total:
        front = [lst[heads[k]] for k, lst in enumerate(lists) if heads[k] < len(lst)]
        counter.listwise_comparisons += 1
        winner = front[0] if len(front) == 1 else oracle.compare(front)
        merged.append(winner)
        heads[owner[winner]] += 1
    return merged


def listwise_merge_sort(oracle, items: Sequence[int], m: int, counter: MergeCounter) -> list:
    """Sort ``items`` (most preferred first) with ``m``-wise comparisons."""
    if m < 2:
        raise InvalidParam(f"m must be at least 2, got {m!r}")
    items = list(items)
    if len(items) <= 1:
        return items
    size = math.ceil(len(items) / m)
    parts = [listwise_merge_sort(oracle, items[k * size:(k + 1) * size], m, counter) for k in range(m)]
    return listwise_merge(oracle, parts, counter)
