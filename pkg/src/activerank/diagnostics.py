"""Gap profiles, transitivity checks and the sample-complexity lower bounds.

The bounds are reported as raw sums; the unknown constant in front of them is
never applied, so only ratios between bound values are meaningful.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParam
from .instance import Instance


@dataclass(frozen=True, eq=False)
class GapProfile:
    """Per-pair and per-item gaps of an instance.

    ``delta_pair[i-1, j-1] = |p(i beats j) - 1/2|`` (diagonal is ``nan``),
    ``delta_i`` is the smallest gap of an item against anyone, and
    ``delta_tilde_i`` the smallest gap against its neighbours in the true
    ranking.  Items with no partner (``n == 1``) get ``inf``.
    """

    delta_pair: np.ndarray
    delta_i: np.ndarray
    delta_tilde_i: np.ndarray
    sst_holds: bool
    sti_holds: bool


def gap_profile(instance: Instance) -> GapProfile:
    n = instance.n
    p = instance.pairwise_matrix()
    gaps = np.abs(p - 0.5)
    # |p - 1/2| and |(1 - p) - 1/2| can differ by an ulp; keep one side
    upper = np.triu(gaps, 1)
    gaps = upper + upper.T
    np.fill_diagonal(gaps, np.nan)

    delta_i = np.full(n, np.inf)
    delta_tilde = np.full(n, np.inf)
    if n > 1:
        delta_i = np.nanmin(gaps, axis=1)
        r = np.asarray(instance.true_ranking) - 1
        adjacent = gaps[r[:-1], r[1:]]
        # extremes of the ranking have a single neighbour
        delta_tilde[r[:-1]] = adjacent
        delta_tilde[r[1:]] = np.minimum(delta_tilde[r[1:]], adjacent)

    sst, sti = _transitivity(p, instance.true_ranking)
    for a in (gaps, delta_i, delta_tilde):
        a.setflags(write=False)
    return GapProfile(gaps, delta_i, delta_tilde, sst, sti)


def _transitivity(p: np.ndarray, ranking) -> tuple[bool, bool]:
    """Exhaustive check over all ordered triples ``a > b > c`` of the true ranking."""
    r = np.asarray(ranking) - 1
    q = p[np.ix_(r, r)]  # q[a, b] = p(r_a beats r_b)
    g = np.abs(q - 0.5)
    n = len(r)
    sst = sti = True
    for b in range(1, n - 1):
        ab = q[:b, b][:, None]       # p(r_a beats r_b), a < b
        bc = q[b, b + 1:][None, :]   # p(r_b beats r_c), c > b
        ac = q[:b, b + 1:]
        sst = sst and bool(np.all(ac >= np.maximum(ab, bc)))
        sti = sti and bool(np.all(g[:b, b + 1:] <= g[:b, b][:, None] + g[b, b + 1:][None, :]))
        if not (sst or sti):
            break
    return sst, sti


def _gaps_of(profile) -> np.ndarray:
    gaps = profile.delta_tilde_i if isinstance(profile, GapProfile) else profile
    gaps = np.asarray(gaps, dtype=np.float64).ravel()
    gaps = gaps[np.isfinite(gaps)]
    if np.any(gaps <= 0):
        raise InvalidParam("gaps must be positive")
    return gaps


def _check_confidence(delta: float) -> None:
    if not 0.0 < delta < 1.0:
        raise InvalidParam(f"delta must lie in (0, 1), got {delta!r}")


def loglog_term(gap: float) -> float:
    """``log log (1/gap)`` clamped at zero (it is negative for gaps above 1/e)."""
    inner = math.log(1.0 / gap)
    if inner <= 1.0:
        return 0.0
    return math.log(inner)


def lower_bound_eq2(profile, n: int, delta: float) -> float:
    """``sum_i g_i^-2 (loglog g_i^-1 + log(n/delta))`` over the adjacent gaps ``g``."""
    _check_confidence(delta)
    gaps = _gaps_of(profile)
    tail = math.log(n / delta) if gaps.size else 0.0
    return float(sum(g ** -2 * (loglog_term(g) + tail) for g in gaps))


def inner_minimizer(profile) -> np.ndarray:
    """Argmin of ``sum_i w_i log(1/x_i)`` over ``sum_i x_i <= 1`` with ``w_i = g_i^-2``.

    Stationarity gives ``x_i = w_i / sum_j w_j``.
    """
    w = _gaps_of(profile) ** -2
    return w / w.sum()


def inner_minimum(profile) -> float:
    w = _gaps_of(profile) ** -2
    if w.size == 0:
        return 0.0
    return float(np.sum(w * np.log(w.sum() / w)))


def lower_bound_eq1(profile, n: int, delta: float) -> float:
    """General lower bound: per-item term with ``log(1/delta)`` plus the inner minimum.

    ``n`` is accepted for signature symmetry with :func:`lower_bound_eq2`; the
    item count enters only through the profile.
    """
    _check_confidence(delta)
    gaps = _gaps_of(profile)
    tail = math.log(1.0 / delta)
    head = sum(g ** -2 * (loglog_term(g) + tail) for g in gaps)
    return float(head + inner_minimum(gaps))
