"""Ranking instances, comparison oracles and the experiment instance families.

Items are the integers ``1..n``.  An instance is either matrix-based (an
``n x n`` table of pairwise winning probabilities) or score-based under the
multinomial-logit model, where item ``i`` wins a comparison over ``S`` with
probability ``theta_i / sum(theta_j for j in S)``.
"""
from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidInstance, InvalidParam, InvalidSet, ListwiseUnsupported

MATRIX = "matrix"
MNL = "mnl"

# Probabilities closer than this to 1/2 are treated as ties and rejected.
TIE_BAND = 1e-9
COMPLEMENT_TOL = 1e-12


class Family(str, enum.Enum):
    HOMO = "homo"
    MNL = "mnl"
    RANDOM = "random"


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Instance:
    """Ground truth for one ranking problem.

    Use :meth:`from_matrix` or :meth:`from_scores` rather than the raw
    constructor; both validate eagerly.
    """

    n: int
    kind: str
    true_ranking: tuple
    pairwise_probs: Optional[np.ndarray] = None
    scores: Optional[np.ndarray] = None
    seed_provenance: str = ""

    @classmethod
    def from_matrix(cls, probs, true_ranking=None, seed_provenance=""):
        p = np.array(probs, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] != p.shape[1] or p.shape[0] < 1:
            raise InvalidInstance(f"pairwise_probs must be a square matrix, got shape {p.shape}")
        n = p.shape[0]
        off = ~np.eye(n, dtype=bool)
        vals = p[off]
        if not np.all(np.isfinite(vals)) or np.any(vals < 0.0) or np.any(vals > 1.0):
            raise InvalidInstance("pairwise probabilities must lie in [0, 1]")
        if np.any(np.abs(p + p.T - 1.0)[off] > COMPLEMENT_TOL):
            raise InvalidInstance("p[i,j] + p[j,i] must equal 1")
        if np.any(np.abs(vals - 0.5) <= TIE_BAND):
            raise InvalidInstance("p[i,j] = 1/2 is a tie; items must be strictly ordered")
        np.fill_diagonal(p, 0.5)
        if true_ranking is None:
            wins = (p > 0.5).sum(axis=1)
            true_ranking = [int(k) + 1 for k in np.argsort(-wins, kind="stable")]
        ranking = _check_permutation(true_ranking, n)
        pos = np.empty(n, dtype=np.int64)
        pos[np.asarray(ranking) - 1] = np.arange(n)
        ahead = pos[:, None] < pos[None, :]
        if np.any((p > 0.5) != ahead & off):
            raise InvalidInstance("pairwise probabilities disagree with the true ranking")
        return cls(n, MATRIX, ranking, _readonly(p), None, seed_provenance)

    @classmethod
    def from_scores(cls, scores, true_ranking=None, seed_provenance=""):
        theta = np.array(scores, dtype=np.float64)
        if theta.ndim != 1 or theta.size < 1:
            raise InvalidInstance("scores must be a nonempty vector")
        if not np.all(np.isfinite(theta)) or np.any(theta <= 0):
            raise InvalidInstance("scores must be finite and positive")
        if np.unique(theta).size != theta.size:
            raise InvalidInstance("scores must be distinct")
        n = theta.size
        derived = tuple(int(k) + 1 for k in np.argsort(-theta, kind="stable"))
        if true_ranking is not None and _check_permutation(true_ranking, n) != derived:
            raise InvalidInstance("true_ranking must list items by descending score")
        return cls(n, MNL, derived, None, _readonly(theta), seed_provenance)

    @property
    def supports_listwise(self) -> bool:
        return self.kind == MNL

    def prob(self, i: int, j: int) -> float:
        """Probability that ``i`` beats ``j`` in a pairwise comparison."""
        if self.kind == MATRIX:
            return float(self.pairwise_probs[i - 1, j - 1])
        ti = self.scores[i - 1]
        return float(ti / (ti + self.scores[j - 1]))

    def win_row(self, i: int) -> np.ndarray:
        """``row[j] = p(i beats j)`` indexed by item; ``row[0]`` and ``row[i]`` are unused."""
        row = np.empty(self.n + 1, dtype=np.float64)
        row[0] = 0.5
        if self.kind == MATRIX:
            row[1:] = self.pairwise_probs[i - 1]
        else:
            ti = self.scores[i - 1]
            row[1:] = ti / (ti + self.scores)
        return row

    def pairwise_matrix(self) -> np.ndarray:
        if self.kind == MATRIX:
            return self.pairwise_probs.copy()
        t = self.scores
        p = t[:, None] / (t[:, None] + t[None, :])
        np.fill_diagonal(p, 0.5)
        return p

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "kind": self.kind,
            "true_ranking": list(self.true_ranking),
            "pairwise_probs": None if self.pairwise_probs is None else self.pairwise_probs.tolist(),
            "scores": None if self.scores is None else self.scores.tolist(),
            "seed_provenance": self.seed_provenance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Instance":
        try:
            n, kind = int(d["n"]), d["kind"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInstance(f"malformed instance document: {exc}") from None
        ranking = d.get("true_ranking")
        prov = d.get("seed_provenance") or ""
        if kind == MATRIX:
            if d.get("pairwise_probs") is None:
                raise InvalidInstance("matrix instance without pairwise_probs")
            inst = cls.from_matrix(d["pairwise_probs"], ranking, prov)
        elif kind == MNL:
            if d.get("scores") is None:
                raise InvalidInstance("mnl instance without scores")
            inst = cls.from_scores(d["scores"], ranking, prov)
        else:
            raise InvalidInstance(f"unknown instance kind {kind!r}")
        if inst.n != n:
            raise InvalidInstance(f"n={n} does not match the data (n={inst.n})")
        return inst


def _check_permutation(ranking, n) -> tuple:
    try:
        r = tuple(int(x) for x in ranking)
    except (TypeError, ValueError):
        raise InvalidInstance("true_ranking must be a list of integers") from None
    if sorted(r) != list(range(1, n + 1)):
        raise InvalidInstance(f"true_ranking is not a permutation of 1..{n}")
    return r


def instance_to_json(instance: Instance) -> str:
    # json writes floats with repr(), the shortest string that round-trips exactly
    return json.dumps(instance.to_dict(), indent=1) + "\n"


def instance_from_json(text: str) -> Instance:
    return Instance.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# Oracles


@dataclass
class OracleStats:
    pairwise_calls: int = 0
    listwise_calls: int = 0
    per_pair_calls: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return self.pairwise_calls + self.listwise_calls

    def record(self, items: Sequence[int]) -> None:
        if len(items) == 2:
            self.pairwise_calls += 1
            a, b = items
            self.per_pair_calls[(a, b) if a < b else (b, a)] += 1
        else:
            self.listwise_calls += 1

    def record_pair(self, i: int, j: int, count: int) -> None:
        if count:
            self.pairwise_calls += count
            self.per_pair_calls[(i, j) if i < j else (j, i)] += count

    def record_pairs(self, i: int, counts) -> None:
        """Bulk-record ``counts[j]`` pairwise comparisons of ``i`` against each item ``j``."""
        for j in np.flatnonzero(counts):
            self.record_pair(i, int(j), int(counts[j]))

    def reset(self) -> None:
        self.pairwise_calls = 0
        self.listwise_calls = 0
        self.per_pair_calls.clear()


def _check_set(items: Sequence[int], n: int) -> None:
    if len(items) < 2:
        raise InvalidSet("a comparison needs at least two items")
    if len(set(items)) != len(items):
        raise InvalidSet(f"duplicate items in comparison set {list(items)}")
    for k in items:
        if not 1 <= k <= n:
            raise InvalidSet(f"item {k} outside 1..{n}")


def compare(instance: Instance, stats: OracleStats, items: Sequence[int], rng: np.random.Generator) -> int:
    """Sample the winner of one comparison over ``items`` and count it.

    A single uniform draw ``u`` is consumed; the winner is the first item whose
    cumulative winning probability exceeds ``u`` in the order given.
    """
    _check_set(items, instance.n)
    if len(items) > 2 and instance.kind == MATRIX:
        raise ListwiseUnsupported(f"matrix instances only answer pairwise comparisons, got {len(items)} items")
    u = rng.random()
    stats.record(items)
    if len(items) == 2:
        i, j = items
        return i if u < instance.prob(i, j) else j
    theta = [instance.scores[k - 1] for k in items]
    total = sum(theta)
    acc = 0.0
    for k, t in zip(items, theta):
        acc += t
        if u < acc / total:
            return k
    return items[-1]


class ComparisonOracle:
    """Noisy comparisons drawn from an instance, with call accounting.

    The oracle deliberately exposes no ranking information.  ``win_row`` is
    the sampling kernel's view of the instance: the compiled fast paths use it
    to draw from the very same stream that :meth:`compare` would.
    """

    def __init__(self, instance: Instance, rng: np.random.Generator, stats: Optional[OracleStats] = None):
        self._instance = instance
        self.rng = rng
        self.stats = stats if stats is not None else OracleStats()

    @property
    def n(self) -> int:
        return self._instance.n

    @property
    def supports_listwise(self) -> bool:
        return self._instance.supports_listwise

    def compare(self, items: Sequence[int]) -> int:
        return compare(self._instance, self.stats, items, self.rng)

    def win_prob(self, i: int, j: int) -> float:
        return self._instance.prob(i, j)

    def win_row(self, i: int) -> np.ndarray:
        return self._instance.win_row(i)


class NoiselessOracle:
    """Always returns the truly most preferred item of the queried set."""

    def __init__(self, instance: Instance, stats: Optional[OracleStats] = None):
        self._n = instance.n
        self._pos = {item: k for k, item in enumerate(instance.true_ranking)}
        self.stats = stats if stats is not None else OracleStats()

    @property
    def n(self) -> int:
        return self._n

    supports_listwise = True

    def compare(self, items: Sequence[int]) -> int:
        _check_set(items, self._n)
        self.stats.record(items)
        return min(items, key=self._pos.__getitem__)


# ---------------------------------------------------------------------------
# Instance families


def generate_instance(family, n: int, delta: Optional[float], rng: np.random.Generator, seed_provenance: str = "") -> Instance:
    """Draw an instance of one of the experiment families.

    ``homo``: every higher-ranked item beats every lower one w.p. ``1/2 + delta``.
    ``mnl``: score of the item at rank ``i`` is uniform on
    ``[0.9 * 1.5**(n-i), 1.1 * 1.5**(n-i)]``; ``delta`` is ignored.
    ``random``: each ordered pair independently uniform on
    ``[1/2 + 0.8 delta, 1/2 + 1.5 delta]``.

    The hidden true ranking is a uniformly random permutation.
    """
    try:
        family = Family(family)
    except ValueError:
        raise InvalidParam(f"unknown family {family!r}") from None
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidParam(f"n must be an integer >= 2, got {n!r}")
    if family is not Family.MNL:
        if delta is None or not 0.0 < delta < 0.5:
            raise InvalidParam(f"delta must lie in (0, 1/2), got {delta!r}")
        if family is Family.RANDOM and 0.5 + 1.5 * delta > 1.0:
            raise InvalidParam(f"random family needs delta <= 1/3, got {delta!r}")

    ranking = [int(x) + 1 for x in rng.permutation(n)]

    if family is Family.MNL:
        theta = np.empty(n)
        for i, item in enumerate(ranking, start=1):
            base = 1.5 ** (n - i)
            theta[item - 1] = rng.uniform(0.9 * base, 1.1 * base)
        return Instance.from_scores(theta, ranking, seed_provenance)

    p = np.full((n, n), 0.5)
    for a in range(n):
        for b in range(a + 1, n):
            if family is Family.HOMO:
                v = 0.5 + delta
            else:
                v = rng.uniform(0.5 + 0.8 * delta, 0.5 + 1.5 * delta)
            hi, lo = ranking[a] - 1, ranking[b] - 1
            p[hi, lo] = v
            p[lo, hi] = 1.0 - v
    return Instance.from_matrix(p, ranking, seed_provenance)
