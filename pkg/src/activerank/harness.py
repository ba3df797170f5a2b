"""Seeded Monte-Carlo benchmark runner.

For every sweep point one instance is drawn from ``(master_seed, family, n)``
and shared by all trials at that point; trials differ only in the oracle's
randomness.  Every random stream is a Philox generator keyed by a
:class:`numpy.random.SeedSequence` over the tuple

    instance stream:  (master_seed, 0, family_code, n)
    trial stream:     (master_seed, 1, family_code, n, trial_index)

so results do not depend on execution order or worker count.
"""
from __future__ import annotations

import csv
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .diagnostics import gap_profile, lower_bound_eq2
from .errors import ActiveRankError, InvalidParam
from .instance import ComparisonOracle, Family, Instance, generate_instance
from .listwise import MergeCounter, listwise_merge_sort
from .ranking import RankingOutcome, iir

PHASE_INSTANCE = 0
PHASE_TRIAL = 1
FAMILY_CODES = {Family.HOMO: 0, Family.MNL: 1, Family.RANDOM: 2}

CSV_HEADER = ["family", "n", "delta_gap", "confidence", "algorithm", "trials", "master_seed",
              "error_rate", "mean_comparisons", "median_comparisons", "p95_comparisons",
              "bound_eq2", "ratio"]


def stream(master_seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([master_seed, *key])))


@dataclass(frozen=True)
class TrialSpec:
    family: str
    n: int
    delta_gap: Optional[float]
    confidence: float
    algorithm: str = "iir"
    m: int = 2
    trials: int = 100
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family).value)
        if self.trials < 1:
            raise InvalidParam("trials must be at least 1")
        if self.algorithm not in ("iir", "lwms"):
            raise InvalidParam(f"unknown algorithm {self.algorithm!r}")
        if self.algorithm == "lwms" and self.m < 2:
            raise InvalidParam("lwms needs m >= 2")
        if not 0.0 < self.confidence < 1.0:
            raise InvalidParam(f"confidence must lie in (0, 1), got {self.confidence!r}")
        if self.master_seed < 0:
            raise InvalidParam("master_seed must be non-negative")

    @property
    def family_code(self) -> int:
        return FAMILY_CODES[Family(self.family)]

    @property
    def algorithm_label(self) -> str:
        return "iir" if self.algorithm == "iir" else f"lwms:{self.m}"


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    success: bool
    comparisons: int
    wall_time: float = field(compare=False)
    error: str = ""


@dataclass(frozen=True)
class BenchmarkReport:
    spec: TrialSpec
    records: tuple
    error_rate: float
    mean_comparisons: float
    median_comparisons: float
    p95_comparisons: float
    bound_eq2: float
    ratio: float

    @classmethod
    def from_records(cls, spec: TrialSpec, records: Sequence[TrialRecord], bound: float) -> "BenchmarkReport":
        counts = np.array([r.comparisons for r in records], dtype=np.float64)
        failures = sum(not r.success for r in records)
        mean = float(counts.mean())
        return cls(spec, tuple(records), failures / len(records), mean,
                   float(np.median(counts)), float(np.percentile(counts, 95)),
                   bound, mean / bound if bound > 0 else float("nan"))

    def to_row(self) -> list[str]:
        s = self.spec
        return [s.family, str(s.n), "" if s.delta_gap is None else _g(s.delta_gap), _g(s.confidence),
                s.algorithm_label, str(s.trials), str(s.master_seed), _g(self.error_rate),
                _g(self.mean_comparisons), _g(self.median_comparisons), _g(self.p95_comparisons),
                _g(self.bound_eq2), _g(self.ratio)]


def _g(x: float) -> str:
    return format(x, ".6g")


def verify_ranking(outcome: RankingOutcome, instance: Instance) -> bool:
    return not outcome.failed and tuple(outcome.ranking) == tuple(instance.true_ranking)


def make_instance(spec: TrialSpec) -> Instance:
    rng = stream(spec.master_seed, PHASE_INSTANCE, spec.family_code, spec.n)
    return generate_instance(spec.family, spec.n, spec.delta_gap, rng,
                             seed_provenance=f"master_seed={spec.master_seed} family={spec.family} n={spec.n}")


def run_trial(spec: TrialSpec, instance: Instance, trial: int) -> TrialRecord:
    rng = stream(spec.master_seed, PHASE_TRIAL, spec.family_code, spec.n, trial)
    oracle = ComparisonOracle(instance, rng)
    start = time.perf_counter()
    try:
        if spec.algorithm == "iir":
            outcome = iir(oracle, instance.n, spec.confidence)
            ok = verify_ranking(outcome, instance)
            used = outcome.comparisons_used
        else:
            counter = MergeCounter()
            ranking = listwise_merge_sort(oracle, range(1, instance.n + 1), spec.m, counter)
            ok = tuple(ranking) == instance.true_ranking
            used = counter.listwise_comparisons
    except ActiveRankError as exc:
        return TrialRecord(trial, False, oracle.stats.total, time.perf_counter() - start,
                           f"{type(exc).__name__}: {exc}")
    return TrialRecord(trial, ok, used, time.perf_counter() - start)


def run_benchmark(spec: TrialSpec, workers: int = 1) -> BenchmarkReport:
    instance = make_instance(spec)
    bound = lower_bound_eq2(gap_profile(instance), instance.n, spec.confidence)
    indices = range(spec.trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda k: run_trial(spec, instance, k), indices))
    else:
        records = [run_trial(spec, instance, k) for k in indices]
    return BenchmarkReport.from_records(spec, records, bound)


def run_sweep(spec: TrialSpec, ns: Iterable[int], workers: int = 1) -> list[BenchmarkReport]:
    ns = list(ns)
    if not ns:
        raise InvalidParam("sweep must contain at least one n")
    return [run_benchmark(TrialSpec(spec.family, n, spec.delta_gap, spec.confidence, spec.algorithm,
                                    spec.m, spec.trials, spec.master_seed), workers)
            for n in ns]


def write_csv(reports: Iterable[BenchmarkReport], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rep in reports:
        writer.writerow(rep.to_row())
