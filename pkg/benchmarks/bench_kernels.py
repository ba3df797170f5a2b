"""Time the compiled kernels against their pure-Python twins.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--n 10 20 40]

Each case runs the same seeded workload on both backends and checks that the
results agree before reporting timings.
"""
import argparse
import statistics
import time
from contextlib import contextmanager

import numpy as np

from activerank import kernels
from activerank.instance import ComparisonOracle, Instance, generate_instance
from activerank.ranking import AtcParams, atc, iir


def rng(*key):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(list(key))))


@contextmanager
def backend(mod):
    saved = kernels.atc_pair, kernels.ati_walk_row
    kernels.atc_pair, kernels.ati_walk_row = mod.atc_pair, mod.ati_walk_row
    try:
        yield
    finally:
        kernels.atc_pair, kernels.ati_walk_row = saved


def atc_case(runs):
    inst = Instance.from_scores([1.5, 1.0])
    params = AtcParams(0.05, 0.01)

    def work():
        oracle = ComparisonOracle(inst, rng(1))
        wins = sum(atc(oracle, 1, 2, params) == 1 for _ in range(runs))
        return wins, oracle.stats.total
    return work


def iir_case(n):
    inst = generate_instance("homo", n, 0.1, rng(2, n))

    def work():
        out = iir(ComparisonOracle(inst, rng(3, n)), n, 0.01)
        return out.ranking, out.comparisons_used
    return work


def timed(work, repeat):
    times, result = [], None
    for _ in range(repeat):
        start = time.perf_counter()
        result = work()
        times.append(time.perf_counter() - start)
    return statistics.median(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--n", type=int, nargs="+", default=[10, 20, 40])
    ap.add_argument("--atc-runs", type=int, default=2000)
    args = ap.parse_args()

    if kernels.core is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")

    cases = [(f"atc x{args.atc_runs}", atc_case(args.atc_runs))]
    cases += [(f"iir homo n={n}", iir_case(n)) for n in args.n]

    print(f"{'case':<18}{'compiled':>12}{'python':>12}{'speed-up':>10}  comparisons")
    for name, work in cases:
        with backend(kernels.core):
            t_core, r_core = timed(work, args.repeat)
        with backend(kernels.fallback):
            t_py, r_py = timed(work, args.repeat)
        if r_core != r_py:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<18}{t_core * 1e3:>10.1f}ms{t_py * 1e3:>10.1f}ms{t_py / t_core:>9.1f}x  {r_core[1]}")


if __name__ == "__main__":
    main()
