import math
import sys

import numpy as np
import pytest

from activerank import kernels


def make_rng(*key):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(list(key))))


def sigma(p, trials):
    return math.sqrt(p * (1 - p) / trials)


requires_core = pytest.mark.skipif(kernels.core is None, reason="compiled kernels not built")


class ScriptedOracle:
    """Answers pairwise comparisons from a fixed sequence of 'probe wins' flags."""

    def __init__(self, answers, probe):
        self.answers = list(answers)
        self.probe = probe
        self.calls = 0
        from activerank.instance import OracleStats
        self.stats = OracleStats()
        self.rng = make_rng(0)

    def compare(self, items):
        i, j = items
        won = self.answers[self.calls]
        self.calls += 1
        self.stats.record(items)
        return i if won else j


class CoinFlipOracle:
    """Every comparison is a fair coin, violating strictness on purpose."""

    def __init__(self, rng):
        from activerank.instance import OracleStats
        self.rng = rng
        self.stats = OracleStats()

    def compare(self, items):
        self.stats.record(items)
        return items[0] if self.rng.random() < 0.5 else items[1]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)
