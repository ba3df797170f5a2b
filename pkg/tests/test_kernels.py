"""The compiled kernels, their Python twins and the generic oracle loop must agree draw for draw."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from activerank import kernels
from activerank.instance import ComparisonOracle, generate_instance
from activerank.ranking import AtcParams, _bound_table, _table_length, ati, atc, iir

from conftest import make_rng, requires_core


def backends():
    out = [kernels.fallback]
    if kernels.core is not None:
        out.append(kernels.core)
    return out


def test_backend_label():
    assert kernels.BACKEND in ("compiled", "python")
    assert kernels.active is (kernels.core if kernels.core is not None else kernels.fallback)


@requires_core
def test_core_draws_match_generator():
    a, b = make_rng(1), make_rng(1)
    bounds = _bound_table(0.05, 64)
    # the probe never wins; both must stop at the same step having consumed the same draws
    won, calls = kernels.core.atc_pair(0.0, 8, bounds, a)
    won_py, calls_py = kernels.fallback.atc_pair(0.0, 8, bounds, b)
    assert (won, calls) == (won_py, calls_py)
    assert a.random() == b.random()


@settings(max_examples=150, deadline=None)
@given(p=st.floats(0.0, 1.0), eps=st.floats(0.02, 0.5), delta=st.floats(1e-3, 0.5), seed=st.integers(0, 2**32))
def test_atc_pair_backends_agree(p, eps, delta, seed):
    params = AtcParams(eps, delta)
    bounds = _bound_table(delta, _table_length(params.b_max))
    results = []
    for backend in backends():
        rng = make_rng(seed)
        results.append((backend.atc_pair(p, params.b_max, bounds, rng), rng.random()))
    assert all(r == results[0] for r in results)


@settings(max_examples=40, deadline=None)
@given(family=st.sampled_from(["homo", "mnl", "random"]), n=st.integers(2, 8), seed=st.integers(0, 2**32))
def test_atc_kernel_matches_generic(family, n, seed):
    inst = generate_instance(family, n, 0.15, make_rng(seed, 0))
    params = AtcParams(0.1, 0.05)
    fast = ComparisonOracle(inst, make_rng(seed, 1))
    slow = ComparisonOracle(inst, make_rng(seed, 1))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                assert atc(fast, i, j, params) == atc(slow, i, j, params, use_kernel=False)
    assert fast.stats.per_pair_calls == slow.stats.per_pair_calls
    assert fast.rng.random() == slow.rng.random()


@settings(max_examples=30, deadline=None)
@given(family=st.sampled_from(["homo", "mnl", "random"]), n=st.integers(2, 10),
       eps=st.sampled_from([0.05, 0.1, 0.25, 0.5]), seed=st.integers(0, 2**32))
def test_ati_paths_agree(family, n, eps, seed):
    inst = generate_instance(family, n, 0.1, make_rng(seed, 0))
    rest = [x for x in inst.true_ranking if x != 1]
    runs = []
    for mode in ("kernel", "generic"):
        oracle = ComparisonOracle(inst, make_rng(seed, 1))
        out = ati(oracle, 1, rest, eps, 0.1, use_kernel=(mode == "kernel"))
        runs.append((out, dict(oracle.stats.per_pair_calls), oracle.rng.random()))
    assert runs[0] == runs[1]


@requires_core
@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 12), seed=st.integers(0, 2**32))
def test_ati_walk_row_backends_agree(n, seed):
    from activerank.pit import build_pit
    from activerank.ranking import _early_table, _walk_bounds, ati_budgets, ati_t_max

    inst = generate_instance("random", n, 0.1, make_rng(seed, 0))
    rest = [x for x in inst.true_ranking if x != 1]
    tree = build_pit(rest)
    t_max = ati_t_max(tree.depth, 0.1)
    b_max = ati_budgets(0.1)
    bounds = _walk_bounds(_table_length(int(b_max.max())))
    early = _early_table(0.1, t_max)
    outs = []
    for backend in backends():
        rng = make_rng(seed, 1)
        calls = np.zeros(n + 1, dtype=np.int64)
        leaf = backend.ati_walk_row(inst.win_row(1), tree.left, tree.right, tree.mid, tree.parent,
                                    tree.lchild, tree.rchild, b_max, bounds, early, 1 + 5 / 16 * t_max,
                                    t_max, rng, calls)
        outs.append((leaf, calls.tolist(), rng.random()))
    assert outs[0] == outs[1]


@pytest.mark.parametrize("family", ["homo", "mnl", "random"])
def test_iir_paths_agree(family):
    inst = generate_instance(family, 8, 0.15, make_rng(5, 0))
    a = iir(ComparisonOracle(inst, make_rng(5, 1)), 8, 0.05)
    b = iir(ComparisonOracle(inst, make_rng(5, 1)), 8, 0.05, use_kernel=False)
    assert a == b
    assert a.ranking == inst.true_ranking


def test_env_var_forces_fallback():
    import os
    import subprocess
    import sys

    env = dict(os.environ, ACTIVERANK_PURE_PYTHON="1")
    code = "from activerank import kernels; print(kernels.BACKEND, kernels.atc_pair.__module__)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "activerank._fallback"]
