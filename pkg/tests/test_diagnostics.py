import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from activerank.diagnostics import (
    gap_profile,
    inner_minimizer,
    inner_minimum,
    loglog_term,
    lower_bound_eq1,
    lower_bound_eq2,
)
from activerank.errors import InvalidParam
from activerank.instance import Instance, generate_instance

from conftest import make_rng

# 10 * 100 * (log log 10 + log 1000), evaluated with mpmath at 40 digits
EQ2_TEN_ITEMS = 7741.78772423009285185718741191063171831
# 2 * 100 * log 2, mpmath
INNER_TWO_ITEMS = 138.6294361119890618834464242916353136151


def brute_sst_sti(p, ranking):
    sst = sti = True
    for a, b, c in itertools.combinations(ranking, 3):
        i, j, k = a - 1, b - 1, c - 1
        if p[i, k] < max(p[i, j], p[j, k]):
            sst = False
        if abs(p[i, k] - 0.5) > abs(p[i, j] - 0.5) + abs(p[j, k] - 0.5):
            sti = False
    return sst, sti


def grid_inner_min(weights, step=1e-3):
    """Minimise sum w_i log(1/x_i) on the simplex by exhaustive grid search."""
    k = len(weights)
    ticks = round(1 / step)
    best = math.inf
    if k == 1:
        return 0.0
    if k == 2:
        for a in range(1, ticks):
            x = (a * step, 1 - a * step)
            best = min(best, sum(w * math.log(1 / xi) for w, xi in zip(weights, x)))
        return best
    for a in range(1, ticks):
        for b in range(1, ticks - a):
            x = (a * step, b * step, 1 - (a + b) * step)
            best = min(best, sum(w * math.log(1 / xi) for w, xi in zip(weights, x)))
    return best


def test_pair_gap():
    prof = gap_profile(Instance.from_matrix([[0.5, 0.6], [0.4, 0.5]]))
    assert prof.delta_pair[0, 1] == pytest.approx(0.1)
    assert prof.delta_pair[1, 0] == pytest.approx(0.1)


def test_homo_profile():
    prof = gap_profile(generate_instance("homo", 8, 0.1, make_rng(1)))
    assert np.allclose(prof.delta_i, 0.1) and np.allclose(prof.delta_tilde_i, 0.1)
    assert prof.sst_holds and prof.sti_holds


def test_non_sst_example():
    # ranking 1 > 2 > 3 with p12 = p23 = 0.9 and p13 = 0.6
    p = np.array([[0.5, 0.9, 0.6], [0.1, 0.5, 0.9], [0.4, 0.1, 0.5]])
    inst = Instance.from_matrix(p, [1, 2, 3])
    prof = gap_profile(inst)
    assert (prof.sst_holds, prof.sti_holds) == brute_sst_sti(p, [1, 2, 3]) == (False, True)
    # item 1's smallest gap is against the non-adjacent item 3
    assert prof.delta_i[0] == pytest.approx(0.1)
    assert prof.delta_tilde_i[0] == pytest.approx(0.4)


def test_extremes_use_single_neighbour():
    p = np.array([[0.5, 0.7, 0.9], [0.3, 0.5, 0.55], [0.1, 0.45, 0.5]])
    prof = gap_profile(Instance.from_matrix(p, [1, 2, 3]))
    assert prof.delta_tilde_i == pytest.approx([0.2, 0.05, 0.05])


@settings(max_examples=60, deadline=None)
@given(family=st.sampled_from(["homo", "mnl", "random"]), n=st.integers(2, 9), seed=st.integers(0, 10**9))
def test_profile_invariants(family, n, seed):
    inst = generate_instance(family, n, 0.1, make_rng(seed))
    prof = gap_profile(inst)
    p = inst.pairwise_matrix()
    assert (prof.sst_holds, prof.sti_holds) == brute_sst_sti(p, inst.true_ranking)
    assert np.all(prof.delta_tilde_i >= prof.delta_i)
    off = ~np.eye(n, dtype=bool)
    assert np.array_equal(prof.delta_pair[off], prof.delta_pair.T[off])
    assert np.all((prof.delta_pair[off] > 0) & (prof.delta_pair[off] <= 0.5))
    if prof.sst_holds:
        assert np.array_equal(prof.delta_i, prof.delta_tilde_i)
    if family == "mnl":
        assert prof.sst_holds


def test_single_item_profile_and_bounds():
    inst = Instance.from_matrix([[0.5]])
    prof = gap_profile(inst)
    assert prof.delta_i.tolist() == [math.inf]
    assert lower_bound_eq2(prof, 1, 0.1) == 0.0
    assert lower_bound_eq1(prof, 1, 0.1) == 0.0
    assert lower_bound_eq2([], 1, 0.1) == 0.0


def test_eq2_value():
    assert lower_bound_eq2([0.1] * 10, 10, 0.01) == pytest.approx(EQ2_TEN_ITEMS, rel=1e-12)


def test_loglog_clamp():
    assert loglog_term(0.5) == 0.0
    assert loglog_term(1 / math.e) == 0.0
    assert loglog_term(0.1) == pytest.approx(math.log(math.log(10)))


def test_inner_min_two_items():
    assert inner_minimum([0.1, 0.1]) == pytest.approx(INNER_TWO_ITEMS, rel=1e-12)
    assert inner_minimizer([0.1, 0.1]) == pytest.approx([0.5, 0.5])


@pytest.mark.parametrize("gaps", [[0.1, 0.1], [0.1, 0.3], [0.05, 0.2], [0.1, 0.1, 0.1], [0.1, 0.2, 0.4], [0.07, 0.3, 0.15]])
def test_inner_min_matches_grid_search(gaps):
    w = [g ** -2 for g in gaps]
    grid = grid_inner_min(w)
    closed = inner_minimum(gaps)
    assert closed <= grid + 1e-9
    assert abs(grid - closed) / closed <= 1e-4


def test_equal_gap_identity():
    n, delta, g = 7, 0.02, 0.15
    eq1 = lower_bound_eq1([g] * n, n, delta)
    eq2 = lower_bound_eq2([g] * n, n, delta)
    assert eq1 == pytest.approx(eq2, rel=1e-12)
    assert inner_minimum([g] * n) == pytest.approx(n * g ** -2 * math.log(n))


@settings(max_examples=80, deadline=None)
@given(gaps=st.lists(st.floats(0.01, 0.5), min_size=1, max_size=6), k=st.integers(0, 5),
       factor=st.floats(0.5, 0.99), delta=st.floats(1e-4, 0.5))
def test_bounds_monotone(gaps, k, factor, delta):
    assume(k < len(gaps))
    n = len(gaps)
    smaller = list(gaps)
    smaller[k] *= factor
    for f in (lower_bound_eq1, lower_bound_eq2):
        assert f(smaller, n, delta) > f(gaps, n, delta)
        assert f(gaps, n, delta / 2) > f(gaps, n, delta)
        assert f(gaps, n, delta) >= 0


def test_bound_validation():
    with pytest.raises(InvalidParam):
        lower_bound_eq2([0.1], 1, 0.0)
    with pytest.raises(InvalidParam):
        lower_bound_eq1([0.1], 1, 1.0)
    with pytest.raises(InvalidParam):
        lower_bound_eq2([0.0], 1, 0.1)


def test_eq1_below_eq2_plus_log_n_term():
    inst = generate_instance("homo", 10, 0.1, make_rng(3))
    prof = gap_profile(inst)
    w = np.sum(prof.delta_tilde_i ** -2.0)
    assert lower_bound_eq1(prof, 10, 0.01) <= lower_bound_eq2(prof, 10, 0.01) + w * math.log(10) + 1e-9
