import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sublis.oracle import ErasedArray, QueryOracle, make_rng
from sublis.tester import er_test, er_test_single, repetitions, run_cap, window_size


def test_parameter_formulas():
    assert window_size(0.1) == 200
    assert window_size(0.3) == 67
    assert repetitions(0.1) == 12000
    assert run_cap(1 << 16, 0.1) == 10 * (3 * 16 + 400)


def test_two_element_violation():
    v = er_test(QueryOracle(ErasedArray([2.0, 1.0])), 0.5, make_rng(0))
    assert v.rejected
    assert v.witness == (1, 2)


def test_erasures_hide_violations():
    arr = ErasedArray([2.0, 1.0], erased=[True, False])
    assert er_test(QueryOracle(arr), 0.5, make_rng(0)).decision == "Accept"


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 300), st.floats(0.0, 0.9), st.sampled_from([0.1, 0.3, 0.7]), st.integers(0, 2**32))
def test_monotone_arrays_always_accepted(n, alpha, eps, seed):
    rng = make_rng(seed)
    vals = np.sort(rng.integers(0, 5, size=n)).astype(float)
    arr = ErasedArray(vals).with_erasures(alpha, rng) if alpha * n >= 1 else ErasedArray(vals)
    v = er_test_single(QueryOracle(arr), eps, rng)
    assert v.decision == "Accept"


def test_witness_is_a_real_violation(rng):
    arr = ErasedArray(rng.permutation(500).astype(float))
    v = er_test(QueryOracle(arr), 0.3, rng)
    assert v.rejected
    i, j = v.witness
    assert i < j and arr.values[i - 1] > arr.values[j - 1]


def test_reversed_rejected_by_one_run():
    o = QueryOracle(ErasedArray(np.arange(4096.0)[::-1]))
    hits = sum(er_test_single(o, 0.5, make_rng(k)).rejected for k in range(50))
    assert hits == 50


@pytest.mark.parametrize("eps", [0.1, 0.3, 0.7])
def test_per_run_budget(eps, rng):
    n = 1 << 12
    o = QueryOracle(ErasedArray(np.arange(float(n))))
    v = er_test(o, eps, rng, stop_early=False)
    cap = run_cap(n, eps)
    assert max(v.run_queries) <= cap
    assert v.runs == repetitions(eps)
    assert o.count == v.queries_used == sum(v.run_queries) <= repetitions(eps) * cap


def test_cap_truncation_accepts():
    o = QueryOracle(ErasedArray(np.arange(1000.0)[::-1]))
    v = er_test_single(o, 0.5, make_rng(1), cap=1)
    assert v.decision == "Accept"
    assert v.capped_runs == 1
    assert o.count == 1


def test_queries_do_not_depend_on_answers():
    n = 3000
    real = ErasedArray(make_rng(5).permutation(n).astype(float))
    blank = ErasedArray(np.zeros(n))
    traces = []
    for arr in (real, blank):
        o = QueryOracle(arr, record=True)
        er_test(o, 0.3, make_rng(99), stop_early=False)
        traces.append(o.trace)
    assert np.array_equal(*traces)


def test_rejects_bad_eps():
    with pytest.raises(ValueError):
        er_test(QueryOracle(ErasedArray([1.0])), 0.0)
