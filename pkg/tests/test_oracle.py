import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sublis.oracle import (ERASED, OK, OUT_OF_RANGE, ST_ERASED, ST_OUT, ErasedArray, QueryOracle,
                           make_rng, read_instance, spawn, write_instance)


def test_rng_is_reproducible():
    a = make_rng(7).integers(0, 1 << 30, size=5)
    b = make_rng(7).integers(0, 1 << 30, size=5)
    assert np.array_equal(a, b)
    assert [g.integers(1 << 30) for g in spawn(make_rng(3), 3)] == \
        [g.integers(1 << 30) for g in spawn(make_rng(3), 3)]


def test_query_semantics_and_counting():
    arr = ErasedArray([5.0, 1.0, 3.0], erased=[False, True, False])
    o = QueryOracle(arr)
    assert o.query(1) == 5.0
    assert o.query(2) is ERASED
    assert o.count == 2
    with pytest.raises(IndexError):
        o.query(4)
    with pytest.raises(IndexError):
        o.query(0)
    assert o.count == 2


def test_restricted_view_shares_counter_and_filters_values():
    arr = ErasedArray([1.0, 2.0, 3.0, 4.0, 5.0])
    o = QueryOracle(arr)
    v = o.restrict(2, 4, interval=(2.0, 3.0))
    assert v.query(2) is OUT_OF_RANGE  # 2 is not in (2, 3]
    assert v.query(3) == 3.0
    assert v.query(4) is OUT_OF_RANGE
    assert o.count == 3
    with pytest.raises(IndexError):
        v.query(5)
    with pytest.raises(IndexError):
        v.restrict(1, 3)


def test_query_many_matches_query():
    arr = ErasedArray([4.0, 2.0, 2.0, 9.0, 1.0], erased=[0, 0, 1, 0, 0])
    o = QueryOracle(arr).restrict(interval=(1.0, 4.0))
    idx = np.array([1, 2, 3, 4, 5, 1])
    vals, status = o.query_many(idx)
    assert status.tolist() == [OK, OK, ST_ERASED, ST_OUT, ST_OUT, OK]
    single = [o.query(int(i)) for i in idx]
    for s, v, q in zip(status, vals, single):
        if s == OK:
            assert q == v
    assert o.count == 12


def test_ranks_are_order_isomorphic():
    arr = ErasedArray([0.5, -2.0, 0.5, 7.0])
    assert arr.ranks().tolist() == [1, 0, 1, 2]
    vals, _ = QueryOracle(arr).query_many([1, 2, 3, 4], ranks=True)
    assert vals.tolist() == [1, 0, 1, 2]


def test_trace_records_every_index_in_order():
    o = QueryOracle(ErasedArray(np.arange(10.0)), record=True)
    o.query(3)
    o.query_many([5, 1, 5])
    assert o.trace.tolist() == [3, 5, 1, 5]


def test_with_erasures_fraction(rng):
    arr = ErasedArray(np.arange(1000.0)).with_erasures(0.3, rng)
    assert arr.erased_fraction == pytest.approx(0.3)
    assert arr.nonerased_values().size == 700


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        ErasedArray([])
    with pytest.raises(ValueError):
        ErasedArray([1.0, 2.0], erased=[True])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.one_of(st.none(), st.floats(-1e6, 1e6, allow_nan=False)), min_size=1, max_size=30),
       st.one_of(st.none(), st.integers(1, 50)))
def test_instance_roundtrip(tmp_path_factory, entries, r):
    vals = [0.0 if e is None else e for e in entries]
    arr = ErasedArray(vals, [e is None for e in entries], r)
    path = tmp_path_factory.mktemp("inst") / "a.txt"
    write_instance(path, arr)
    back = read_instance(path)
    assert back == arr
    assert back.r == r


def test_read_instance_errors(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("n 3\n1\n2\n")
    with pytest.raises(ValueError, match="n=3"):
        read_instance(p)
    p.write_text("n 2\n1\nfoo\n")
    with pytest.raises(ValueError, match="bad value"):
        read_instance(p)
    p.write_text("1\n2\n")
    with pytest.raises(ValueError):
        read_instance(p)


def test_infinite_interval_default():
    o = QueryOracle(ErasedArray([1.0]))
    assert o.interval == (-math.inf, math.inf)


def test_restrict_singleton_and_nesting():
    o = QueryOracle(ErasedArray([3.0, 1.0, 2.0, 4.0]))
    assert o.restrict(2, 2).query(2) == 1.0
    inner = o.restrict(1, 4).restrict(2, 3)
    assert (inner.lo, inner.hi) == (2, 3)
    with pytest.raises(IndexError):
        inner.query(1)
    full = o.restrict(1, 4, interval=(-math.inf, math.inf))
    assert [full.query(i) for i in range(1, 5)] == [3.0, 1.0, 2.0, 4.0]
    assert o.count == 5
