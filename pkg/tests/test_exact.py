from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sublis.exact import (Poset, count_deserted, distance_to_monotonicity, erased_distance,
                          is_completable_monotone, lis_dp, lis_exact, lis_indices, max_antichain,
                          max_antichain_bruteforce, min_chain_cover)
from sublis.oracle import ErasedArray

from conftest import lis_bruteforce


def test_lis_known_values():
    assert lis_exact([2, 2, 1, 3]) == 3
    assert lis_dp([2, 2, 1, 3]) == 3
    assert lis_exact([5, 4, 3]) == 1
    assert lis_exact([1.0]) == 1
    assert lis_exact([]) == 0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=0, max_size=12))
def test_lis_matches_bruteforce(xs):
    assert lis_exact(xs) == lis_dp(xs) == lis_bruteforce(xs)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=40))
def test_lis_indices_is_a_witness(xs):
    idx = lis_indices(xs)
    assert len(idx) == lis_exact(xs)
    assert all(a < b for a, b in zip(idx, idx[1:]))
    picked = [xs[i] for i in idx]
    assert all(a <= b for a, b in zip(picked, picked[1:]))


def _erased_distance_bruteforce(values, erased):
    """Minimum over completions on a fine value grid of n - LIS."""
    known = sorted({v for v, e in zip(values, erased) if not e}) or [0.0]
    ext = [known[0] - 1] + known + [known[-1] + 1]
    grid = sorted(set(ext) | {(a + b) / 2 for a, b in zip(ext, ext[1:])})
    slots = [i for i, e in enumerate(erased) if e]
    best = len(values)
    for fill in product(grid, repeat=len(slots)):
        c = list(values)
        for i, f in zip(slots, fill):
            c[i] = f
        best = min(best, len(c) - lis_bruteforce(c))
    return best


def test_erased_distance_known_value():
    arr = ErasedArray([3.0, 0.0, 2.0, 1.0], erased=[False, True, False, False])
    assert erased_distance(arr) == 2
    assert not is_completable_monotone(arr)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.booleans()), min_size=1, max_size=6))
def test_erased_distance_matches_completion_search(entries):
    vals = [float(v) for v, _ in entries]
    er = [e for _, e in entries]
    arr = ErasedArray(vals, er)
    d = erased_distance(arr)
    assert d == _erased_distance_bruteforce(vals, er)
    assert is_completable_monotone(arr) == (d == 0)


def test_distance_to_monotonicity():
    assert distance_to_monotonicity(np.arange(10)) == 0
    assert distance_to_monotonicity(np.arange(10)[::-1]) == 9


def _deserted_bruteforce(S, gamma, n):
    S = set(S)
    bad = set()
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            inside = [i for i in S if a <= i <= b]
            if len(inside) < gamma * (b - a + 1):
                bad.update(inside)
    return len(bad)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 25).flatmap(lambda n: st.tuples(
    st.just(n), st.sets(st.integers(1, n)), st.sampled_from([0.1, 0.25, 0.5, 0.9]))))
def test_count_deserted_matches_definition(args):
    n, S, gamma = args
    assert count_deserted(S, gamma, n) == _deserted_bruteforce(S, gamma, n)


def test_count_deserted_rejects_bad_gamma():
    with pytest.raises(ValueError):
        count_deserted({1}, 1.0, 3)


def _grid_poset(k):
    els = [(i, j) for i in range(k) for j in range(k)]
    pairs = [(a, b) for a in els for b in els if a != b and a[0] <= b[0] and a[1] <= b[1]]
    return Poset(els, pairs)


def test_grid_poset_width():
    p = _grid_poset(3)
    anti = max_antichain(p)
    assert len(anti) == 3
    assert p.is_antichain(anti)
    cover = min_chain_cover(p)
    assert len(cover) == 3
    assert all(p.is_chain(c) for c in cover)
    assert sorted(e for c in cover for e in c) == sorted(p.elements)


def _random_poset(rng, m, density):
    # random DAG on a random linear extension
    order = rng.permutation(m)
    pairs = [(int(order[a]), int(order[b])) for a in range(m) for b in range(a + 1, m)
             if rng.random() < density]
    return Poset(range(m), pairs)


@pytest.mark.parametrize("seed", range(30))
def test_dilworth_on_random_posets(seed):
    rng = np.random.default_rng(seed)
    p = _random_poset(rng, int(rng.integers(1, 11)), rng.random() * 0.5)
    anti = max_antichain(p)
    cover = min_chain_cover(p)
    assert p.is_antichain(anti)
    assert all(p.is_chain(c) for c in cover)
    assert len(anti) == len(cover) == max_antichain_bruteforce(p)


def test_poset_without():
    p = _grid_poset(2).without([(0, 0)])
    assert len(p) == 3
    assert len(max_antichain(p)) == 2
