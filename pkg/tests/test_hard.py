import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sublis.exact import distance_to_monotonicity
from sublis.hard import (BlockRef, ScaleVector, blow_up, detect_bad_event,
                         detect_bad_event_bruteforce, lca_level, sample_D, sample_Dh)


def test_D0_small_case_by_hand():
    v, coins = sample_D(8, 0, (3, 1), coins=[1])
    assert v.tolist() == [6, 5, 8, 7, 2, 1, 4, 3]
    v, _ = sample_D(8, 0, (3, 1), coins=[0])
    assert v.tolist() == [5, 6, 7, 8, 1, 2, 3, 4]


def test_D1_swaps_one_half():
    left, _ = sample_D(8, 1, (3, 1), coins=[1])
    right, _ = sample_D(8, 1, (3, 1), coins=[0])
    assert left.tolist() == [6, 5, 8, 7, 1, 2, 3, 4]
    assert right.tolist() == [5, 6, 7, 8, 2, 1, 4, 3]


@pytest.mark.parametrize("scales", [(4, 2), (6, 1), (10, 3), (8, 7)])
def test_D1_distance_is_half(scales, rng):
    n = 1 << 10
    for _ in range(5):
        v, _ = sample_D(n, 1, scales, rng)
        assert distance_to_monotonicity(v) == n // 2


@pytest.mark.parametrize("variant", [0, 1])
def test_samples_are_permutations(variant, rng):
    v, _ = sample_Dh(1 << 9, variant, (8, 5, 2), rng)
    assert sorted(v.tolist()) == list(range(1, (1 << 9) + 1))


def test_Dh_with_two_scales_matches_D():
    a, _ = sample_Dh(64, 1, (5, 2), 9)
    b, _ = sample_D(64, 1, (5, 2), 9)
    assert np.array_equal(a, b)


def test_Dh_labels_follow_variant(rng):
    _, labels = sample_Dh(1 << 8, 0, (7, 4, 2), rng)
    assert all(kind in ("00", "11") for kind, _, _ in labels)
    _, labels = sample_Dh(1 << 8, 1, (7, 4, 2), rng)
    assert all(kind in ("01", "10") for kind, _, _ in labels)


def test_scale_validation():
    with pytest.raises(ValueError):
        sample_D(64, 0, (2, 3))
    with pytest.raises(ValueError):
        sample_D(64, 0, (7, 2))
    with pytest.raises(ValueError):
        sample_D(60, 0, (4, 2))
    with pytest.raises(ValueError):
        ScaleVector((10, 5), strict=True).validate(1 << 12)
    ScaleVector((40, 10), strict=True).validate(1 << 60)


def test_lca_levels():
    assert lca_level(1, 8, 8) == 3
    assert lca_level(1, 2, 8) == 1
    assert lca_level(3, 4, 8) == 1
    assert lca_level(2, 3, 8) == 2
    with pytest.raises(ValueError):
        lca_level(2, 2, 8)


def test_block_ref():
    b = BlockRef.of(11, 2)
    assert b.ordinal == 3
    assert b.span == (9, 12)


def test_bad_event_known_sets():
    assert detect_bad_event({1, 2, 9, 10}, 4, 1, 16)
    assert not detect_bad_event({1, 3, 9, 11}, 4, 1, 16)


@settings(max_examples=200, deadline=None)
@given(st.sets(st.integers(1, 64), max_size=10), st.sampled_from([(6, 2), (5, 1), (4, 3), (3, 1)]))
def test_bad_event_matches_bruteforce(Q, scales):
    j1, j2 = scales
    assert detect_bad_event(Q, j1, j2, 64) == detect_bad_event_bruteforce(Q, j1, j2, 64)


def test_blow_up_keeps_lis_fraction():
    v = np.array([3, 1, 2])
    b = blow_up(v, 4)
    assert b.tolist()[:4] == [3, 3, 3, 3]
    assert distance_to_monotonicity(b) == 4 * distance_to_monotonicity(v)
