import math

import numpy as np
import pytest

from ecgsq.distance import (dist_v1, dist_v2, fit_affine, mean_offset,
                            prefix_profile, scan_v1, scan_v2, score_candidates)


def test_v1_zero_for_pure_offset():
    x = np.array([1, 5, 3, 7], dtype=np.int64)
    assert dist_v1(x, x + 100) == 0.0
    assert dist_v1(x, x) == 0.0


def test_v1_hand_value():
    # |diff| = [1, 3]: max 3, mean 2
    assert dist_v1(np.array([0, 0]), np.array([1, 3])) == pytest.approx(1.0)


def test_v1_symmetry():
    rng = np.random.default_rng(0)
    x = rng.integers(-100, 100, 32)
    y = rng.integers(-100, 100, 32)
    assert dist_v1(x, y) == pytest.approx(dist_v1(y, x))


def test_v2_infinite_when_fragments_cross():
    x = np.array([0, 0, 0, 0], dtype=np.int64)
    y = np.array([1, 1, -1, 1], dtype=np.int64)  # difference changes sign
    assert math.isinf(dist_v2(x, y))
    assert math.isfinite(dist_v1(x, y))


def test_v2_two_sided_spread():
    # |diff| = [1, 5, 9]: mean 5; both spread terms equal 4
    x = np.array([0, 0, 0], dtype=np.int64)
    y = np.array([1, 5, 9], dtype=np.int64)
    assert dist_v2(x, y) == pytest.approx(4.0)


def test_v2_equals_offset_for_parallel_fragments():
    x = np.array([2, 4, 6], dtype=np.int64)
    assert dist_v2(x, x + 7) == 0.0


def test_fit_affine_recovers_exact_mapping():
    b = np.array([1.0, 2.0, 3.0, 4.0])
    fit = fit_affine(b, 2.5 * b - 3.0)
    assert fit.gain == pytest.approx(2.5)
    assert fit.offset == pytest.approx(-3.0)


def test_fit_affine_constant_input_falls_back_to_offset():
    b = np.full(8, 5.0)
    fit = fit_affine(b, b + 2.0)
    assert fit.gain == 1.0
    assert fit.offset == pytest.approx(2.0)


def test_mean_offset():
    b = np.array([1.0, 2.0, 3.0])
    assert mean_offset(b, b + 4.0) == pytest.approx(4.0)


@pytest.mark.parametrize("scan,dist", [(scan_v1, dist_v1), (scan_v2, dist_v2)])
def test_scans_match_scalar_distances(scan, dist):
    rng = np.random.default_rng(3)
    bank = rng.integers(-500, 500, 64)
    frag = rng.integers(-500, 500, 12)
    d = scan(bank, frag)
    assert len(d) == 64 - 12 + 1
    for i in range(len(d)):
        assert d[i] == pytest.approx(dist(frag, bank[i : i + 12]))


@pytest.mark.parametrize("use_v2", [False, True])
def test_score_candidates_matches_scan(use_v2):
    rng = np.random.default_rng(4)
    bank = rng.integers(-500, 500, 128)
    frag = rng.integers(-500, 500, 20)
    starts = np.array([0, 5, 50, 100])
    full = (scan_v2 if use_v2 else scan_v1)(bank, frag)
    got = score_candidates(bank, frag, starts, use_v2)
    np.testing.assert_allclose(got, full[starts])


@pytest.mark.parametrize("use_v2", [False, True])
def test_prefix_profile_matches_scalar_distances(use_v2):
    rng = np.random.default_rng(5)
    a = rng.integers(-300, 300, 40)
    b = rng.integers(-300, 300, 40)
    prof = prefix_profile(a, b, use_v2)
    dist = dist_v2 if use_v2 else dist_v1
    for l in range(1, 41):
        expect = dist(b[:l], a[:l])
        if math.isinf(expect):
            assert math.isinf(prof[l - 1])
        else:
            assert prof[l - 1] == pytest.approx(expect)


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        dist_v1(np.arange(3), np.arange(4))
    with pytest.raises(ValueError):
        dist_v2(np.array([]), np.array([]))
