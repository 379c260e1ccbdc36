import numpy as np
import pytest

from ecgsq.beat_norm import (amplitude_denormalize_od, amplitude_normalize_gsvq,
                             amplitude_normalize_od, period_denormalize,
                             period_normalize)


def test_period_normalize_preserves_endpoints():
    x = np.array([3.0, 7.0, 1.0, 9.0])
    y = period_normalize(x, 11)
    assert y[0] == 3.0
    assert y[-1] == 9.0
    assert len(y) == 11


def test_period_normalize_is_linear_interpolation():
    x = np.array([0.0, 10.0])
    np.testing.assert_allclose(period_normalize(x, 5), [0.0, 2.5, 5.0, 7.5, 10.0])


def test_period_roundtrip_exact_on_linear_ramps():
    x = np.linspace(-5.0, 5.0, 17)
    back = period_denormalize(period_normalize(x, 200), 17)
    np.testing.assert_allclose(back, x, atol=1e-12)


def test_period_normalize_validates():
    with pytest.raises(ValueError):
        period_normalize(np.array([]), 10)
    with pytest.raises(ValueError):
        period_normalize(np.array([1.0, 2.0]), 1)
    with pytest.raises(ValueError):
        period_denormalize(np.array([1.0]), 0)


def test_od_amplitude_roundtrip():
    x = np.array([10.0, 30.0, 20.0, -10.0])
    norm, gain, offset = amplitude_normalize_od(x)
    assert offset == pytest.approx(x.mean())
    assert gain == pytest.approx(20.0)  # half peak-to-peak
    np.testing.assert_allclose(amplitude_denormalize_od(norm, gain, offset), x)


def test_od_amplitude_constant_input():
    norm, gain, offset = amplitude_normalize_od(np.full(5, 7.0))
    np.testing.assert_allclose(norm, 0.0)
    assert gain == 1.0
    assert offset == 7.0


def test_od_gain_floor():
    # peak-to-peak below 2 must not blow the shape up
    _, gain, _ = amplitude_normalize_od(np.array([0.0, 0.5]))
    assert gain == 1.0


def test_gsvq_normalize_unit_norm():
    x = np.array([3.0, 4.0])
    shape, gain = amplitude_normalize_gsvq(x)
    assert gain == pytest.approx(5.0)
    assert np.linalg.norm(shape) == pytest.approx(1.0)
    np.testing.assert_allclose(shape * gain, x)


def test_gsvq_normalize_zero_vector():
    shape, gain = amplitude_normalize_gsvq(np.zeros(4))
    assert gain == 1.0
    np.testing.assert_array_equal(shape, np.zeros(4))
