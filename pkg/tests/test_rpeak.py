import numpy as np
import pytest

from ecgsq.rpeak import (RPeakConfig, Segment, bandpass_butterworth3,
                         detect_rpeaks, segment_by_rpeaks)
from ecgsq.synth import make_synthetic_record


def test_bandpass_rejects_out_of_band_tones():
    fs = 360.0
    t = np.arange(int(4 * fs)) / fs
    settle = int(fs)  # skip the filter transient
    in_band = np.sin(2 * np.pi * 14.0 * t)
    out_low = np.sin(2 * np.pi * 0.5 * t)
    out_high = np.sin(2 * np.pi * 60.0 * t)
    gain = lambda x: np.std(bandpass_butterworth3(x, fs)[settle:])
    assert gain(in_band) > 0.5
    assert gain(out_low) < 0.05
    assert gain(out_high) < 0.1


def test_bandpass_validates_band():
    with pytest.raises(ValueError):
        bandpass_butterworth3(np.ones(10), 360.0, f_lo=20.0, f_hi=8.0)
    with pytest.raises(ValueError):
        bandpass_butterworth3(np.array([]), 360.0)


def test_detects_every_synthetic_beat():
    rec, true_peaks = make_synthetic_record("100", duration_s=30.0)
    filtered = bandpass_butterworth3(rec.samples, rec.fs)
    found = detect_rpeaks(filtered, rec.fs)
    # each true R peak should have a detection within 80 ms; filter
    # delay shifts the detections by a few samples
    tol = int(0.08 * rec.fs)
    hits = sum(np.min(np.abs(found - p)) <= tol for p in true_peaks)
    assert hits >= 0.95 * len(true_peaks)
    # and the count should be close: no gross double/missed detection
    assert abs(len(found) - len(true_peaks)) <= 2


def test_detect_empty_and_flat():
    assert len(detect_rpeaks(np.array([]), 360.0)) == 0
    assert len(detect_rpeaks(np.zeros(1000), 360.0)) == 0


def test_detections_strictly_ascending(record_100):
    filtered = bandpass_butterworth3(record_100.samples, record_100.fs)
    peaks = detect_rpeaks(filtered, record_100.fs)
    assert np.all(np.diff(peaks) > 0)


def test_config_validation():
    with pytest.raises(ValueError):
        RPeakConfig(w1_ms=700.0, w2_ms=97.0).validate(360.0)
    with pytest.raises(ValueError):
        RPeakConfig(beta=-1.0).validate(360.0)


def test_segments_partition_the_signal():
    x = np.arange(100)
    segs = segment_by_rpeaks(x, [10, 40, 70])
    np.testing.assert_array_equal(np.concatenate([s.values for s in segs]), x)
    assert [s.start_index for s in segs] == [0, 10, 40, 70]
    assert all(isinstance(s, Segment) for s in segs)


def test_segments_split_long_gaps():
    x = np.arange(100)
    segs = segment_by_rpeaks(x, [10], max_len=30)
    assert max(len(s) for s in segs) <= 30
    np.testing.assert_array_equal(np.concatenate([s.values for s in segs]), x)


def test_segments_reject_bad_rpeaks():
    with pytest.raises(ValueError):
        segment_by_rpeaks(np.arange(10), [5, 5])
    with pytest.raises(ValueError):
        segment_by_rpeaks(np.arange(10), [-1])
