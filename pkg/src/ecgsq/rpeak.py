"""Band-pass preprocessing and the two-moving-average QRS detector.

The detector squares the band-passed signal and compares a short
moving average (QRS-scale window) against a long one (beat-scale
window) plus an offset proportional to the mean signal energy.
Blocks where the short average wins and that are at least one QRS
window wide are taken as QRS candidates; the peak is the sample of
maximum absolute filtered value inside the block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sp_signal

__all__ = [
    "RPeakConfig",
    "Segment",
    "bandpass_butterworth3",
    "detect_rpeaks",
    "segment_by_rpeaks",
]

# Recommended detector parameters: 97 ms / 611 ms windows, beta = 0.08,
# 8-20 Hz third-order Butterworth band.
DEFAULT_W1_MS = 97.0
DEFAULT_W2_MS = 611.0
DEFAULT_BETA = 0.08
DEFAULT_F_LO = 8.0
DEFAULT_F_HI = 20.0


@dataclass(frozen=True)
class RPeakConfig:
    w1_ms: float = DEFAULT_W1_MS
    w2_ms: float = DEFAULT_W2_MS
    beta: float = DEFAULT_BETA
    f_lo: float = DEFAULT_F_LO
    f_hi: float = DEFAULT_F_HI

    def validate(self, fs: float) -> None:
        if not (0 < self.w1_ms < self.w2_ms):
            raise ValueError("need 0 < w1_ms < w2_ms")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if not (0 < self.f_lo < self.f_hi < fs / 2):
            raise ValueError(f"invalid band [{self.f_lo}, {self.f_hi}] Hz at fs={fs}")


@dataclass(frozen=True)
class Segment:
    """A contiguous slice of a parent sample sequence."""

    values: np.ndarray
    start_index: int

    def __len__(self) -> int:
        return len(self.values)


def bandpass_butterworth3(x, fs: float, f_lo: float = DEFAULT_F_LO,
                          f_hi: float = DEFAULT_F_HI) -> np.ndarray:
    """Causal third-order Butterworth band-pass, same-length output."""
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        raise ValueError("empty input")
    if not (0 < f_lo < f_hi < fs / 2):
        raise ValueError(f"invalid band [{f_lo}, {f_hi}] Hz at fs={fs}")
    sos = sp_signal.butter(3, [f_lo, f_hi], btype="bandpass", fs=fs, output="sos")
    return sp_signal.sosfilt(sos, x)


def _moving_average(x: np.ndarray, width: int) -> np.ndarray:
    # centered window; edges use a shrinking window via cumulative sums
    width = max(1, width)
    half = width // 2
    padded = np.concatenate([np.zeros(1), np.cumsum(x)])
    idx_hi = np.minimum(np.arange(len(x)) + half + 1, len(x))
    idx_lo = np.maximum(np.arange(len(x)) - half, 0)
    return (padded[idx_hi] - padded[idx_lo]) / (idx_hi - idx_lo)


def detect_rpeaks(filtered, fs: float, cfg: RPeakConfig | None = None) -> np.ndarray:
    """Find QRS peak indices in a band-passed signal.

    Returns a strictly ascending array of sample indices on the input
    timeline (filter delay uncompensated).  Empty input or an all-zero
    signal yields an empty array.
    """
    cfg = cfg or RPeakConfig()
    y = np.asarray(filtered, dtype=np.float64)
    if y.size == 0:
        return np.array([], dtype=np.int64)
    cfg.validate(fs)

    squared = y * y
    w1 = max(1, int(round(cfg.w1_ms * fs / 1000.0)))
    w2 = max(w1 + 1, int(round(cfg.w2_ms * fs / 1000.0)))
    ma_peak = _moving_average(squared, w1)
    ma_beat = _moving_average(squared, w2)
    threshold = ma_beat + cfg.beta * float(np.mean(squared))
    interest = ma_peak > threshold

    peaks = []
    edges = np.flatnonzero(np.diff(interest.astype(np.int8)))
    starts = list(edges[~interest[edges]] + 1) if edges.size else []
    if interest.size and interest[0]:
        starts.insert(0, 0)
    ends = list(edges[interest[edges]] + 1) if edges.size else []
    if interest.size and interest[-1]:
        ends.append(interest.size)
    for a, b in zip(starts, ends):
        if b - a >= w1:
            peaks.append(a + int(np.argmax(np.abs(y[a:b]))))

    # refractory: adjacent blocks can put peaks closer than one QRS window;
    # keep the stronger of any such pair
    kept: list[int] = []
    for p in peaks:
        if kept and p - kept[-1] < w1:
            if abs(y[p]) > abs(y[kept[-1]]):
                kept[-1] = p
        else:
            kept.append(p)
    return np.array(kept, dtype=np.int64)


def segment_by_rpeaks(x, rpeaks, max_len: int = 512) -> list[Segment]:
    """Partition x into beat segments [rpeaks[k], rpeaks[k+1]).

    Samples before the first peak and after the last are emitted as
    boundary segments, and inter-peak gaps longer than max_len are
    split at max_len, so concatenating all segments reproduces x.
    """
    x = np.asarray(x)
    rpeaks = np.asarray(rpeaks, dtype=np.int64)
    if np.any(rpeaks[:-1] >= rpeaks[1:]):
        raise ValueError("rpeaks must be strictly ascending")
    if rpeaks.size and (rpeaks[0] < 0 or rpeaks[-1] > len(x)):
        raise ValueError("rpeak index out of range")
    bounds = [0] + [int(r) for r in rpeaks if 0 < r < len(x)] + [len(x)]
    segments: list[Segment] = []
    for a, b in zip(bounds[:-1], bounds[1:]):
        while b - a > max_len:
            segments.append(Segment(values=x[a : a + max_len], start_index=a))
            a += max_len
        if b > a:
            segments.append(Segment(values=x[a:b], start_index=a))
    return segments
