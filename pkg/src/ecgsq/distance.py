"""Fragment similarity measures and affine-fit helpers.

dist_v1 is max|x-y| minus mean|x-y|: zero for pure offsets, cheap to
evaluate.  dist_v2 additionally rejects fragment pairs whose
differences change sign (the pair intersects -> incomparable, +inf)
and penalizes pairs whose difference profile has a large spread on
the low side, via mean|x-y| minus min|x-y|.

The incomparable result is IEEE +inf: it can never be selected by a
`d <= eps` gate with finite eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AffineFit",
    "dist_v1",
    "dist_v2",
    "fit_affine",
    "mean_offset",
    "scan_v1",
    "scan_v2",
    "score_candidates",
    "prefix_profile",
]

_CROSS_RTOL = 1e-9  # crossing test tolerance for real-valued inputs


@dataclass(frozen=True)
class AffineFit:
    gain: float
    offset: float


def _check_pair(x, y):
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape or x.ndim != 1 or x.size == 0:
        raise ValueError(f"fragments must be equal-length 1-D, got {x.shape} vs {y.shape}")
    return x, y


def dist_v1(x, y) -> float:
    x, y = _check_pair(x, y)
    ad = np.abs(x.astype(np.float64) - y.astype(np.float64))
    return float(np.max(ad) - np.mean(ad))


def _crossed(diff: np.ndarray, integral: bool) -> bool:
    sum_abs = float(np.sum(np.abs(diff)))
    abs_sum = abs(float(np.sum(diff)))
    if integral:
        return int(round(sum_abs)) != int(round(abs_sum))
    return abs(sum_abs - abs_sum) > _CROSS_RTOL * max(sum_abs, 1.0)


def dist_v2(x, y) -> float:
    """Constrained distance; +inf when the fragments intersect."""
    x, y = _check_pair(x, y)
    integral = np.issubdtype(x.dtype, np.integer) and np.issubdtype(y.dtype, np.integer)
    diff = x.astype(np.float64) - y.astype(np.float64)
    if _crossed(diff, integral):
        return math.inf
    ad = np.abs(diff)
    mean = float(np.mean(ad))
    return max(float(np.max(ad)) - mean, mean - float(np.min(ad)))


def fit_affine(b, f) -> AffineFit:
    """Least-squares gain/offset mapping fragment b onto fragment f.

    A constant b has no usable slope; fall back to unity gain with a
    mean offset.
    """
    b, f = _check_pair(b, f)
    bf = b.astype(np.float64)
    ff = f.astype(np.float64)
    mb, mf = float(np.mean(bf)), float(np.mean(ff))
    var = float(np.sum((bf - mb) ** 2))
    if var == 0.0:
        return AffineFit(gain=1.0, offset=float(np.mean(ff - bf)))
    gain = float(np.sum((bf - mb) * (ff - mf))) / var
    return AffineFit(gain=gain, offset=mf - gain * mb)


def mean_offset(b, f) -> float:
    b, f = _check_pair(b, f)
    return float(np.mean(f.astype(np.float64) - b.astype(np.float64)))


# ---------------------------------------------------------------------------
# vectorized forms used by the streaming compressor and its oracles


def _windows(bank: np.ndarray, length: int) -> np.ndarray:
    return np.lib.stride_tricks.sliding_window_view(bank, length)


def scan_v1(bank: np.ndarray, frag: np.ndarray) -> np.ndarray:
    """dist_v1(frag, bank[i:i+len(frag)]) for every start index i."""
    l = len(frag)
    ad = np.abs(_windows(bank, l).astype(np.float64) - frag.astype(np.float64))
    return ad.max(axis=1) - ad.mean(axis=1)


def scan_v2(bank: np.ndarray, frag: np.ndarray) -> np.ndarray:
    l = len(frag)
    diff = _windows(bank, l).astype(np.float64) - frag.astype(np.float64)
    ad = np.abs(diff)
    sum_abs = ad.sum(axis=1)
    abs_sum = np.abs(diff.sum(axis=1))
    integral = np.issubdtype(bank.dtype, np.integer) and np.issubdtype(frag.dtype, np.integer)
    if integral:
        crossed = np.round(sum_abs) != np.round(abs_sum)
    else:
        crossed = np.abs(sum_abs - abs_sum) > _CROSS_RTOL * np.maximum(sum_abs, 1.0)
    mean = sum_abs / l
    d = np.maximum(ad.max(axis=1) - mean, mean - ad.min(axis=1))
    d[crossed] = np.inf
    return d


def score_candidates(bank: np.ndarray, frag: np.ndarray, starts: np.ndarray,
                     use_v2: bool) -> np.ndarray:
    """Distances between frag and bank windows at the given start indices."""
    l = len(frag)
    win = _windows(bank, l)[starts]
    diff = win.astype(np.float64) - frag.astype(np.float64)
    ad = np.abs(diff)
    mean = ad.mean(axis=1)
    d = ad.max(axis=1) - mean
    if use_v2:
        sum_abs = ad.sum(axis=1)
        abs_sum = np.abs(diff.sum(axis=1))
        integral = (np.issubdtype(bank.dtype, np.integer)
                    and np.issubdtype(frag.dtype, np.integer))
        if integral:
            crossed = np.round(sum_abs) != np.round(abs_sum)
        else:
            crossed = np.abs(sum_abs - abs_sum) > _CROSS_RTOL * np.maximum(sum_abs, 1.0)
        d = np.maximum(d, mean - ad.min(axis=1))
        d[crossed] = np.inf
    return d


def prefix_profile(bank_frag: np.ndarray, buf_frag: np.ndarray, use_v2: bool) -> np.ndarray:
    """Distance of every prefix pair: out[l-1] = d(buf[:l], bank[:l]).

    Computed with running extrema/sums in O(n); the backbone of the
    brute-force match oracle and the monotonicity probe.
    """
    diff = buf_frag.astype(np.float64) - bank_frag.astype(np.float64)
    ad = np.abs(diff)
    n = len(diff)
    run_max = np.maximum.accumulate(ad)
    run_mean = np.cumsum(ad) / np.arange(1, n + 1)
    d = run_max - run_mean
    if use_v2:
        run_min = np.minimum.accumulate(ad)
        d = np.maximum(d, run_mean - run_min)
        sum_abs = np.cumsum(ad)
        abs_sum = np.abs(np.cumsum(diff))
        integral = (np.issubdtype(bank_frag.dtype, np.integer)
                    and np.issubdtype(buf_frag.dtype, np.integer))
        if integral:
            crossed = np.round(sum_abs) != np.round(abs_sum)
        else:
            crossed = np.abs(sum_abs - abs_sum) > _CROSS_RTOL * np.maximum(sum_abs, 1.0)
        d[crossed] = np.inf
    return d
