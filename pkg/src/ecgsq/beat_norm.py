"""Period and amplitude normalization for the beat-level codecs.

Period normalization resamples a beat to a fixed length by linear
interpolation.  Two amplitude rules exist: the dictionary codecs
remove a gain/offset pair (offset = mean, gain = half peak-to-peak,
floored at 1), while gain-shape quantization divides by the L2 norm.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "period_normalize",
    "period_denormalize",
    "amplitude_normalize_od",
    "amplitude_denormalize_od",
    "amplitude_normalize_gsvq",
]


def _resample_linear(values: np.ndarray, out_len: int) -> np.ndarray:
    n = len(values)
    if n == 1:
        return np.full(out_len, float(values[0]))
    if out_len == 1:
        return np.array([float(values[0])])
    pos = np.arange(out_len) * (n - 1) / (out_len - 1)
    return np.interp(pos, np.arange(n), values.astype(np.float64))


def period_normalize(values, target_len: int) -> np.ndarray:
    """Resample a segment to target_len points; endpoints preserved."""
    values = np.asarray(values)
    if values.size == 0:
        raise ValueError("empty segment")
    if target_len < 2:
        raise ValueError("target length must be >= 2")
    return _resample_linear(values, target_len)


def period_denormalize(values, orig_len: int) -> np.ndarray:
    """Inverse resampling back to the original segment length."""
    values = np.asarray(values, dtype=np.float64)
    if orig_len < 1:
        raise ValueError("original length must be >= 1")
    return _resample_linear(values, orig_len)


def amplitude_normalize_od(values):
    """Remove offset (mean) and gain (half peak-to-peak, floored at 1).

    Returns (normalized, gain, offset); constant input yields zeros
    with gain 1.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.size == 0:
        raise ValueError("empty segment")
    offset = float(np.mean(x))
    gain = max((float(np.max(x)) - float(np.min(x))) / 2.0, 1.0)
    return (x - offset) / gain, gain, offset


def amplitude_denormalize_od(normalized, gain: float, offset: float) -> np.ndarray:
    return np.asarray(normalized, dtype=np.float64) * gain + offset


def amplitude_normalize_gsvq(values):
    """Divide by the L2 norm; returns (unit-norm shape, gain).

    An all-zero segment is passed through with gain 1.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.size == 0:
        raise ValueError("empty segment")
    gain = float(np.linalg.norm(x))
    if gain == 0.0:
        return x.copy(), 1.0
    return x / gain, gain
