"""Rate and distortion metrics for (original, reconstructed) pairs.

PRDN, CC, and SNR are undefined for a constant original signal and
are reported as None; a perfect reconstruction yields SNR = +inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rpeak import RPeakConfig, bandpass_butterworth3, detect_rpeaks

__all__ = [
    "DistortionReport",
    "compression_ratio",
    "distortion_report",
    "quality_score",
    "ORIGINAL_BITS_PER_SAMPLE",
]

ORIGINAL_BITS_PER_SAMPLE = 16  # handling resolution of one ECG sample


@dataclass(frozen=True)
class DistortionReport:
    prd: float
    prdn: float | None
    rmse: float
    rmsep: float | None
    snr_db: float | None  # math.inf for a perfect reconstruction
    mae: float
    cc: float | None
    n: int


def compression_ratio(original_bits: int, compressed_bits: int) -> float:
    if original_bits <= 0 or compressed_bits <= 0:
        raise ValueError("bit counts must be positive")
    return original_bits / compressed_bits


def _beatwise_p2p(x: np.ndarray, fs: float) -> float | None:
    """Mean per-beat peak-to-peak amplitude; None if < 2 beats found."""
    filtered = bandpass_butterworth3(x, fs)
    rpeaks = detect_rpeaks(filtered, fs, RPeakConfig())
    if len(rpeaks) < 2:
        return None
    spans = []
    for a, b in zip(rpeaks[:-1], rpeaks[1:]):
        beat = x[a:b]
        spans.append(float(np.max(beat)) - float(np.min(beat)))
    return float(np.mean(spans))


def distortion_report(x, xhat, fs: float | None = None) -> DistortionReport:
    x = np.asarray(x, dtype=np.float64)
    xhat = np.asarray(xhat, dtype=np.float64)
    if x.shape != xhat.shape or x.ndim != 1:
        raise ValueError(f"length mismatch: {x.shape} vs {xhat.shape}")
    if x.size < 2:
        raise ValueError("need at least 2 samples")

    err = x - xhat
    sq_err = float(np.sum(err * err))
    n = x.size
    rmse = math.sqrt(sq_err / n)
    mae = float(np.max(np.abs(err)))

    energy = float(np.sum(x * x))
    prd = 100.0 * math.sqrt(sq_err / energy) if energy > 0 else (0.0 if sq_err == 0 else math.inf)

    centered = x - np.mean(x)
    var_energy = float(np.sum(centered * centered))
    if var_energy > 0:
        prdn = 100.0 * math.sqrt(sq_err / var_energy)
        snr = math.inf if sq_err == 0 else 10.0 * math.log10(var_energy / sq_err)
    else:
        prdn = None
        snr = None

    xhat_centered = xhat - np.mean(xhat)
    var_hat = float(np.sum(xhat_centered * xhat_centered))
    if var_energy > 0 and var_hat > 0:
        cc = float(np.sum(centered * xhat_centered)) / math.sqrt(var_energy * var_hat)
    elif var_energy > 0 or var_hat > 0:
        cc = None
    else:
        cc = 1.0 if sq_err == 0 else None

    p2p = None
    if fs is not None:
        p2p = _beatwise_p2p(x, fs)
    if p2p is None:
        p2p = float(np.max(x)) - float(np.min(x))
    rmsep = 100.0 / p2p * rmse if p2p > 0 else None

    return DistortionReport(prd=prd, prdn=prdn, rmse=rmse, rmsep=rmsep,
                            snr_db=snr, mae=mae, cc=cc, n=n)


def quality_score(cr: float, prd: float) -> float | None:
    """CR over PRD; None when PRD is zero (score undefined)."""
    if prd == 0:
        return None
    return cr / prd
