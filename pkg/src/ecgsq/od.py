"""On-line dictionary beat codec.

Beats are period/amplitude normalized and matched against a codebook
built at runtime with the max-norm distance.  A miss appends the
normalized beat as a new codeword and ships it, so the receiver's
codebook stays synchronized message by message.

Messages carry exact float64 values; half-precision rounding belongs
to the wire layer (see bitstream).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beat_norm import (amplitude_denormalize_od, amplitude_normalize_od,
                        period_denormalize, period_normalize)
from .errors import CorruptStreamError
from .records import EcgRecord
from .rpeak import RPeakConfig, bandpass_butterworth3, detect_rpeaks, segment_by_rpeaks

__all__ = ["OdKnown", "OdNew", "od_compress", "od_decompress", "od_segments"]

DEFAULT_W = 200
DEFAULT_MAX_SEG = 512


@dataclass(frozen=True)
class OdKnown:
    index: int
    orig_len: int
    gain: float
    offset: float


@dataclass(frozen=True)
class OdNew:
    codeword: np.ndarray  # length-W normalized beat
    index: int
    orig_len: int
    gain: float
    offset: float


def od_segments(rec: EcgRecord, max_seg: int = DEFAULT_MAX_SEG,
                rpeak_cfg: RPeakConfig | None = None):
    """Shared preprocessing chain: band-pass, detect R-peaks, segment."""
    filtered = bandpass_butterworth3(rec.samples, rec.fs)
    rpeaks = detect_rpeaks(filtered, rec.fs, rpeak_cfg or RPeakConfig())
    return segment_by_rpeaks(rec.samples, rpeaks, max_len=max_seg)


def od_compress(rec: EcgRecord, eps: float, codeword_len: int = DEFAULT_W,
                max_seg: int = DEFAULT_MAX_SEG):
    """Compress a record; returns (messages, final_codebook)."""
    codebook: list[np.ndarray] = []
    messages = []
    for seg in od_segments(rec, max_seg):
        if len(seg) == 1:
            # degenerate one-sample segment: constant vector, not an error
            resampled = np.full(codeword_len, float(seg.values[0]))
        else:
            resampled = period_normalize(seg.values, codeword_len)
        x, gain, offset = amplitude_normalize_od(resampled)
        if codebook:
            dists = [float(np.max(np.abs(x - c))) for c in codebook]
            best = int(np.argmin(dists))
        else:
            best = None
        if best is not None and dists[best] <= eps:
            messages.append(OdKnown(index=best, orig_len=len(seg),
                                    gain=gain, offset=offset))
        else:
            codebook.append(x)
            messages.append(OdNew(codeword=x, index=len(codebook) - 1,
                                  orig_len=len(seg), gain=gain, offset=offset))
    return messages, codebook


def od_decompress(messages, codeword_len: int = DEFAULT_W) -> np.ndarray:
    """Rebuild the sample sequence, maintaining the synchronized codebook."""
    codebook: list[np.ndarray] = []
    parts = []
    for msg in messages:
        if isinstance(msg, OdNew):
            if msg.index != len(codebook):
                raise CorruptStreamError(
                    f"new codeword index {msg.index} != codebook size {len(codebook)}")
            codebook.append(np.asarray(msg.codeword, dtype=np.float64))
            x = codebook[-1]
        else:
            if msg.index >= len(codebook):
                raise CorruptStreamError(
                    f"codeword index {msg.index} >= codebook size {len(codebook)}")
            x = codebook[msg.index]
        beat = amplitude_denormalize_od(x, msg.gain, msg.offset)
        parts.append(period_denormalize(beat, msg.orig_len))
    if not parts:
        return np.array([], dtype=np.int64)
    out = np.concatenate(parts)
    return np.clip(np.rint(out), -32768, 32767).astype(np.int64)
