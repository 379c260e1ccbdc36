"""Gain-shape vector quantization codec with residual coding.

An offline codebook of unit-norm beat shapes is trained with
binary-splitting LBG.  At compression time each beat is period
normalized, gain normalized, matched to the nearest codeword (L2),
and the time-domain residual against the renormalized codeword is
encoded as a sparse set of significant points: a greedy bounded-
deviation piecewise-linear pass with a 16-sample look-ahead whose
reconstruction never deviates from the residual by more than the
configured threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

from .beat_norm import amplitude_normalize_gsvq, period_denormalize, period_normalize
from .errors import CorruptStreamError
from .records import EcgRecord
from .rpeak import RPeakConfig
from .od import od_segments

__all__ = [
    "GsvqCodebook",
    "GsvqMessage",
    "ResidualStream",
    "lbg_train",
    "encode_residuals",
    "decode_residuals",
    "gsvq_compress",
    "gsvq_decompress",
    "gsvq_training_vectors",
]

DEFAULT_N = 64
DEFAULT_K = 256
DEFAULT_MAX_SEG = 512

AREA_BUFFER = 16        # look-ahead cap of the residual encoder
RESIDUAL_MAX = 1023     # 11-bit signed significant-point values
RESIDUAL_MIN = -1024
DIST_MAX = 15           # 4-bit inter-point distances; longer gaps chain
MAX_POINTS = 511        # 9-bit point count

_SPLIT_PERTURBATION = 0.01
_LLOYD_TOL = 1e-4
_LLOYD_MAX_ITER = 100


@dataclass(frozen=True)
class GsvqCodebook:
    codewords: np.ndarray  # (N, K), unit L2 rows

    @property
    def n(self) -> int:
        return self.codewords.shape[0]

    @property
    def k(self) -> int:
        return self.codewords.shape[1]


@dataclass(frozen=True)
class ResidualStream:
    """Sparse piecewise-linear description of an integer residual."""

    points: list[tuple[int, int]]  # (distance to previous point, value)
    length: int                    # samples in the residual

    @property
    def clamped(self) -> bool:
        return any(not (RESIDUAL_MIN <= v <= RESIDUAL_MAX) for _, v in self.points)


@dataclass(frozen=True)
class GsvqMessage:
    index: int
    orig_len: int
    gain: float
    residuals: ResidualStream


def _lloyd(vectors: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, float]:
    prev = None
    for _ in range(_LLOYD_MAX_ITER):
        d2 = ((vectors[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        assign = np.argmin(d2, axis=1)
        distortion = float(d2[np.arange(len(vectors)), assign].mean())
        for j in range(len(centroids)):
            members = vectors[assign == j]
            if len(members):
                centroids[j] = members.mean(axis=0)
            else:
                # re-seed an empty cell from the farthest member of the
                # most populous cell
                counts = np.bincount(assign, minlength=len(centroids))
                big = int(np.argmax(counts))
                cell = np.flatnonzero(assign == big)
                far = cell[int(np.argmax(d2[cell, big]))]
                centroids[j] = vectors[far]
                assign[far] = j
        if prev is not None and prev > 0 and (prev - distortion) / prev < _LLOYD_TOL:
            break
        prev = distortion
    return centroids, distortion


def lbg_train(vectors, n_codewords: int = DEFAULT_N) -> GsvqCodebook:
    """Binary-splitting LBG; deterministic given input order."""
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2:
        raise ValueError("training vectors must form a 2-D array")
    if len(vectors) < n_codewords:
        raise ValueError(f"need at least {n_codewords} vectors, got {len(vectors)}")
    centroids = vectors.mean(axis=0, keepdims=True)
    centroids, _ = _lloyd(vectors, centroids)
    while len(centroids) < n_codewords:
        n_split = min(len(centroids), n_codewords - len(centroids))
        # split the centroids with the largest cells first
        d2 = ((vectors[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        counts = np.bincount(np.argmin(d2, axis=1), minlength=len(centroids))
        order = np.argsort(-counts, kind="stable")[:n_split]
        grown = [centroids]
        for j in order:
            grown.append(centroids[j][None, :] * (1 + _SPLIT_PERTURBATION))
        centroids = np.concatenate(grown)
        centroids[order] *= 1 - _SPLIT_PERTURBATION
        centroids, _ = _lloyd(vectors, centroids)
    norms = np.linalg.norm(centroids, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return GsvqCodebook(codewords=centroids / norms)


def gsvq_training_vectors(rec: EcgRecord, shape_len: int = DEFAULT_K,
                          max_seg: int = DEFAULT_MAX_SEG,
                          rpeak_cfg: RPeakConfig | None = None) -> np.ndarray:
    """Unit-norm shape vectors of a record's beats (training corpus rows)."""
    rows = []
    for seg in od_segments(rec, max_seg, rpeak_cfg):
        if len(seg) < 2:
            continue
        shape, _ = amplitude_normalize_gsvq(period_normalize(seg.values, shape_len))
        rows.append(shape)
    return np.array(rows)


def encode_residuals(residual, a_th: float) -> ResidualStream:
    """Greedy bounded-deviation piecewise-linear significant points.

    Guarantees |reconstruction - residual| <= a_th at every sample
    (up to 11-bit value clamping).  Gaps longer than 15 samples are
    split into chained points to fit the 4-bit distance field.
    """
    residual = np.asarray(residual, dtype=np.int64)
    n = len(residual)
    if n == 0:
        return ResidualStream(points=[], length=0)

    def clamp(v: int) -> int:
        return min(max(v, RESIDUAL_MIN), RESIDUAL_MAX)

    def fits(anchor_pos: int, anchor_val: float, end: int) -> bool:
        # all samples in (anchor_pos, end] within a_th of the anchor->end line
        span = end - anchor_pos
        idx = np.arange(anchor_pos + 1, end + 1)
        line = anchor_val + (residual[end] - anchor_val) * (idx - anchor_pos) / span
        return bool(np.max(np.abs(residual[idx] - line)) <= a_th)

    # the first sample is always a significant point so encoder and
    # decoder share the same head anchor
    points = [(1, clamp(int(residual[0])))]
    last_pos = 0
    last_val = float(points[0][1])
    pos = 1
    while pos < n:
        # grow the run while the line to the candidate end keeps fitting,
        # bounded by the look-ahead buffer and the 4-bit distance field
        end = pos
        limit = min(n - 1, last_pos + DIST_MAX, pos + AREA_BUFFER - 1)
        while end < limit and fits(last_pos, last_val, end + 1):
            end += 1
        value = clamp(int(residual[end]))
        points.append((end - last_pos, value))
        last_pos = end
        last_val = float(value)
        pos = end + 1
        if len(points) >= MAX_POINTS and pos < n:
            break  # 9-bit point count exhausted; flat tail takes over
    return ResidualStream(points=points, length=n)


def decode_residuals(stream: ResidualStream) -> np.ndarray:
    """Linear interpolation between significant points."""
    n = stream.length
    out = np.zeros(n, dtype=np.float64)
    if n == 0 or not stream.points:
        return out
    last_pos = -1
    last_val = None
    for dist, val in stream.points:
        pos = last_pos + dist
        if pos >= n:
            raise CorruptStreamError("significant point beyond residual length")
        anchor_val = val if last_val is None else last_val  # flat head extension
        span = pos - last_pos
        idx = np.arange(last_pos + 1, pos + 1)
        out[idx] = anchor_val + (val - anchor_val) * (idx - last_pos) / span
        last_pos = pos
        last_val = float(val)
    if last_pos < n - 1:
        out[last_pos + 1 :] = last_val  # flat tail extension
    return out


def _renormalized_codeword(codeword: np.ndarray, gain: float, orig_len: int) -> np.ndarray:
    if orig_len == 1:
        return np.array([codeword[0] * gain])
    return period_denormalize(codeword * gain, orig_len)


def gsvq_compress(rec: EcgRecord, codebook: GsvqCodebook, a_th: float,
                  max_seg: int = DEFAULT_MAX_SEG) -> list[GsvqMessage]:
    messages = []
    for seg in od_segments(rec, max_seg):
        values = seg.values
        if len(values) == 1:
            shape_in = np.full(codebook.k, float(values[0]))
        else:
            shape_in = period_normalize(values, codebook.k)
        shape, gain = amplitude_normalize_gsvq(shape_in)
        d2 = ((codebook.codewords - shape) ** 2).sum(axis=1)
        best = int(np.argmin(d2))
        gain_q = float(np.float16(gain))
        if math.isinf(gain_q):
            gain_q = math.copysign(65504.0, gain)
        approx = np.rint(_renormalized_codeword(codebook.codewords[best], gain_q,
                                                len(values))).astype(np.int64)
        residual = values - approx
        messages.append(GsvqMessage(index=best, orig_len=len(values), gain=gain_q,
                                    residuals=encode_residuals(residual, a_th)))
    return messages


def gsvq_decompress(messages, codebook: GsvqCodebook) -> np.ndarray:
    parts = []
    for msg in messages:
        if not (0 <= msg.index < codebook.n):
            raise CorruptStreamError(f"codeword index {msg.index} out of range")
        approx = np.rint(_renormalized_codeword(codebook.codewords[msg.index],
                                                msg.gain, msg.orig_len))
        parts.append(approx + np.rint(decode_residuals(msg.residuals)))
    if not parts:
        return np.array([], dtype=np.int64)
    out = np.concatenate(parts)
    return np.clip(out, -32768, 32767).astype(np.int64)
