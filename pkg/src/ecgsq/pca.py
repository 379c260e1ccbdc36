"""Principal-component beat codec.

Consecutive normalized beats are stacked into chunks of N rows; each
chunk ships its column means, the top-K eigenvectors of the sample
covariance, and the per-row scores.  Adjacent chunk reconstructions
are concatenated as-is; any misalignment at chunk boundaries shows
up as distortion and is deliberately not corrected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beat_norm import (amplitude_denormalize_od, amplitude_normalize_od,
                        period_denormalize, period_normalize)
from .records import EcgRecord
from .od import od_segments

__all__ = ["PcaChunk", "pca_encode", "pca_decode", "pca_compress", "pca_decompress"]

DEFAULT_N = 50
DEFAULT_W = 200
DEFAULT_MAX_SEG = 512


@dataclass(frozen=True)
class PcaChunk:
    mu: np.ndarray       # (W,) column means
    basis: np.ndarray    # (W, K) orthonormal eigenvectors, eigenvalues descending
    scores: np.ndarray   # (N', K)
    lens: np.ndarray     # (N',) original segment lengths
    gains: np.ndarray    # (N',)
    offsets: np.ndarray  # (N',)


def pca_encode(x: np.ndarray, n_components: int):
    """Top-K eigendecomposition of the rows' sample covariance.

    Returns (mu, basis, scores).  Eigenvector signs are fixed so each
    column's largest-magnitude element is positive, making the encode
    deterministic.
    """
    x = np.asarray(x, dtype=np.float64)
    n, w = x.shape
    if not (1 <= n_components < w):
        raise ValueError(f"need 1 <= K < W, got K={n_components}, W={w}")
    if n < 2:
        raise ValueError("need at least 2 rows")
    mu = x.mean(axis=0)
    centered = x - mu
    cov = centered.T @ centered / (n - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1][:n_components]
    basis = eigvecs[:, order]
    flips = np.sign(basis[np.argmax(np.abs(basis), axis=0), np.arange(n_components)])
    flips[flips == 0] = 1.0
    basis = basis * flips
    scores = centered @ basis
    return mu, basis, scores


def pca_decode_rows(mu: np.ndarray, basis: np.ndarray, scores: np.ndarray) -> np.ndarray:
    """Reconstruct the normalized-segment matrix from a chunk's pieces."""
    return scores @ basis.T + mu


def pca_decode(chunk: PcaChunk) -> np.ndarray:
    """Denormalize a chunk's rows and concatenate them in order."""
    rows = pca_decode_rows(chunk.mu, chunk.basis, chunk.scores)
    parts = []
    for row, l, g, o in zip(rows, chunk.lens, chunk.gains, chunk.offsets):
        beat = amplitude_denormalize_od(row, float(g), float(o))
        parts.append(period_denormalize(beat, int(l)))
    return np.concatenate(parts) if parts else np.array([])


def pca_compress(rec: EcgRecord, n_components: int, chunk_rows: int = DEFAULT_N,
                 norm_len: int = DEFAULT_W,
                 max_seg: int = DEFAULT_MAX_SEG) -> list[PcaChunk]:
    """Segment, normalize, and encode in chunks of chunk_rows beats.

    The final partial chunk keeps its true row count.
    """
    segs = od_segments(rec, max_seg)
    rows, lens, gains, offsets = [], [], [], []
    for seg in segs:
        if len(seg) == 1:
            resampled = np.full(norm_len, float(seg.values[0]))
        else:
            resampled = period_normalize(seg.values, norm_len)
        x, g, o = amplitude_normalize_od(resampled)
        rows.append(x)
        lens.append(len(seg))
        gains.append(g)
        offsets.append(o)
    chunks = []
    for start in range(0, len(rows), chunk_rows):
        block = np.array(rows[start : start + chunk_rows])
        if len(block) < 2:
            # a trailing single beat cannot be eigendecomposed; ship it
            # as a zero-score chunk around its own mean
            mu = block[0]
            basis = np.zeros((norm_len, n_components))
            scores = np.zeros((len(block), n_components))
        else:
            k = min(n_components, norm_len - 1)
            mu, basis, scores = pca_encode(block, k)
        chunks.append(PcaChunk(
            mu=mu, basis=basis, scores=scores,
            lens=np.array(lens[start : start + chunk_rows]),
            gains=np.array(gains[start : start + chunk_rows]),
            offsets=np.array(offsets[start : start + chunk_rows]),
        ))
    return chunks


def pca_decompress(chunks) -> np.ndarray:
    parts = [pca_decode(c) for c in chunks]
    if not parts:
        return np.array([], dtype=np.int64)
    out = np.rint(np.concatenate(parts))
    return np.clip(out, -32768, 32767).astype(np.int64)
