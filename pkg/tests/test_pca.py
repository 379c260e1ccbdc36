import numpy as np
import pytest

from ecgsq.pca import (PcaChunk, pca_compress, pca_decode, pca_decode_rows,
                       pca_encode, pca_decompress)


def test_encode_orthonormal_basis():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(40, 20))
    mu, basis, scores = pca_encode(x, 5)
    np.testing.assert_allclose(basis.T @ basis, np.eye(5), atol=1e-10)
    assert scores.shape == (40, 5)


def test_encode_decode_exact_on_rank_limited_data():
    # rows spanning a 3-dimensional subspace reconstruct exactly with K=3
    rng = np.random.default_rng(1)
    latent = rng.normal(size=(50, 3))
    mixing = rng.normal(size=(3, 24))
    x = latent @ mixing + rng.normal(size=24)
    mu, basis, scores = pca_encode(x, 3)
    recon = pca_decode_rows(mu, basis, scores)
    np.testing.assert_allclose(recon, x, atol=1e-8)


def test_components_ordered_by_variance():
    rng = np.random.default_rng(2)
    x = rng.normal(size=(100, 10)) * np.array([10.0, 5.0, 1.0] + [0.1] * 7)
    _, _, scores = pca_encode(x, 3)
    variances = scores.var(axis=0)
    assert variances[0] > variances[1] > variances[2]


def test_encode_sign_deterministic():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(30, 12))
    _, basis_a, _ = pca_encode(x, 4)
    _, basis_b, _ = pca_encode(x.copy(), 4)
    np.testing.assert_array_equal(basis_a, basis_b)
    # the dominant element of each column is positive by convention
    for col in basis_a.T:
        assert col[np.argmax(np.abs(col))] > 0


def test_encode_validates():
    with pytest.raises(ValueError):
        pca_encode(np.zeros((10, 5)), 5)  # K must be < W
    with pytest.raises(ValueError):
        pca_encode(np.zeros((1, 5)), 2)  # need >= 2 rows


def test_compress_roundtrip_length(record_100):
    chunks = pca_compress(record_100, n_components=5)
    recon = pca_decompress(chunks)
    assert len(recon) == len(record_100.samples)
    assert all(isinstance(c, PcaChunk) for c in chunks)
    assert all(c.scores.shape[1] == 5 for c in chunks)


def test_more_components_reduce_distortion(record_100):
    x = record_100.samples.astype(np.float64)
    errs = []
    for k in (1, 9):
        recon = pca_decompress(pca_compress(record_100, n_components=k))
        errs.append(float(np.sqrt(np.mean((x - recon) ** 2))))
    assert errs[1] < errs[0]


def test_decode_concatenates_rows():
    mu = np.zeros(4)
    basis = np.zeros((4, 1))
    chunk = PcaChunk(mu=mu, basis=basis, scores=np.zeros((2, 1)),
                     lens=np.array([3, 5]), gains=np.array([1.0, 1.0]),
                     offsets=np.array([2.0, -2.0]))
    out = pca_decode(chunk)
    assert len(out) == 8
    np.testing.assert_allclose(out[:3], 2.0)
    np.testing.assert_allclose(out[3:], -2.0)


def test_empty_stream():
    assert len(pca_decompress([])) == 0
