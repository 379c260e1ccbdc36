"""Lossy ECG compression codecs and a rate-distortion benchmark harness."""

from .distance import dist_v1, dist_v2, fit_affine
from .gsvq import GsvqCodebook, gsvq_compress, gsvq_decompress, lbg_train
from .inlc import (Direct, InlcCompressor, InlcConfig, InlcDecompressor, Match,
                   inlc_compress, inlc_decompress)
from .metrics import DistortionReport, compression_ratio, distortion_report, quality_score
from .od import od_compress, od_decompress
from .pca import pca_compress, pca_decompress
from .records import EcgRecord, load_csv_record, load_wfdb_record, slice_record
from .rpeak import bandpass_butterworth3, detect_rpeaks, segment_by_rpeaks

__version__ = "0.1.0"

__all__ = [
    "Direct",
    "DistortionReport",
    "EcgRecord",
    "GsvqCodebook",
    "InlcCompressor",
    "InlcConfig",
    "InlcDecompressor",
    "Match",
    "bandpass_butterworth3",
    "compression_ratio",
    "detect_rpeaks",
    "dist_v1",
    "dist_v2",
    "distortion_report",
    "fit_affine",
    "gsvq_compress",
    "gsvq_decompress",
    "inlc_compress",
    "inlc_decompress",
    "lbg_train",
    "load_csv_record",
    "load_wfdb_record",
    "od_compress",
    "od_decompress",
    "pca_compress",
    "pca_decompress",
    "quality_score",
    "segment_by_rpeaks",
    "slice_record",
    "__version__",
]
