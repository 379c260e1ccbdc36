"""Sweep harness: run codecs over records and parameter grids.

Every (record, parameter) cell compresses, serializes, decodes the
serialized stream back, and scores the reconstruction, so the
reported distortion includes wire quantization.  Per-parameter
corpus-average rows follow the per-record rows.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bitstream, gsvq, inlc, od, pca
from .distance import prefix_profile
from .metrics import (ORIGINAL_BITS_PER_SAMPLE, compression_ratio,
                      distortion_report, quality_score)
from .records import EcgRecord

__all__ = [
    "SweepSpec",
    "CSV_COLUMNS",
    "run_cell",
    "run_sweep",
    "run_variant_matrix",
    "run_monotonicity_probe",
    "rows_to_csv",
    "PARAM_SETS",
]

CSV_COLUMNS = ["record", "schema", "variant", "param", "cr", "prd", "prdn",
               "rmse", "rmsep", "snr", "mae", "cc", "qs"]
TIMING_COLUMNS = ["encode_ms", "decode_ms"]

# reference parameter grids for the four schemata
PARAM_SETS = {
    "od": [round(0.02 * i, 2) for i in range(1, 16)],
    "gsvq": [round(0.02 * i, 2) for i in range(1, 16)],
    "pca": [15, 13, 11, 9, 7, 5, 3, 1],
    "inlc": [2, 4, 6, 8, 10, 15, 20, 30, 40, 50, 60, 70],
}

AVERAGE_LABEL = "average"


@dataclass(frozen=True)
class SweepSpec:
    schema: str
    records: tuple[str, ...]          # header/csv paths, resolved by the CLI
    params: tuple[float, ...]
    start_s: float = 0.0
    dur_s: float = 60.0
    distance: str = "v1"
    bank_policy: str = "static"
    periodic_interval_s: float = 60.0
    offset_mode: str = "go"
    codebook_path: str | None = None
    jobs: int = 1
    timing: bool = False

    def __post_init__(self):
        if not self.records or not self.params:
            raise ValueError("records and params must be non-empty")


def _inlc_cfg(param: float, options: dict) -> inlc.InlcConfig:
    return inlc.InlcConfig(
        eps=float(param),
        distance=options.get("distance", "v1"),
        bank_policy=options.get("bank_policy", "static"),
        periodic_interval_s=options.get("periodic_interval_s", 60.0),
        offset_mode=options.get("offset_mode", "go"),
    )


def gsvq_threshold(param: float, rec: EcgRecord) -> float:
    """Sweep parameters are fractions of the ADC full-scale range."""
    return float(param) * (1 << rec.adc_resolution_bits)


def run_cell(rec: EcgRecord, schema: str, param: float,
             options: dict | None = None,
             codebook: gsvq.GsvqCodebook | None = None) -> dict:
    """Compress/decompress one record at one parameter; returns a row."""
    options = options or {}
    x = rec.samples
    n_samples = len(x)
    variant = ""

    t0 = time.perf_counter()
    if schema == "inlc":
        cfg = _inlc_cfg(param, options)
        variant = cfg.variant_label
        messages = inlc.inlc_compress(x, cfg, fs=rec.fs)
        blob = bitstream.pack_stream("inlc", messages, cfg=cfg, fs=rec.fs,
                                     n_samples=n_samples)
    elif schema == "od":
        messages, _ = od.od_compress(rec, eps=float(param))
        blob = bitstream.pack_stream("od", messages, codeword_len=od.DEFAULT_W,
                                     eps=float(param), n_samples=n_samples)
    elif schema == "gsvq":
        if codebook is None:
            raise ValueError("gsvq needs a trained codebook")
        a_th = gsvq_threshold(param, rec)
        messages = gsvq.gsvq_compress(rec, codebook, a_th)
        blob = bitstream.pack_stream("gsvq", messages, n=codebook.n, k=codebook.k,
                                     a_th=a_th, n_samples=n_samples)
    elif schema == "pca":
        messages = pca.pca_compress(rec, n_components=int(param))
        blob = bitstream.pack_stream("pca", messages, norm_len=pca.DEFAULT_W,
                                     n_samples=n_samples)
    else:
        raise ValueError(f"unknown schema {schema!r}")
    encode_ms = 1000.0 * (time.perf_counter() - t0)

    bits = bitstream.total_bits(messages)

    t0 = time.perf_counter()
    _, wire_messages, meta = bitstream.unpack_stream(blob, expect_schema=schema)
    if schema == "inlc":
        recon = inlc.inlc_decompress(wire_messages, meta["cfg"], fs=meta["fs"])
    elif schema == "od":
        recon = od.od_decompress(wire_messages, meta["codeword_len"])
    elif schema == "gsvq":
        recon = gsvq.gsvq_decompress(wire_messages, codebook)
    else:
        recon = pca.pca_decompress(wire_messages)
    decode_ms = 1000.0 * (time.perf_counter() - t0)

    # beat codecs drop nothing, but guard against detector edge effects
    if len(recon) != n_samples:
        raise RuntimeError(
            f"{schema}: reconstructed {len(recon)} of {n_samples} samples")

    report = distortion_report(x, recon, fs=rec.fs)
    cr = compression_ratio(n_samples * ORIGINAL_BITS_PER_SAMPLE, bits)
    row = {
        "record": rec.record_id,
        "schema": schema,
        "variant": variant,
        "param": float(param),
        "cr": cr,
        "prd": report.prd,
        "prdn": report.prdn,
        "rmse": report.rmse,
        "rmsep": report.rmsep,
        "snr": report.snr_db,
        "mae": report.mae,
        "cc": report.cc,
        "qs": quality_score(cr, report.prd),
        "encode_ms": encode_ms,
        "decode_ms": decode_ms,
    }
    return row


def _average_rows(rows: list[dict]) -> list[dict]:
    """One corpus-average row per (schema, variant, param)."""
    keys = sorted({(r["schema"], r["variant"], r["param"]) for r in rows})
    averaged = []
    for schema, variant, param in keys:
        group = [r for r in rows
                 if (r["schema"], r["variant"], r["param"]) == (schema, variant, param)]
        avg = {"record": AVERAGE_LABEL, "schema": schema, "variant": variant,
               "param": param}
        for col in CSV_COLUMNS[4:] + TIMING_COLUMNS:
            values = [r[col] for r in group]
            if any(v is None or (isinstance(v, float) and not math.isfinite(v))
                   for v in values):
                avg[col] = None
            else:
                avg[col] = float(np.mean(values))
        averaged.append(avg)
    return averaged


def _cell_worker(args):
    rec, schema, param, options, codebook = args
    return run_cell(rec, schema, param, options, codebook)


def run_sweep(records: list[EcgRecord], schema: str, params,
              options: dict | None = None,
              codebook: gsvq.GsvqCodebook | None = None,
              jobs: int = 1) -> list[dict]:
    """Per-record rows for every (record, param) cell plus average rows.

    Output order is deterministic: sorted by (record, param), averages
    last.
    """
    cells = [(rec, schema, float(p), options or {}, codebook)
             for rec in records for p in params]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_cell_worker, cells))
    else:
        rows = [_cell_worker(c) for c in cells]
    rows.sort(key=lambda r: (r["record"], r["schema"], r["variant"], r["param"]))
    return rows + _average_rows(rows)


VARIANT_MATRIX = [
    {"distance": d, "bank_policy": b, "offset_mode": o}
    for d in ("v1", "v2") for b in ("static", "continuous") for o in ("go", "oo")
]


def run_variant_matrix(records: list[EcgRecord], eps_set,
                       jobs: int = 1) -> list[dict]:
    """All eight labeled codec variants over the given threshold set."""
    rows = []
    for options in VARIANT_MATRIX:
        rows.extend(run_sweep(records, "inlc", eps_set, options, jobs=jobs))
    return rows


def run_monotonicity_probe(rec: EcgRecord, n_trials: int, distance: str = "v1",
                           window: int = 1024, l_min: int = 10,
                           seed: int = 0, tolerance: float = 1.0) -> dict:
    """Empirical monotonicity of the distance along fragment length.

    Draws random (bank window, buffer window, start index) triples and
    counts steps where the distance at length l+1 drops more than the
    tolerance below the distance at length l.
    """
    x = rec.samples
    if len(x) < 2 * window:
        raise ValueError(f"record too short: need {2 * window} samples")
    rng = np.random.default_rng(seed)
    use_v2 = distance == "v2"
    steps = 0
    violations = 0
    max_violation = 0.0
    for _ in range(n_trials):
        a = int(rng.integers(0, len(x) - window + 1))
        b = int(rng.integers(0, len(x) - window + 1))
        i = int(rng.integers(0, window - l_min))
        max_len = window - i
        profile = prefix_profile(x[a + i : a + i + max_len], x[b : b + max_len], use_v2)
        d = profile[l_min - 1 :]
        if use_v2:
            finite = np.isfinite(d)
            d = d[: int(np.argmin(finite))] if not finite.all() else d
        if len(d) < 2:
            continue
        drops = d[:-1] - d[1:]  # positive where the distance decreased
        steps += len(drops)
        bad = drops > tolerance
        violations += int(bad.sum())
        if bad.any():
            max_violation = max(max_violation, float(drops[bad].max()))
    return {
        "record": rec.record_id,
        "distance": distance,
        "trials": n_trials,
        "steps": steps,
        "violations": violations,
        "violation_fraction": violations / steps if steps else 0.0,
        "max_violation": max_violation,
    }


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return f"{value:.6g}"
    return str(value)


def rows_to_csv(rows: list[dict], timing: bool = False) -> str:
    """Fixed-order CSV text; floats at 6 significant digits."""
    columns = CSV_COLUMNS + (TIMING_COLUMNS if timing else [])
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(c)) for c in columns))
    return "\n".join(lines) + "\n"
