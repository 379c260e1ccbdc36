"""Loading and slicing of single-channel ECG records.

Two input formats are supported: WFDB format-212 (the MIT-BIH native
layout: two 12-bit two's-complement samples packed into 3 bytes) and
plain single-column CSV.  Samples are kept as raw integer ADC units
end to end; no gain/baseline correction from the header is applied.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "EcgRecord",
    "RecordError",
    "load_wfdb_record",
    "load_csv_record",
    "slice_record",
    "write_wfdb_record",
    "decode_212",
    "encode_212",
]


class RecordError(ValueError):
    """Raised for malformed or unsupported record files."""


@dataclass(frozen=True)
class EcgRecord:
    """A sampled single-channel ECG signal in raw ADC units."""

    samples: np.ndarray  # int, 16-bit container
    fs: float            # Hz
    adc_resolution_bits: int
    record_id: str
    channel: int = 0

    def __post_init__(self):
        if self.fs <= 0:
            raise RecordError(f"sampling rate must be positive, got {self.fs}")
        samples = np.asarray(self.samples, dtype=np.int64)
        if samples.size == 0:
            raise RecordError("record has no samples")
        lo, hi = int(samples.min()), int(samples.max())
        if lo < -32768 or hi > 32767:
            raise RecordError("samples exceed the 16-bit container")
        object.__setattr__(self, "samples", samples)

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.fs

    def __len__(self) -> int:
        return len(self.samples)


def decode_212(raw: bytes, n_samples: int | None = None) -> np.ndarray:
    """Unpack format-212 bytes into a flat array of 12-bit signed samples.

    Layout per 3-byte group: byte0 = low 8 bits of s0, byte1 low nibble =
    high 4 bits of s0, byte1 high nibble = high 4 bits of s1, byte2 =
    low 8 bits of s1.  Multi-channel records interleave channels in
    sample order; de-interleaving is the caller's job.
    """
    if len(raw) % 3 != 0:
        raise RecordError(
            f"truncated signal: {len(raw)} bytes is not a whole number of 3-byte groups"
        )
    if len(raw) == 0:
        raise RecordError("truncated signal: empty signal file")
    b = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 3).astype(np.int64)
    s0 = ((b[:, 1] & 0x0F) << 8) | b[:, 0]
    s1 = ((b[:, 1] & 0xF0) << 4) | b[:, 2]
    flat = np.empty(2 * len(b), dtype=np.int64)
    flat[0::2] = s0
    flat[1::2] = s1
    flat[flat >= 2048] -= 4096  # 12-bit sign extension
    if n_samples is not None:
        if n_samples > len(flat):
            raise RecordError("truncated signal: fewer samples than header declares")
        flat = flat[:n_samples]
    return flat


def encode_212(samples: np.ndarray) -> bytes:
    """Pack a flat sample array into format-212 bytes (inverse of decode_212).

    Odd-length input is padded with a zero sample, as WFDB writers do.
    """
    s = np.asarray(samples, dtype=np.int64)
    if s.size % 2 != 0:
        s = np.append(s, 0)
    if s.size and (s.min() < -2048 or s.max() > 2047):
        raise RecordError("sample out of 12-bit range for format 212")
    u = np.where(s < 0, s + 4096, s)
    s0, s1 = u[0::2], u[1::2]
    out = np.empty((len(s0), 3), dtype=np.uint8)
    out[:, 0] = s0 & 0xFF
    out[:, 1] = ((s0 >> 8) & 0x0F) | (((s1 >> 8) & 0x0F) << 4)
    out[:, 2] = s1 & 0xFF
    return out.tobytes()


def _parse_header(header_path: str):
    with open(header_path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise RecordError(f"empty header file: {header_path}")
    rec_fields = lines[0].split()
    if len(rec_fields) < 3:
        raise RecordError(f"malformed record line: {lines[0]!r}")
    name = rec_fields[0].split("/")[0]
    n_channels = int(rec_fields[1])
    fs = float(rec_fields[2])
    n_samples = int(rec_fields[3]) if len(rec_fields) > 3 else None
    signals = []
    for ln in lines[1 : 1 + n_channels]:
        f = ln.split()
        if len(f) < 2:
            raise RecordError(f"malformed signal line: {ln!r}")
        fmt = int(f[1].split("x")[0].split(":")[0].split("+")[0])
        adc_res = int(f[3]) if len(f) > 3 else 12
        signals.append({"file": f[0], "format": fmt, "adc_res": adc_res})
    if len(signals) != n_channels:
        raise RecordError(f"header declares {n_channels} channels, found {len(signals)}")
    return name, n_channels, fs, n_samples, signals


def load_wfdb_record(header_path: str, channel: int = 0) -> EcgRecord:
    """Load one channel (default 0) of a WFDB format-212 record."""
    if not os.path.exists(header_path):
        raise RecordError(f"missing header file: {header_path}")
    name, n_channels, fs, n_samples, signals = _parse_header(header_path)
    if not (0 <= channel < n_channels):
        raise RecordError(f"channel {channel} out of range for {n_channels}-channel record")
    sig = signals[channel]
    if sig["format"] != 212:
        raise RecordError(f"unsupported WFDB signal format {sig['format']} (only 212)")
    dat_path = os.path.join(os.path.dirname(header_path), sig["file"])
    if not os.path.exists(dat_path):
        raise RecordError(f"missing signal file: {dat_path}")
    with open(dat_path, "rb") as fh:
        raw = fh.read()
    total = n_channels * n_samples if n_samples is not None else None
    flat = decode_212(raw, total)
    samples = flat[channel::n_channels]
    return EcgRecord(
        samples=samples,
        fs=fs,
        adc_resolution_bits=sig["adc_res"],
        record_id=name,
        channel=channel,
    )


def write_wfdb_record(
    directory: str,
    record_id: str,
    channels: list[np.ndarray],
    fs: float,
    adc_resolution_bits: int = 11,
) -> str:
    """Write a format-212 record (.hea + .dat); returns the header path.

    All channels must have equal length.  Used for fixtures and the
    synthetic corpus; the layout round-trips through load_wfdb_record.
    """
    n = len(channels[0])
    if any(len(c) != n for c in channels):
        raise RecordError("all channels must have the same length")
    flat = np.empty(n * len(channels), dtype=np.int64)
    for k, c in enumerate(channels):
        flat[k :: len(channels)] = np.asarray(c, dtype=np.int64)
    hea_path = os.path.join(directory, f"{record_id}.hea")
    dat_name = f"{record_id}.dat"
    fs_txt = f"{fs:g}"
    with open(hea_path, "w", encoding="utf-8") as fh:
        fh.write(f"{record_id} {len(channels)} {fs_txt} {n}\n")
        for _ in channels:
            fh.write(f"{dat_name} 212 200 {adc_resolution_bits} 0 0 0 0 ECG\n")
    with open(os.path.join(directory, dat_name), "wb") as fh:
        fh.write(encode_212(flat))
    return hea_path


def load_csv_record(
    path: str,
    fs: float,
    record_id: str | None = None,
    column: int = 0,
    skip_header: bool = False,
) -> EcgRecord:
    """Load a newline-delimited CSV of integer samples."""
    if not os.path.exists(path):
        raise RecordError(f"missing file: {path}")
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if skip_header and lineno == 1:
                continue
            line = line.strip()
            if not line:
                continue
            field = line.split(",")[column] if "," in line else line
            try:
                values.append(int(round(float(field))))
            except ValueError:
                raise RecordError(f"non-numeric value {field!r} at row {lineno}") from None
    if not values:
        raise RecordError(f"no samples in {path}")
    rid = record_id if record_id is not None else os.path.splitext(os.path.basename(path))[0]
    return EcgRecord(samples=np.array(values), fs=fs, adc_resolution_bits=16, record_id=rid)


def slice_record(rec: EcgRecord, start_s: float, dur_s: float) -> EcgRecord:
    """Return floor(dur_s*fs) samples beginning at floor(start_s*fs)."""
    if start_s < 0 or dur_s < 0:
        raise RecordError("negative start or duration")
    start = int(start_s * rec.fs)
    count = int(dur_s * rec.fs)
    if start + count > len(rec.samples):
        raise RecordError(
            f"slice [{start_s}s, {start_s + dur_s}s) exceeds record duration {rec.duration_s:.3f}s"
        )
    return replace(rec, samples=rec.samples[start : start + count])
