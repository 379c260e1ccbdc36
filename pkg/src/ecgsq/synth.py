"""Deterministic synthetic ECG records.

Quasi-periodic PQRST trains built from per-beat Gaussian bumps with
seeded RR-interval jitter, beat-to-beat amplitude modulation, slow
baseline wander, and additive noise.  Wave timing follows physiology:
P/Q/S/T positions and widths are fixed time offsets from the R peak
rather than fractions of the beat, so the QT interval stays roughly
constant while RR varies, and each wave's amplitude is jittered
independently per beat.  Output is integer ADC units in the 12-bit
range so records round-trip through WFDB format 212.

Used to build the desk-scale benchmark corpus when the real MIT-BIH
files are not on disk; record ids follow the same naming so sweep
configurations are interchangeable.
"""

from __future__ import annotations

import os
import zlib

import numpy as np

from .records import EcgRecord, write_wfdb_record

__all__ = ["make_synthetic_record", "write_synthetic_corpus", "DEFAULT_RECORD_IDS"]

DEFAULT_RECORD_IDS = ("100", "101", "119")

# (offset from R peak [s], width [s], amplitude relative to R,
#  per-beat amplitude jitter sd)
_WAVES = (
    (-0.150, 0.028, 0.12, 0.02),    # P
    (-0.014, 0.005, -0.14, 0.01),   # Q
    (0.0, 0.0055, 1.0, 0.0),        # R (jittered via the global beat gain)
    (0.016, 0.0055, -0.28, 0.01),   # S
    (0.270, 0.048, 0.30, 0.008),    # T
)

_WIDTH_JITTER = 0.008

# rsa_amp/rsa_beats: respiratory sinus arrhythmia, a deterministic RR
# modulation with a period of a few beats
_PROFILES = {
    "100": {"hr_bpm": 100.0, "r_amp": 270.0, "noise_sd": 0.30, "rr_jitter": 0.007,
            "amp_jitter": 0.006, "wander_amp": 1.5, "t_scale": 1.0,
            "rsa_amp": 0.23, "rsa_beats": 4.25},
    "101": {"hr_bpm": 90.0, "r_amp": 245.0, "noise_sd": 0.35, "rr_jitter": 0.012,
            "amp_jitter": 0.007, "wander_amp": 2.0, "t_scale": 1.15,
            "rsa_amp": 0.20, "rsa_beats": 3.8},
    "119": {"hr_bpm": 113.0, "r_amp": 300.0, "noise_sd": 0.28, "rr_jitter": 0.010,
            "amp_jitter": 0.005, "wander_amp": 1.8, "t_scale": 0.85,
            "rsa_amp": 0.25, "rsa_beats": 4.6},
}

_FALLBACK = _PROFILES["100"]


def _beat(n: int, fs: float, r_pos_s: float, amp: float, t_scale: float,
          rng: np.random.Generator) -> np.ndarray:
    """One beat of n samples with the R peak at r_pos_s seconds."""
    t = np.arange(n) / fs - r_pos_s
    wave = np.zeros(n)
    for idx, (center, width, rel_amp, jitter_sd) in enumerate(_WAVES):
        if idx == len(_WAVES) - 1:
            rel_amp *= t_scale  # T-wave amplitude varies per profile
        a = rel_amp * (1.0 + jitter_sd * rng.standard_normal())
        w = width * (1.0 + _WIDTH_JITTER * rng.standard_normal())
        wave += a * np.exp(-((t - center) ** 2) / (2 * w**2))
    return amp * wave


def make_synthetic_record(record_id: str, duration_s: float = 70.0,
                          fs: float = 360.0):
    """Build one record; returns (EcgRecord, true R-peak indices)."""
    profile = _PROFILES.get(record_id, _FALLBACK)
    seed = zlib.crc32(record_id.encode())
    rng = np.random.default_rng(seed)

    n_total = int(round(duration_s * fs))
    rr_base = 60.0 / profile["hr_bpm"]
    beats = []
    rpeaks = []
    pos = 0
    k = 0
    while pos < n_total + int(2 * rr_base * fs):
        rr = rr_base * (1.0
                        + profile["rsa_amp"] * np.sin(2 * np.pi * k / profile["rsa_beats"])
                        + profile["rr_jitter"] * rng.standard_normal())
        n_beat = max(int(round(rr * fs)), int(0.4 * fs))
        amp = profile["r_amp"] * (1.0 + profile["amp_jitter"] * rng.standard_normal())
        r_pos_s = 0.33 * rr_base  # fixed PR timing; RR jitter stretches diastole
        beats.append(_beat(n_beat, fs, r_pos_s, amp, profile["t_scale"], rng))
        rpeaks.append(pos + int(round(r_pos_s * fs)))
        pos += n_beat
        k += 1
    signal = np.concatenate(beats)[:n_total]

    t = np.arange(n_total) / fs
    wander = (profile["wander_amp"] * np.sin(2 * np.pi * 0.25 * t)
              + 0.4 * profile["wander_amp"] * np.sin(2 * np.pi * 0.09 * t + 1.3))
    noise = profile["noise_sd"] * rng.standard_normal(n_total)
    samples = np.clip(np.rint(signal + wander + noise), -2048, 2047).astype(np.int64)

    rec = EcgRecord(samples=samples, fs=fs, adc_resolution_bits=11,
                    record_id=record_id, channel=0)
    true_peaks = np.array([p for p in rpeaks if p < n_total], dtype=np.int64)
    return rec, true_peaks


def write_synthetic_corpus(directory: str,
                           record_ids=DEFAULT_RECORD_IDS,
                           duration_s: float = 70.0,
                           fs: float = 360.0) -> list[str]:
    """Write format-212 records; returns the header paths."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for rid in record_ids:
        rec, _ = make_synthetic_record(rid, duration_s, fs)
        paths.append(write_wfdb_record(directory, rid, [rec.samples], fs,
                                       adc_resolution_bits=11))
    return paths
