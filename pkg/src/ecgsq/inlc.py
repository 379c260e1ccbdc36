"""Streaming fragment-matching codec over a bank/buffer pair.

The compressor keeps a bank of previously transmitted samples and a
buffer of pending ones.  Each cycle it either transmits the first
l_min buffered samples verbatim (no similar bank fragment exists) or
finds the longest buffer prefix that some bank fragment approximates
within a distance threshold, and transmits only the bank start index,
the length, and affine fit parameters.

Both sides append the *reconstructed* fragment (fit parameters
already rounded to half precision) to their banks, so the receiver
bank tracks the sender bank sample for sample by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distance import fit_affine, mean_offset, scan_v1, scan_v2, score_candidates
from .errors import CorruptStreamError

__all__ = [
    "InlcConfig",
    "Direct",
    "Match",
    "find_longest_match",
    "InlcCompressor",
    "InlcDecompressor",
    "inlc_compress",
    "inlc_decompress",
]

BANK_POLICIES = ("static", "continuous", "periodic")
DISTANCES = ("v1", "v2")
OFFSET_MODES = ("go", "oo")


@dataclass(frozen=True)
class InlcConfig:
    eps: float
    s_b: int = 1024
    s_f: int = 1024
    l_min: int = 10
    l_max: int = 1024
    distance: str = "v1"
    bank_policy: str = "static"
    periodic_interval_s: float = 60.0
    offset_mode: str = "go"

    def __post_init__(self):
        if not (1 <= self.l_min <= self.l_max <= self.s_f <= self.s_b):
            raise ValueError("need l_min <= l_max <= s_f <= s_b")
        if self.eps < 0:
            raise ValueError("eps must be >= 0")
        if self.distance not in DISTANCES:
            raise ValueError(f"unknown distance {self.distance!r}")
        if self.bank_policy not in BANK_POLICIES:
            raise ValueError(f"unknown bank policy {self.bank_policy!r}")
        if self.offset_mode not in OFFSET_MODES:
            raise ValueError(f"unknown offset mode {self.offset_mode!r}")
        if self.bank_policy == "periodic" and self.periodic_interval_s <= 0:
            raise ValueError("periodic interval must be positive")

    @property
    def variant_label(self) -> str:
        dist = "ODF" if self.distance == "v1" else "NDF"
        bank = {"static": "NP", "continuous": "UP", "periodic": "PP"}[self.bank_policy]
        params = "GO" if self.offset_mode == "go" else "OO"
        return f"{dist}-{bank}-{params}"


@dataclass(frozen=True)
class Direct:
    samples: np.ndarray


@dataclass(frozen=True)
class Match:
    index: int
    length: int
    gain: float | None  # None in offset-only mode (unity assumed)
    offset: float


def _local_minima(d: np.ndarray) -> np.ndarray:
    # strict on the left, weak on the right: the leftmost element of a
    # plateau wins; boundary indices compare one-sided
    n = len(d)
    left = np.ones(n, dtype=bool)
    right = np.ones(n, dtype=bool)
    if n > 1:
        left[1:] = d[1:] < d[:-1]
        right[:-1] = d[:-1] <= d[1:]
    return left & right


def _find(bank: np.ndarray, buffer: np.ndarray, cfg: InlcConfig):
    """Returns ((i*, l*, d*), peak_candidate_count) or (None, 0)."""
    if len(bank) < cfg.l_min or len(buffer) < cfg.l_min:
        return None, 0
    use_v2 = cfg.distance == "v2"
    frag = buffer[: cfg.l_min]
    d = scan_v2(bank, frag) if use_v2 else scan_v1(bank, frag)
    mask = _local_minima(d) & (d <= cfg.eps)
    cand = np.flatnonzero(mask)
    if cand.size == 0:
        return None, 0
    peak = int(cand.size)

    lo = cfg.l_min
    hi = min(cfg.l_max, len(buffer), len(bank)) + 1  # exclusive upper bound
    while hi - lo > 1:
        mid = (lo + hi) // 2
        valid = cand[cand + mid <= len(bank)]
        if valid.size:
            dd = score_candidates(bank, buffer[:mid], valid, use_v2)
            surv = dd <= cfg.eps
        else:
            surv = np.array([], dtype=bool)
        if surv.any():
            lo = mid
            cand = valid[surv]
        else:
            hi = mid

    # settle: re-score the survivors at the final accepted length
    cand = cand[cand + lo <= len(bank)]
    if cand.size == 0:
        return None, peak
    dd = score_candidates(bank, buffer[:lo], cand, use_v2)
    keep = dd <= cfg.eps
    if not keep.any():
        return None, peak
    cand, dd = cand[keep], dd[keep]
    best = int(np.argmin(dd))  # ties: argmin picks the smallest start index
    return (int(cand[best]), lo, float(dd[best])), peak


def find_longest_match(bank, buffer, cfg: InlcConfig):
    """Longest matchable buffer prefix, or None.

    Returns (start_index, length, distance) of the best bank fragment.
    """
    result, _ = _find(np.asarray(bank, dtype=np.int64),
                      np.asarray(buffer, dtype=np.int64), cfg)
    return result


def _quant_f16(value: float) -> float:
    v = float(np.float16(value))
    if math.isinf(v):  # half precision saturates at +-65504
        v = math.copysign(65504.0, value)
    return v


def _reconstruct(bank_frag: np.ndarray, gain: float | None, offset: float) -> np.ndarray:
    g = 1.0 if gain is None else gain
    rec = np.rint(g * bank_frag.astype(np.float64) + offset)
    return np.clip(rec, -32768, 32767).astype(np.int64)


class _BankMixin:
    cfg: InlcConfig
    fs: float | None

    def _bank_init(self):
        self._bank = np.array([], dtype=np.int64)
        self._clock = 0  # samples processed, drives periodic re-initialization
        self._epoch = 0
        self.peak_bank = 0

    def _bank_tick(self):
        if self.cfg.bank_policy != "periodic":
            return
        if self.fs is None:
            raise ValueError("periodic bank policy requires the sampling rate")
        epoch = int(self._clock // int(round(self.cfg.periodic_interval_s * self.fs)))
        if epoch != self._epoch:
            self._bank = np.array([], dtype=np.int64)
            self._epoch = epoch

    def _bank_append(self, samples: np.ndarray):
        if self.cfg.bank_policy == "continuous":
            self._bank = np.concatenate([self._bank, samples])[-self.cfg.s_b:]
        else:
            room = self.cfg.s_b - len(self._bank)
            if room > 0:
                self._bank = np.concatenate([self._bank, samples[:room]])
        self.peak_bank = max(self.peak_bank, len(self._bank))

    @property
    def bank(self) -> np.ndarray:
        return self._bank.copy()


class InlcCompressor(_BankMixin):
    """Single-stream stateful compressor; feed chunks, then flush."""

    def __init__(self, cfg: InlcConfig, fs: float | None = None):
        self.cfg = cfg
        self.fs = fs
        self._bank_init()
        self._buf = np.array([], dtype=np.int64)
        self.peak_buffer = 0
        self.peak_candidates = 0

    def push(self, samples) -> list[Direct | Match]:
        chunk = np.asarray(samples, dtype=np.int64)
        self._buf = np.concatenate([self._buf, chunk])
        self.peak_buffer = max(self.peak_buffer, len(self._buf))
        out = []
        while len(self._buf) >= self.cfg.s_f:
            out.append(self._emit_one())
        return out

    def flush(self) -> list[Direct | Match]:
        out = []
        while len(self._buf) > 0:
            out.append(self._emit_one())
        return out

    def _emit_one(self):
        cfg = self.cfg
        self._bank_tick()
        if len(self._buf) < cfg.l_min:
            # end-of-stream leftovers go out as one short direct message
            return self._emit_direct(len(self._buf))
        result, n_cand = _find(self._bank, self._buf, cfg)
        self.peak_candidates = max(self.peak_candidates, n_cand)
        if result is None:
            return self._emit_direct(cfg.l_min)
        i, l, _ = result
        bank_frag = self._bank[i : i + l]
        frag = self._buf[:l]
        if cfg.offset_mode == "go":
            fit = fit_affine(bank_frag, frag)
            gain = _quant_f16(fit.gain)
            offset = _quant_f16(fit.offset)
        else:
            gain = None
            offset = _quant_f16(mean_offset(bank_frag, frag))
        self._bank_append(_reconstruct(bank_frag, gain, offset))
        self._pop(l)
        return Match(index=i, length=l, gain=gain, offset=offset)

    def _emit_direct(self, count: int):
        frag = self._buf[:count]
        self._bank_append(frag)
        self._pop(count)
        return Direct(samples=frag)

    def _pop(self, count: int):
        self._buf = self._buf[count:]
        self._clock += count


class InlcDecompressor(_BankMixin):
    def __init__(self, cfg: InlcConfig, fs: float | None = None):
        self.cfg = cfg
        self.fs = fs
        self._bank_init()

    def feed(self, message) -> np.ndarray:
        """Reconstruct one message worth of samples."""
        self._bank_tick()
        if isinstance(message, Direct):
            rec = np.asarray(message.samples, dtype=np.int64)
        else:
            if message.index + message.length > len(self._bank):
                raise CorruptStreamError(
                    f"match ({message.index}, {message.length}) exceeds bank "
                    f"of {len(self._bank)} samples"
                )
            frag = self._bank[message.index : message.index + message.length]
            rec = _reconstruct(frag, message.gain, message.offset)
        self._bank_append(rec)
        self._clock += len(rec)
        return rec


def inlc_compress(samples, cfg: InlcConfig, fs: float | None = None):
    comp = InlcCompressor(cfg, fs=fs)
    messages = comp.push(samples)
    messages += comp.flush()
    return messages


def inlc_decompress(messages, cfg: InlcConfig, fs: float | None = None) -> np.ndarray:
    decomp = InlcDecompressor(cfg, fs=fs)
    parts = [decomp.feed(m) for m in messages]
    if not parts:
        return np.array([], dtype=np.int64)
    return np.concatenate(parts)
