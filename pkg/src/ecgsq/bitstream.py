"""Bit-exact serialization of compressed message streams.

Fields are packed MSB-first at fixed widths: codec parameters as
noted per schema, scalars as 16-bit half-precision floats, and the
stream padded with zeros to a byte boundary.  A serialized stream is
magic + schema id + version + config block + message bits + CRC32.

Compression ratios are computed from total_bits (pure per-field
accounting, before byte padding), not serialized file sizes.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

from . import gsvq, inlc, od, pca
from .errors import CorruptStreamError

__all__ = [
    "BitWriter",
    "BitReader",
    "f16_round",
    "total_bits",
    "pack_stream",
    "unpack_stream",
    "save_codebook",
    "load_codebook",
]

MAGIC = b"ESQ1"
VERSION = 1
SCHEMA_IDS = {"inlc": 1, "od": 2, "gsvq": 3, "pca": 4}
_SCHEMA_BY_ID = {v: k for k, v in SCHEMA_IDS.items()}

F16_MAX = 65504.0


def f16_round(value: float) -> float:
    """Round-to-nearest-even half precision; saturates at +-65504."""
    with np.errstate(over="ignore"):
        v = float(np.float16(value))
    if v in (float("inf"), float("-inf")):
        return F16_MAX if value > 0 else -F16_MAX
    return v


def _f16_bits(value: float) -> int:
    v = np.float16(value)
    if np.isinf(v):
        v = np.float16(F16_MAX if value > 0 else -F16_MAX)
    return int(v.view(np.uint16))


def _bits_f16(bits: int) -> float:
    return float(np.uint16(bits).view(np.float16))


class BitWriter:
    """Append-only MSB-first bit buffer."""

    def __init__(self):
        self._bytes = bytearray()
        self._acc = 0
        self._nbits = 0  # bits pending in the accumulator

    def write_uint(self, value: int, width: int) -> None:
        if not (1 <= width <= 32):
            raise ValueError(f"width must be 1..32, got {width}")
        if not (0 <= value < (1 << width)):
            raise ValueError(f"value {value} does not fit in {width} bits")
        self._acc = (self._acc << width) | value
        self._nbits += width
        while self._nbits >= 8:
            self._nbits -= 8
            self._bytes.append((self._acc >> self._nbits) & 0xFF)
        self._acc &= (1 << self._nbits) - 1

    def write_int(self, value: int, width: int) -> None:
        half = 1 << (width - 1)
        if not (-half <= value < half):
            raise ValueError(f"value {value} does not fit in signed {width} bits")
        self.write_uint(value + half, width)

    def write_f16(self, value: float) -> None:
        self.write_uint(_f16_bits(value), 16)

    def write_f32(self, value: float) -> None:
        self.write_uint(struct.unpack(">I", struct.pack(">f", value))[0], 32)

    @property
    def bit_length(self) -> int:
        return 8 * len(self._bytes) + self._nbits

    def getvalue(self) -> bytes:
        """Byte string with zero padding to the byte boundary."""
        out = bytearray(self._bytes)
        if self._nbits:
            out.append((self._acc << (8 - self._nbits)) & 0xFF)
        return bytes(out)


class BitReader:
    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0  # bit cursor

    def read_uint(self, width: int) -> int:
        if not (1 <= width <= 32):
            raise ValueError(f"width must be 1..32, got {width}")
        if self._pos + width > 8 * len(self._data):
            raise CorruptStreamError("bitstream exhausted")
        value = 0
        pos = self._pos
        remaining = width
        while remaining:
            byte = self._data[pos // 8]
            avail = 8 - pos % 8
            take = min(avail, remaining)
            chunk = (byte >> (avail - take)) & ((1 << take) - 1)
            value = (value << take) | chunk
            pos += take
            remaining -= take
        self._pos = pos
        return value

    def read_int(self, width: int) -> int:
        return self.read_uint(width) - (1 << (width - 1))

    def read_f16(self) -> float:
        return _bits_f16(self.read_uint(16))

    def read_f32(self) -> float:
        return struct.unpack(">f", struct.pack(">I", self.read_uint(32)))[0]


# ---------------------------------------------------------------------------
# field accounting (Eq.-3 denominator): tag bits included, padding excluded

INLC_INDEX_BITS = 10
INLC_LENGTH_BITS = 10
SAMPLE_BITS = 16
SEG_LEN_BITS = 9
GSVQ_COUNT_BITS = 9
GSVQ_DIST_BITS = 4
GSVQ_VALUE_BITS = 11
PCA_K_BITS = 6
PCA_ROWS_BITS = 6


def _od_index_width(codebook_size: int) -> int:
    # the wire index widens as the runtime codebook grows; both sides
    # track the size, so the width is implicit
    if codebook_size <= 64:
        return 6
    if codebook_size <= 256:
        return 8
    if codebook_size <= 1024:
        return 10
    return 16


def _inlc_message_bits(msg) -> int:
    if isinstance(msg, inlc.Direct):
        return 1 + SAMPLE_BITS * len(msg.samples)
    bits = 1 + INLC_INDEX_BITS + INLC_LENGTH_BITS + 16
    if msg.gain is not None:
        bits += 16
    return bits


def total_bits(messages, codeword_len: int = od.DEFAULT_W) -> int:
    """Exact compressed size in bits of a message sequence.

    Works for any one schema's messages; OD index widths are resolved
    by replaying codebook growth across the sequence.
    """
    bits = 0
    od_size = 0
    for msg in messages:
        if isinstance(msg, (inlc.Direct, inlc.Match)):
            bits += _inlc_message_bits(msg)
        elif isinstance(msg, od.OdKnown):
            bits += 1 + _od_index_width(od_size) + SEG_LEN_BITS + 16 + 16
        elif isinstance(msg, od.OdNew):
            od_size += 1
            bits += (1 + _od_index_width(od_size) + SEG_LEN_BITS + 16 + 16
                     + 16 * len(msg.codeword))
        elif isinstance(msg, gsvq.GsvqMessage):
            bits += (6 + SEG_LEN_BITS + 16 + GSVQ_COUNT_BITS
                     + (GSVQ_DIST_BITS + GSVQ_VALUE_BITS) * len(msg.residuals.points))
        elif isinstance(msg, pca.PcaChunk):
            n_rows, k = msg.scores.shape
            w = len(msg.mu)
            bits += (PCA_K_BITS + PCA_ROWS_BITS
                     + n_rows * (SEG_LEN_BITS + 16 + 16)
                     + 16 * (w + w * k + n_rows * k))
        else:
            raise TypeError(f"unknown message type {type(msg).__name__}")
    return bits


# ---------------------------------------------------------------------------
# stream containers


def _write_header(schema: str) -> BitWriter:
    w = BitWriter()
    for b in MAGIC:
        w.write_uint(b, 8)
    w.write_uint(SCHEMA_IDS[schema], 8)
    w.write_uint(VERSION, 8)
    return w


def _finish(w: BitWriter) -> bytes:
    payload = w.getvalue()
    return payload + struct.pack(">I", zlib.crc32(payload[6:]))


def _open_reader(data: bytes, expect_schema: str | None = None):
    if len(data) < 10 or data[:4] != MAGIC:
        raise CorruptStreamError("bad magic")
    payload, crc = data[:-4], struct.unpack(">I", data[-4:])[0]
    if zlib.crc32(payload[6:]) != crc:
        raise CorruptStreamError("CRC mismatch")
    schema_id = data[4]
    if schema_id not in _SCHEMA_BY_ID:
        raise CorruptStreamError(f"unknown schema id {schema_id}")
    if data[5] != VERSION:
        raise CorruptStreamError(f"unsupported version {data[5]}")
    schema = _SCHEMA_BY_ID[schema_id]
    if expect_schema is not None and schema != expect_schema:
        raise CorruptStreamError(f"expected {expect_schema} stream, got {schema}")
    r = BitReader(payload)
    r.read_uint(32)  # magic
    r.read_uint(16)  # schema + version
    return schema, r


_DISTANCE_CODE = {"v1": 0, "v2": 1}
_POLICY_CODE = {"static": 0, "continuous": 1, "periodic": 2}


def _pack_inlc(messages, cfg: inlc.InlcConfig, fs: float, n_samples: int) -> bytes:
    w = _write_header("inlc")
    w.write_uint(cfg.s_b, 16)
    w.write_uint(cfg.s_f, 16)
    w.write_uint(cfg.l_min, 16)
    w.write_uint(cfg.l_max, 16)
    w.write_f32(cfg.eps)
    w.write_uint(_DISTANCE_CODE[cfg.distance], 8)
    w.write_uint(_POLICY_CODE[cfg.bank_policy], 8)
    w.write_f32(cfg.periodic_interval_s)
    w.write_uint(0 if cfg.offset_mode == "go" else 1, 8)
    w.write_f32(fs)
    w.write_uint(n_samples, 32)
    for msg in messages:
        if isinstance(msg, inlc.Direct):
            w.write_uint(0, 1)
            for s in msg.samples:
                w.write_int(int(s), SAMPLE_BITS)
        else:
            w.write_uint(1, 1)
            w.write_uint(msg.index, INLC_INDEX_BITS)
            w.write_uint(msg.length - 1, INLC_LENGTH_BITS)
            if cfg.offset_mode == "go":
                w.write_f16(msg.gain)
            w.write_f16(msg.offset)
    return _finish(w)


def _unpack_inlc(r: BitReader):
    cfg = inlc.InlcConfig(
        s_b=r.read_uint(16), s_f=r.read_uint(16),
        l_min=r.read_uint(16), l_max=r.read_uint(16),
        eps=r.read_f32(),
        distance={0: "v1", 1: "v2"}[r.read_uint(8)],
        bank_policy={0: "static", 1: "continuous", 2: "periodic"}[r.read_uint(8)],
        periodic_interval_s=r.read_f32(),
        offset_mode={0: "go", 1: "oo"}[r.read_uint(8)],
    )
    fs = r.read_f32()
    n_samples = r.read_uint(32)
    messages = []
    remaining = n_samples
    while remaining > 0:
        if r.read_uint(1) == 0:
            take = min(cfg.l_min, remaining)
            samples = np.array([r.read_int(SAMPLE_BITS) for _ in range(take)],
                               dtype=np.int64)
            messages.append(inlc.Direct(samples=samples))
            remaining -= take
        else:
            index = r.read_uint(INLC_INDEX_BITS)
            length = r.read_uint(INLC_LENGTH_BITS) + 1
            gain = r.read_f16() if cfg.offset_mode == "go" else None
            offset = r.read_f16()
            messages.append(inlc.Match(index=index, length=length,
                                       gain=gain, offset=offset))
            remaining -= length
    if remaining != 0:
        raise CorruptStreamError("messages overrun the declared sample count")
    return messages, {"cfg": cfg, "fs": fs, "n_samples": n_samples}


def _pack_od(messages, codeword_len: int, eps: float, n_samples: int) -> bytes:
    w = _write_header("od")
    w.write_uint(codeword_len, 16)
    w.write_f32(eps)
    w.write_uint(n_samples, 32)
    w.write_uint(len(messages), 32)
    size = 0
    for msg in messages:
        if isinstance(msg, od.OdNew):
            size += 1
            w.write_uint(1, 1)
            w.write_uint(msg.index, _od_index_width(size))
        else:
            w.write_uint(0, 1)
            w.write_uint(msg.index, _od_index_width(size))
        w.write_uint(msg.orig_len - 1, SEG_LEN_BITS)
        w.write_f16(msg.gain)
        w.write_f16(msg.offset)
        if isinstance(msg, od.OdNew):
            for v in msg.codeword:
                w.write_f16(float(v))
    return _finish(w)


def _unpack_od(r: BitReader):
    codeword_len = r.read_uint(16)
    eps = r.read_f32()
    n_samples = r.read_uint(32)
    n_messages = r.read_uint(32)
    messages = []
    size = 0
    for _ in range(n_messages):
        is_new = r.read_uint(1) == 1
        if is_new:
            size += 1
        index = r.read_uint(_od_index_width(size))
        orig_len = r.read_uint(SEG_LEN_BITS) + 1
        gain = r.read_f16()
        offset = r.read_f16()
        if is_new:
            codeword = np.array([r.read_f16() for _ in range(codeword_len)])
            messages.append(od.OdNew(codeword=codeword, index=index,
                                     orig_len=orig_len, gain=gain, offset=offset))
        else:
            messages.append(od.OdKnown(index=index, orig_len=orig_len,
                                       gain=gain, offset=offset))
    return messages, {"codeword_len": codeword_len, "eps": eps, "n_samples": n_samples}


def _pack_gsvq(messages, n: int, k: int, a_th: float, n_samples: int) -> bytes:
    w = _write_header("gsvq")
    w.write_uint(n, 16)
    w.write_uint(k, 16)
    w.write_f32(a_th)
    w.write_uint(n_samples, 32)
    w.write_uint(len(messages), 32)
    for msg in messages:
        w.write_uint(msg.index, 6)
        w.write_uint(msg.orig_len - 1, SEG_LEN_BITS)
        w.write_f16(msg.gain)
        w.write_uint(len(msg.residuals.points), GSVQ_COUNT_BITS)
        for dist, val in msg.residuals.points:
            w.write_uint(dist, GSVQ_DIST_BITS)
            w.write_int(val, GSVQ_VALUE_BITS)
    return _finish(w)


def _unpack_gsvq(r: BitReader):
    n = r.read_uint(16)
    k = r.read_uint(16)
    a_th = r.read_f32()
    n_samples = r.read_uint(32)
    n_messages = r.read_uint(32)
    messages = []
    for _ in range(n_messages):
        index = r.read_uint(6)
        orig_len = r.read_uint(SEG_LEN_BITS) + 1
        gain = r.read_f16()
        n_points = r.read_uint(GSVQ_COUNT_BITS)
        points = [(r.read_uint(GSVQ_DIST_BITS), r.read_int(GSVQ_VALUE_BITS))
                  for _ in range(n_points)]
        messages.append(gsvq.GsvqMessage(
            index=index, orig_len=orig_len, gain=gain,
            residuals=gsvq.ResidualStream(points=points, length=orig_len)))
    return messages, {"n": n, "k": k, "a_th": a_th, "n_samples": n_samples}


def _pack_pca(chunks, norm_len: int, n_samples: int) -> bytes:
    w = _write_header("pca")
    w.write_uint(norm_len, 16)
    w.write_uint(n_samples, 32)
    w.write_uint(len(chunks), 16)
    for chunk in chunks:
        n_rows, k = chunk.scores.shape
        w.write_uint(k, PCA_K_BITS)
        w.write_uint(n_rows, PCA_ROWS_BITS)
        for l in chunk.lens:
            w.write_uint(int(l) - 1, SEG_LEN_BITS)
        for v in chunk.mu:
            w.write_f16(float(v))
        for v in chunk.basis.ravel():
            w.write_f16(float(v))
        for v in chunk.scores.ravel():
            w.write_f16(float(v))
        for v in chunk.gains:
            w.write_f16(float(v))
        for v in chunk.offsets:
            w.write_f16(float(v))
    return _finish(w)


def _unpack_pca(r: BitReader):
    norm_len = r.read_uint(16)
    n_samples = r.read_uint(32)
    n_chunks = r.read_uint(16)
    chunks = []
    for _ in range(n_chunks):
        k = r.read_uint(PCA_K_BITS)
        n_rows = r.read_uint(PCA_ROWS_BITS)
        lens = np.array([r.read_uint(SEG_LEN_BITS) + 1 for _ in range(n_rows)])
        mu = np.array([r.read_f16() for _ in range(norm_len)])
        basis = np.array([r.read_f16() for _ in range(norm_len * k)]).reshape(norm_len, k)
        scores = np.array([r.read_f16() for _ in range(n_rows * k)]).reshape(n_rows, k)
        gains = np.array([r.read_f16() for _ in range(n_rows)])
        offsets = np.array([r.read_f16() for _ in range(n_rows)])
        chunks.append(pca.PcaChunk(mu=mu, basis=basis, scores=scores,
                                   lens=lens, gains=gains, offsets=offsets))
    return chunks, {"norm_len": norm_len, "n_samples": n_samples}


def pack_stream(schema: str, messages, **meta) -> bytes:
    """Serialize one record's message stream for the given schema.

    Required meta per schema -- inlc: cfg, fs, n_samples; od:
    codeword_len, eps, n_samples; gsvq: n, k, a_th, n_samples; pca:
    norm_len, n_samples.
    """
    if schema == "inlc":
        return _pack_inlc(messages, meta["cfg"], meta["fs"], meta["n_samples"])
    if schema == "od":
        return _pack_od(messages, meta["codeword_len"], meta["eps"], meta["n_samples"])
    if schema == "gsvq":
        return _pack_gsvq(messages, meta["n"], meta["k"], meta["a_th"], meta["n_samples"])
    if schema == "pca":
        return _pack_pca(messages, meta["norm_len"], meta["n_samples"])
    raise ValueError(f"unknown schema {schema!r}")


def unpack_stream(data: bytes, expect_schema: str | None = None):
    """Returns (schema, messages, meta)."""
    schema, r = _open_reader(data, expect_schema)
    unpacker = {"inlc": _unpack_inlc, "od": _unpack_od,
                "gsvq": _unpack_gsvq, "pca": _unpack_pca}[schema]
    messages, meta = unpacker(r)
    return schema, messages, meta


# ---------------------------------------------------------------------------
# codebook files

_CODEBOOK_MAGIC = b"ESQB"


def save_codebook(path: str, codebook: gsvq.GsvqCodebook) -> None:
    quantized = codebook.codewords.astype(np.float16)
    with open(path, "wb") as fh:
        fh.write(_CODEBOOK_MAGIC)
        fh.write(struct.pack(">BHH", VERSION, codebook.n, codebook.k))
        fh.write(quantized.astype(">f2").tobytes())


def load_codebook(path: str) -> gsvq.GsvqCodebook:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != _CODEBOOK_MAGIC:
        raise CorruptStreamError(f"not a codebook file: {path}")
    version, n, k = struct.unpack(">BHH", data[4:9])
    if version != VERSION:
        raise CorruptStreamError(f"unsupported codebook version {version}")
    body = np.frombuffer(data[9:], dtype=">f2")
    if body.size != n * k:
        raise CorruptStreamError("codebook payload size mismatch")
    return gsvq.GsvqCodebook(codewords=body.astype(np.float64).reshape(n, k))
