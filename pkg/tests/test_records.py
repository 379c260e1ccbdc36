import numpy as np
import pytest

from ecgsq.records import (EcgRecord, RecordError, decode_212, encode_212,
                           load_csv_record, load_wfdb_record, slice_record,
                           write_wfdb_record)


def test_212_roundtrip_covers_sign_extremes():
    samples = np.array([0, 1, -1, 2047, -2048, 1234, -567, 42], dtype=np.int64)
    np.testing.assert_array_equal(decode_212(encode_212(samples)), samples)


def test_212_known_bytes():
    # s0 = 0x123, s1 = -1 (0xFFF): bytes 0x23, 0xF1, 0xFF
    raw = bytes([0x23, 0xF1, 0xFF])
    np.testing.assert_array_equal(decode_212(raw), [0x123, -1])
    assert encode_212(np.array([0x123, -1])) == raw


def test_212_odd_length_pads_with_zero():
    decoded = decode_212(encode_212(np.array([5, 6, 7])))
    np.testing.assert_array_equal(decoded, [5, 6, 7, 0])


def test_212_rejects_bad_input():
    with pytest.raises(RecordError):
        decode_212(b"\x00\x00")  # not a whole 3-byte group
    with pytest.raises(RecordError):
        encode_212(np.array([5000]))  # out of 12-bit range


def test_wfdb_write_read_roundtrip(tmp_path):
    ch0 = np.array([0, 100, -100, 512, -512, 7, 8, 9], dtype=np.int64)
    ch1 = -ch0
    hea = write_wfdb_record(str(tmp_path), "t1", [ch0, ch1], fs=360.0)
    rec0 = load_wfdb_record(hea, channel=0)
    rec1 = load_wfdb_record(hea, channel=1)
    np.testing.assert_array_equal(rec0.samples, ch0)
    np.testing.assert_array_equal(rec1.samples, ch1)
    assert rec0.fs == 360.0
    assert rec0.record_id == "t1"
    assert rec0.adc_resolution_bits == 11


def test_wfdb_header_sample_count_truncates_padding(tmp_path):
    ch = np.array([1, 2, 3], dtype=np.int64)  # odd length pads the .dat
    hea = write_wfdb_record(str(tmp_path), "t2", [ch], fs=250.0)
    rec = load_wfdb_record(hea)
    assert len(rec) == 3


def test_wfdb_missing_files(tmp_path):
    with pytest.raises(RecordError):
        load_wfdb_record(str(tmp_path / "nope.hea"))


def test_csv_record(tmp_path):
    path = tmp_path / "sig.csv"
    path.write_text("10\n-20\n30.4\n")
    rec = load_csv_record(str(path), fs=360.0)
    np.testing.assert_array_equal(rec.samples, [10, -20, 30])
    assert rec.record_id == "sig"
    with pytest.raises(RecordError):
        load_csv_record(str(tmp_path / "missing.csv"), fs=360.0)


def test_csv_rejects_garbage(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1\nfoo\n")
    with pytest.raises(RecordError):
        load_csv_record(str(path), fs=360.0)


def test_slice_record():
    rec = EcgRecord(samples=np.arange(1000), fs=100.0,
                    adc_resolution_bits=11, record_id="x")
    part = slice_record(rec, 1.0, 2.0)
    np.testing.assert_array_equal(part.samples, np.arange(100, 300))
    with pytest.raises(RecordError):
        slice_record(rec, 5.0, 6.0)


def test_record_validation():
    with pytest.raises(RecordError):
        EcgRecord(samples=np.array([]), fs=360.0,
                  adc_resolution_bits=11, record_id="x")
    with pytest.raises(RecordError):
        EcgRecord(samples=np.array([40000]), fs=360.0,
                  adc_resolution_bits=11, record_id="x")
    with pytest.raises(RecordError):
        EcgRecord(samples=np.array([1]), fs=0.0,
                  adc_resolution_bits=11, record_id="x")
