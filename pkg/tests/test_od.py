import numpy as np
import pytest

from ecgsq.errors import CorruptStreamError
from ecgsq.od import OdKnown, OdNew, od_compress, od_decompress, od_segments


def test_segments_cover_record(record_100):
    segs = od_segments(record_100)
    total = sum(len(s) for s in segs)
    assert total == len(record_100.samples)
    assert all(len(s) <= 512 for s in segs)


def test_first_message_is_new_codeword(record_100):
    messages, codebook = od_compress(record_100, eps=0.1)
    assert isinstance(messages[0], OdNew)
    assert messages[0].index == 0
    assert len(codebook) >= 1


def test_loose_threshold_reuses_codewords(record_100):
    messages, codebook = od_compress(record_100, eps=0.5)
    known = sum(isinstance(m, OdKnown) for m in messages)
    assert known > len(codebook)  # most beats hit the dictionary


def test_tight_threshold_grows_codebook(record_100):
    _, tight = od_compress(record_100, eps=0.01)
    _, loose = od_compress(record_100, eps=0.5)
    assert len(tight) > len(loose)


def test_roundtrip_length_preserved(record_100):
    messages, _ = od_compress(record_100, eps=0.2)
    recon = od_decompress(messages)
    assert len(recon) == len(record_100.samples)


def test_receiver_codebook_stays_synchronized(record_100):
    messages, sender_book = od_compress(record_100, eps=0.2)
    # replay the receiver side and compare the grown codebook
    receiver_book = []
    for msg in messages:
        if isinstance(msg, OdNew):
            receiver_book.append(msg.codeword)
    assert len(receiver_book) == len(sender_book)
    for a, b in zip(sender_book, receiver_book):
        np.testing.assert_array_equal(a, b)


def test_decompress_rejects_bad_indices():
    with pytest.raises(CorruptStreamError):
        od_decompress([OdKnown(index=3, orig_len=10, gain=1.0, offset=0.0)])
    with pytest.raises(CorruptStreamError):
        od_decompress([OdNew(codeword=np.zeros(200), index=5, orig_len=10,
                             gain=1.0, offset=0.0)])


def test_empty_stream():
    assert len(od_decompress([])) == 0
