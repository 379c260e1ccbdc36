import numpy as np
import pytest

from ecgsq import gsvq
from ecgsq.records import slice_record
from ecgsq.synth import DEFAULT_RECORD_IDS, make_synthetic_record


ACCEPTANCE_VERDICTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance scorecard")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def corpus():
    """The three benchmark records, trimmed to their first 60 s."""
    records = []
    for rid in DEFAULT_RECORD_IDS:
        rec, _ = make_synthetic_record(rid, duration_s=70.0)
        records.append(slice_record(rec, 0.0, 60.0))
    return records


@pytest.fixture(scope="session")
def record_100(corpus):
    return corpus[0]


@pytest.fixture(scope="session")
def trained_codebook(corpus):
    """64-codeword gain-shape codebook trained on the benchmark corpus."""
    vectors = np.concatenate([gsvq.gsvq_training_vectors(rec) for rec in corpus])
    return gsvq.lbg_train(vectors, 64)
