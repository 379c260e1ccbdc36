import numpy as np
import pytest

from ecgsq import bench, report
from ecgsq.bench import (CSV_COLUMNS, PARAM_SETS, run_cell, run_monotonicity_probe,
                         run_sweep, run_variant_matrix, rows_to_csv)


def test_param_sets_cover_all_schemata():
    assert set(PARAM_SETS) == {"od", "gsvq", "pca", "inlc"}
    assert PARAM_SETS["od"][0] == 0.02
    assert PARAM_SETS["pca"][0] == 15


def test_run_cell_inlc(record_100):
    row = run_cell(record_100, "inlc", 10.0)
    assert row["schema"] == "inlc"
    assert row["variant"] == "ODF-NP-GO"
    assert row["cr"] > 1.0
    assert row["prd"] > 0.0
    assert set(CSV_COLUMNS) <= set(row)


def test_run_cell_gsvq_needs_codebook(record_100):
    with pytest.raises(ValueError):
        run_cell(record_100, "gsvq", 0.1)


def test_gsvq_threshold_scales_with_adc_bits(record_100):
    assert bench.gsvq_threshold(0.02, record_100) == pytest.approx(
        0.02 * (1 << record_100.adc_resolution_bits))


def test_run_sweep_orders_rows_and_appends_averages(corpus):
    rows = run_sweep(corpus[:2], "inlc", [20.0, 10.0])
    records = [r["record"] for r in rows]
    assert records == sorted(records[:4]) + ["average", "average"]
    avg = [r for r in rows if r["record"] == "average"]
    assert [r["param"] for r in avg] == [10.0, 20.0]
    per_rec = [r for r in rows if r["record"] != "average" and r["param"] == 10.0]
    assert avg[0]["cr"] == pytest.approx(np.mean([r["cr"] for r in per_rec]))


def test_run_sweep_deterministic(record_100):
    a = run_sweep([record_100], "inlc", [15.0])
    b = run_sweep([record_100], "inlc", [15.0])
    assert rows_to_csv(a) == rows_to_csv(b)


def test_variant_matrix_labels(record_100):
    rows = run_variant_matrix([record_100], [30.0])
    labels = {r["variant"] for r in rows}
    assert labels == {f"{d}-{b}-{o}" for d in ("ODF", "NDF")
                      for b in ("NP", "UP") for o in ("GO", "OO")}


def test_monotonicity_probe(record_100):
    out = run_monotonicity_probe(record_100, 50, "v1", seed=1)
    assert out["steps"] > 0
    assert 0.0 <= out["violation_fraction"] < 1.0
    again = run_monotonicity_probe(record_100, 50, "v1", seed=1)
    assert out == again


def test_rows_to_csv_format():
    rows = [{"record": "100", "schema": "inlc", "variant": "ODF-NP-GO",
             "param": 10.0, "cr": 20.5, "prd": 4.25, "prdn": None,
             "rmse": 1.0, "rmsep": 2.0, "snr": 3.0, "mae": 4.0,
             "cc": 0.999, "qs": 4.8}]
    text = rows_to_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1].startswith("100,inlc,ODF-NP-GO,10,20.5,4.25,,")
    timed = rows_to_csv([{**rows[0], "encode_ms": 1.0, "decode_ms": 2.0}],
                        timing=True)
    assert timed.splitlines()[0].endswith("encode_ms,decode_ms")


def test_render_figures(tmp_path, record_100):
    rows = run_sweep([record_100], "inlc", [15.0, 30.0])
    fig = report.render_rate_distortion(rows, str(tmp_path / "sweep.png"))
    assert (tmp_path / "sweep.png").stat().st_size > 0
    probe = run_monotonicity_probe(record_100, 20, "v1")
    report.render_monotonicity([probe], str(tmp_path / "mono.png"))
    assert (tmp_path / "mono.png").stat().st_size > 0
    assert report.figure_path_for("/a/b.csv") == "/a/b.png"
