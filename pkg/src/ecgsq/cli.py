"""Command-line benchmark harness."""

from __future__ import annotations

import glob
import os
import sys

import click
import numpy as np

from . import bench, bitstream, gsvq, inlc, report
from .records import load_csv_record, load_wfdb_record, slice_record
from .synth import write_synthetic_corpus

DATA_DIR_ENV = "ECGSQ_DATA_DIR"


def _resolve_record_paths(records: tuple[str, ...]) -> list[str]:
    """Expand directories / bare record names into header or CSV paths.

    A bare name like "100" is resolved against the data root given by
    the ECGSQ_DATA_DIR environment variable.
    """
    root = os.environ.get(DATA_DIR_ENV, ".")
    paths = []
    for item in records:
        if os.path.isdir(item):
            paths.extend(sorted(glob.glob(os.path.join(item, "*.hea"))))
            continue
        if os.path.exists(item):
            paths.append(item)
            continue
        for candidate in (os.path.join(root, item + ".hea"),
                          os.path.join(root, item)):
            if os.path.exists(candidate):
                paths.append(candidate)
                break
        else:
            raise click.ClickException(f"record not found: {item}")
    if not paths:
        raise click.ClickException("no records matched")
    return paths


def _load_records(paths, start_s: float, dur_s: float, fs: float,
                  channel: int = 0):
    out = []
    for path in paths:
        if path.endswith(".csv"):
            rec = load_csv_record(path, fs=fs)
        else:
            rec = load_wfdb_record(path, channel=channel)
        if dur_s > 0:
            rec = slice_record(rec, start_s, dur_s)
        out.append(rec)
    return out


def _parse_params(text: str | None, schema: str):
    if not text:
        return bench.PARAM_SETS[schema]
    return [float(p) for p in text.split(",") if p.strip()]


def _parse_bank(text: str) -> tuple[str, float]:
    if text.startswith("periodic:"):
        return "periodic", float(text.split(":", 1)[1])
    if text in ("static", "continuous", "periodic"):
        return text, 60.0
    raise click.ClickException(f"bad bank policy: {text}")


def _write_outputs(rows, out_csv: str, timing: bool, title: str) -> None:
    csv_text = bench.rows_to_csv(rows, timing=timing)
    os.makedirs(os.path.dirname(os.path.abspath(out_csv)), exist_ok=True)
    with open(out_csv, "w") as fh:
        fh.write(csv_text)
    fig = report.render_rate_distortion(rows, report.figure_path_for(out_csv), title)
    click.echo(f"wrote {out_csv}")
    click.echo(f"wrote {fig}")


record_options = [
    click.option("--records", "-r", multiple=True, required=True,
                 help="Record directory, header/CSV path, or bare record "
                      f"name resolved under ${DATA_DIR_ENV}."),
    click.option("--start-s", default=0.0, show_default=True,
                 help="Offset into each record, seconds."),
    click.option("--dur-s", default=60.0, show_default=True,
                 help="Window length, seconds; 0 means the whole record."),
    click.option("--fs", default=360.0, show_default=True,
                 help="Sampling rate assumed for CSV inputs."),
]


def add_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn
    return wrap


@click.group()
def main():
    """ECG compression benchmark suite."""


@main.command()
@add_options(record_options)
@click.option("--schema", type=click.Choice(["inlc", "od", "gsvq", "pca"]),
              default="inlc", show_default=True)
@click.option("--params", default=None,
              help="Comma-separated parameter list; defaults per schema.")
@click.option("--distance", type=click.Choice(["v1", "v2"]), default="v1",
              show_default=True)
@click.option("--bank", default="static", show_default=True,
              help="static | continuous | periodic:<seconds>")
@click.option("--offset-mode", type=click.Choice(["go", "oo"]), default="go",
              show_default=True)
@click.option("--codebook", default=None, help="Trained codebook file (gsvq).")
@click.option("--out", "-o", default="sweep.csv", show_default=True)
@click.option("--jobs", default=1, show_default=True)
@click.option("--timing", is_flag=True,
              help="Append encode/decode millisecond columns.")
def sweep(records, start_s, dur_s, fs, schema, params, distance, bank,
          offset_mode, codebook, out, jobs, timing):
    """Rate-distortion sweep of one codec over a parameter grid."""
    recs = _load_records(_resolve_record_paths(records), start_s, dur_s, fs)
    policy, interval = _parse_bank(bank)
    options = {"distance": distance, "bank_policy": policy,
               "periodic_interval_s": interval, "offset_mode": offset_mode}
    book = None
    if schema == "gsvq":
        if not codebook:
            raise click.ClickException("gsvq sweeps need --codebook")
        book = bitstream.load_codebook(codebook)
    rows = bench.run_sweep(recs, schema, _parse_params(params, schema),
                           options, codebook=book, jobs=jobs)
    _write_outputs(rows, out, timing, f"{schema} sweep")


@main.command()
@add_options(record_options)
@click.option("--params", default=None, help="Comma-separated threshold list.")
@click.option("--out", "-o", default="variants.csv", show_default=True)
@click.option("--jobs", default=1, show_default=True)
@click.option("--timing", is_flag=True)
def variants(records, start_s, dur_s, fs, params, out, jobs, timing):
    """Compare all eight fragment-codec variants on one grid."""
    recs = _load_records(_resolve_record_paths(records), start_s, dur_s, fs)
    eps_set = _parse_params(params, "inlc")
    rows = bench.run_variant_matrix(recs, eps_set, jobs=jobs)
    _write_outputs(rows, out, timing, "codec variants")


@main.command()
@add_options(record_options)
@click.option("--distance", type=click.Choice(["v1", "v2"]), default="v1",
              show_default=True)
@click.option("--trials", default=200, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "-o", default="monotonicity.csv", show_default=True)
def monotonicity(records, start_s, dur_s, fs, distance, trials, seed, out):
    """Probe how often the match distance decreases with fragment length."""
    recs = _load_records(_resolve_record_paths(records), start_s, dur_s, fs)
    results = [bench.run_monotonicity_probe(rec, trials, distance, seed=seed)
               for rec in recs]
    columns = ["record", "distance", "trials", "steps", "violations",
               "violation_fraction", "max_violation"]
    lines = [",".join(columns)]
    for r in results:
        lines.append(",".join(
            f"{r[c]:.6g}" if isinstance(r[c], float) else str(r[c])
            for c in columns))
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    with open(out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    fig = report.render_monotonicity(results, report.figure_path_for(out))
    click.echo(f"wrote {out}")
    click.echo(f"wrote {fig}")
    for r in results:
        click.echo(f"{r['record']} {r['distance']}: "
                   f"{r['violation_fraction']:.3%} of {r['steps']} steps decreasing")


@main.command("train-codebook")
@add_options(record_options)
@click.option("--n-codewords", default=gsvq.DEFAULT_N, show_default=True)
@click.option("--shape-len", default=gsvq.DEFAULT_K, show_default=True)
@click.option("--out", "-o", default="codebook.esqb", show_default=True)
def train_codebook(records, start_s, dur_s, fs, n_codewords, shape_len, out):
    """Train a gain-shape codebook from the given records."""
    recs = _load_records(_resolve_record_paths(records), start_s, dur_s, fs)
    vectors = [gsvq.gsvq_training_vectors(rec, shape_len) for rec in recs]
    vectors = np.concatenate([v for v in vectors if len(v)])
    book = gsvq.lbg_train(vectors, n_codewords)
    bitstream.save_codebook(out, book)
    click.echo(f"trained {book.n}x{book.k} codebook from "
               f"{len(vectors)} beats -> {out}")


@main.command()
@add_options(record_options)
@click.option("--eps", default=10.0, show_default=True)
@click.option("--distance", type=click.Choice(["v1", "v2"]), default="v1",
              show_default=True)
@click.option("--bank", default="static", show_default=True)
@click.option("--offset-mode", type=click.Choice(["go", "oo"]), default="go",
              show_default=True)
@click.option("--out", "-o", default=None, help="Write the bitstream here.")
def roundtrip(records, start_s, dur_s, fs, eps, distance, bank, offset_mode, out):
    """Compress each record with the fragment codec and verify the decode."""
    recs = _load_records(_resolve_record_paths(records), start_s, dur_s, fs)
    policy, interval = _parse_bank(bank)
    cfg = inlc.InlcConfig(eps=eps, distance=distance, bank_policy=policy,
                          periodic_interval_s=interval, offset_mode=offset_mode)
    failed = False
    for rec in recs:
        messages = inlc.inlc_compress(rec.samples, cfg, fs=rec.fs)
        blob = bitstream.pack_stream("inlc", messages, cfg=cfg, fs=rec.fs,
                                     n_samples=len(rec.samples))
        _, wire, meta = bitstream.unpack_stream(blob, expect_schema="inlc")
        recon = inlc.inlc_decompress(wire, meta["cfg"], fs=meta["fs"])
        ok = len(recon) == len(rec.samples)
        n_match = sum(isinstance(m, inlc.Match) for m in messages)
        click.echo(f"{rec.record_id}: {len(rec.samples)} samples, "
                   f"{len(messages)} messages ({n_match} matches), "
                   f"{len(blob)} bytes -> {'ok' if ok else 'LENGTH MISMATCH'}")
        if out:
            path = out if len(recs) == 1 else f"{out}.{rec.record_id}"
            with open(path, "wb") as fh:
                fh.write(blob)
            click.echo(f"wrote {path}")
        failed |= not ok
    if failed:
        sys.exit(1)


@main.command("make-data")
@click.option("--out-dir", "-o", default=None,
              help=f"Target directory; defaults to ${DATA_DIR_ENV} or ./data.")
@click.option("--dur-s", default=70.0, show_default=True)
def make_data(out_dir, dur_s):
    """Write the bundled synthetic benchmark corpus as format-212 records."""
    directory = out_dir or os.environ.get(DATA_DIR_ENV, "data")
    paths = write_synthetic_corpus(directory, duration_s=dur_s)
    for path in paths:
        click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
