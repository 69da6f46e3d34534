"""Tests for CSV and summary persistence."""

from pathlib import Path

import pandas as pd

from harness.writer import METRICS_FILE, RECORDS_FILE, SUMMARY_FILE, check_frames, write_csv, write_outputs
from models.config import parse_config
from models.estimates import CheckReport, CheckResult


def test_csv_format(tmp_path: Path):
    frame = pd.DataFrame({"name": ["a", "b"], "value": [0.1, 2.0]})
    raw = write_csv(frame, tmp_path / "nested" / "out.csv").read_bytes()
    assert raw == b"name,value\na,0.10000000000000001\nb,2\n"


def test_outputs_are_byte_identical(tmp_path: Path):
    config = parse_config({"experiment": "stairs"})
    frame = pd.DataFrame({"family": ["kl_dime"] * 3, "estimate_nats": [1 / 3, 2 / 3, 1.0]})
    table = pd.DataFrame({"family": ["kl_dime"], "bias": [1e-17]})
    first = write_outputs(config, tmp_path / "first", frame, table)
    second = write_outputs(config, tmp_path / "second", frame, table)
    for key in ("records", "metrics", "summary"):
        assert first[key].read_bytes() == second[key].read_bytes()
        assert b"\r\n" not in first[key].read_bytes()
    assert {path.name for path in first.values()} == {RECORDS_FILE, METRICS_FILE, SUMMARY_FILE}


def test_summary_mentions_the_run(tmp_path: Path):
    config = parse_config({"experiment": "mind", "seed": 9})
    paths = write_outputs(config, tmp_path, pd.DataFrame({"ser": [0.1]}), pd.DataFrame())
    summary = paths["summary"].read_text(encoding="utf-8")
    assert summary.startswith("experiment: mind\nseed: 9\nrecords: 1\n")
    assert "no metrics" in summary


def test_check_frames():
    report = CheckReport(
        results=[
            CheckResult(name="ok", passed=True, observed=0.0, tolerance=1.0),
            CheckResult(name="bad", passed=False, observed=2.0, tolerance=1.0),
        ]
    )
    records, counts = check_frames(report)
    assert records["name"].tolist() == ["ok", "bad"]
    assert counts.iloc[0].to_dict() == {"n_checks": 2, "n_passed": 1, "n_failed": 1}
