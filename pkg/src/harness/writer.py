"""CSV and summary persistence for experiment outputs."""

from pathlib import Path
from typing import Sequence

import pandas as pd
from pydantic import BaseModel

from config.logger import logger
from harness.metrics import records_frame
from models.config import ExperimentConfig
from models.estimates import CheckReport

RECORDS_FILE = "records.csv"
METRICS_FILE = "metrics.csv"
SUMMARY_FILE = "summary.txt"
FLOAT_FORMAT = "%.17g"


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    """Comma-separated, header row, 17 significant digits, LF line endings."""
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def check_frames(report: CheckReport) -> tuple[pd.DataFrame, pd.DataFrame]:
    """Per-check rows, and a one-row count of passed and failed checks."""
    records = records_frame(report.results)
    counts = pd.DataFrame(
        [
            {
                "n_checks": len(report.results),
                "n_passed": len(report.results) - len(report.failures),
                "n_failed": len(report.failures),
            }
        ]
    )
    return records, counts


def summary_text(config: ExperimentConfig, records: pd.DataFrame, table: pd.DataFrame) -> str:
    lines = [
        f"experiment: {config.experiment}",
        f"seed: {config.seed}",
        f"records: {len(records)}",
        "",
    ]
    if table.empty:
        lines.append("no metrics")
    else:
        with pd.option_context("display.max_rows", None, "display.max_columns", None, "display.width", 200):
            lines.append(table.to_string(index=False, float_format=lambda value: f"{value:.6g}"))
    return "\n".join(lines) + "\n"


def write_outputs(
    config: ExperimentConfig,
    output_dir: Path,
    records: "pd.DataFrame | Sequence[BaseModel]",
    table: pd.DataFrame,
) -> dict[str, Path]:
    """
    Write `records.csv`, `metrics.csv` and `summary.txt` into `output_dir`.

    All three files come from this single call, after every cell finished.
    """
    frame = records if isinstance(records, pd.DataFrame) else records_frame(records)
    output_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "records": write_csv(frame, output_dir / RECORDS_FILE),
        "metrics": write_csv(table, output_dir / METRICS_FILE),
    }
    summary_path = output_dir / SUMMARY_FILE
    with open(summary_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(summary_text(config, frame, table))
    paths["summary"] = summary_path
    logger.info(f"Wrote {len(frame)} records to {output_dir}")
    return paths
