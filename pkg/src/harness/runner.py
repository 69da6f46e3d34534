"""Dispatch an experiment document to its runner and persist the outcome."""

from dataclasses import dataclass
from pathlib import Path

import pandas as pd

from config.logger import logger
from harness.checks import run_checks
from harness.cortical import run_cortical
from harness.metrics import cortical_metrics, metrics, mind_metrics, records_frame
from harness.mind import run_mind
from harness.stairs import run_stairs
from harness.writer import check_frames, write_outputs
from models.config import ExperimentConfig
from models.errors import CheckSuiteError


@dataclass
class RunOutcome:
    experiment: str
    records: pd.DataFrame
    metrics: pd.DataFrame
    passed: bool = True
    paths: dict[str, Path] | None = None


def run_experiment(config: ExperimentConfig, threads: int = 1) -> RunOutcome:
    """
    Run the experiment the document names and build its metrics table.

    Raises:
        ConfigurationError: If the metrics window cannot be satisfied.
        NumericError: If any cell diverges.
        SamplingError: If a derangement cannot be drawn.
    """
    if config.experiment == "stairs":
        frame = records_frame(run_stairs(config, threads))
        return RunOutcome("stairs", frame, metrics(frame, config.stairs.window))
    if config.experiment == "cortical":
        frame = records_frame(run_cortical(config, threads))
        return RunOutcome("cortical", frame, cortical_metrics(frame))
    if config.experiment == "mind":
        frame = records_frame(run_mind(config, threads))
        return RunOutcome("mind", frame, mind_metrics(frame))
    report = run_checks(config.checks, config.seed)
    frame, counts = check_frames(report)
    for failure in report.failures:
        logger.error(f"Check {failure.name} failed: {failure.detail}")
    return RunOutcome("checks", frame, counts, passed=report.passed)


def execute(config: ExperimentConfig, output_dir: Path, threads: int = 1) -> RunOutcome:
    """
    Run, then write `records.csv`, `metrics.csv` and `summary.txt`.

    Raises:
        CheckSuiteError: After writing the outputs, if any analytic check failed.
    """
    outcome = run_experiment(config, threads)
    outcome.paths = write_outputs(config, output_dir, outcome.records, outcome.metrics)
    if not outcome.passed:
        failed = ", ".join(str(name) for name in outcome.records.loc[~outcome.records["passed"], "name"])
        raise CheckSuiteError(f"Failed checks: {failed}")
    return outcome
