"""Experiment orchestration, metrics and CSV persistence."""

from .checks import CHECKS, run_checks
from .cortical import reference_capacities, run_cortical, run_cortical_cell
from .metrics import cortical_metrics, metrics, mind_metrics, records_frame
from .mind import evaluate_decoders, run_mind, run_mind_cell
from .pool import log_training_event, run_cells
from .runner import RunOutcome, execute, run_experiment
from .stairs import run_stairs, run_stairs_cell
from .writer import write_csv, write_outputs

__all__ = [
    "CHECKS",
    "RunOutcome",
    "cortical_metrics",
    "evaluate_decoders",
    "execute",
    "log_training_event",
    "metrics",
    "mind_metrics",
    "records_frame",
    "reference_capacities",
    "run_cells",
    "run_checks",
    "run_cortical",
    "run_cortical_cell",
    "run_experiment",
    "run_mind",
    "run_mind_cell",
    "run_stairs",
    "run_stairs_cell",
    "write_csv",
    "write_outputs",
]
