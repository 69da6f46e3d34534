"""Staircase benchmark: every estimator family tracks a stepwise-rising true MI."""

from dataclasses import dataclass
from functools import partial

from channels.gaussian import apply_mapping, rho_for_target_mi, true_mi_gaussian
from config.logger import logger
from estimators.estimator import MiEstimator
from harness.pool import log_training_event, run_cells
from models.config import ExperimentConfig, StairsConfig
from models.errors import DivergenceError
from models.records import MetricRecord
from sampling.batches import gaussian_pair_batch
from sampling.rng import Rng
from sampling.shuffles import derange, permute_naive


@dataclass(frozen=True)
class StairsCell:
    family_index: int
    family: str
    seed: int

    @property
    def run_id(self) -> str:
        return f"{self.family}-s{self.seed}"


def stairs_cells(config: StairsConfig) -> list[StairsCell]:
    return [
        StairsCell(family_index=index, family=family, seed=seed)
        for index, family in enumerate(config.families)
        for seed in config.seeds
    ]


def run_stairs_cell(master_seed: int, config: StairsConfig, cell: StairsCell) -> list[MetricRecord]:
    """
    Train one estimator through all staircase steps, one record per iteration.

    The network keeps training across steps; only the data correlation changes.

    Raises:
        DivergenceError: If training diverges; a training event is logged first.
    """
    rng = Rng(master_seed).child(cell.family_index).child(cell.seed)
    naive = config.derangement_mode == "naive"
    estimator = MiEstimator.build(
        cell.family,
        config.d,
        config.d,
        rng.child_seed(0),
        hidden=config.hidden,
        hidden_activation=config.hidden_activation,
        derangement_mode="shift" if naive else config.derangement_mode,
        lr=config.lr,
        allow_fixed_points=naive,
    )
    data_rng = rng.child(1)
    records: list[MetricRecord] = []
    try:
        for step_index, target in enumerate(config.steps):
            rho = rho_for_target_mi(config.d, target)
            truth = true_mi_gaussian(config.d, rho)
            for iteration in range(config.iters_per_step):
                batch = gaussian_pair_batch(config.d, rho, config.n, data_rng)
                if config.mapping != "linear":
                    batch = batch.with_y(apply_mapping(config.mapping, batch.y))
                shuffle = (
                    permute_naive(config.n, data_rng)
                    if naive
                    else derange(config.n, estimator.derangement_mode, data_rng)
                )
                estimator.train_step(batch, shuffle)
                records.append(
                    MetricRecord(
                        run_id=cell.run_id,
                        seed=cell.seed,
                        family=cell.family,
                        step_index=step_index,
                        iteration=iteration,
                        estimate_nats=estimator.last_estimate.value_nats,
                        true_nats=truth,
                    )
                )
            logger.info(
                f"{cell.run_id} step {step_index} (I={truth:.3f}): "
                f"last estimate {records[-1].estimate_nats:.4f}"
            )
    except DivergenceError as exc:
        log_training_event("stairs", cell.run_id, "diverged", str(exc))
        raise
    log_training_event("stairs", cell.run_id, "finished", f"{len(records)} records")
    return records


def run_stairs(config: ExperimentConfig, threads: int = 1) -> list[MetricRecord]:
    """All (family, seed) cells of the staircase, in family-then-seed order."""
    section = config.stairs
    cells = stairs_cells(section)
    logger.info(
        f"Staircase: {len(section.families)} families x {len(section.seeds)} seeds, "
        f"{len(section.steps)} steps of {section.iters_per_step} iterations"
    )
    worker = partial(run_stairs_cell, config.seed, section)
    results = run_cells(worker, cells, threads)
    return [record for cell_records in results for record in cell_records]
