"""Capacity sweeps: train a cooperative learner per (sweep value, seed)."""

import math
from dataclasses import dataclass
from functools import partial
from typing import Optional

from channels.scenarios import ChannelScenario
from config.logger import logger
from cortical.clusters import cluster_mass_points
from cortical.constraints import ConstraintSpec
from cortical.learner import CapacityLearner, capacity_estimate, cortical_train
from cortical.oracles import awgn_capacity, binary_awgn_mi, cauchy_capacity, mckellips_bound
from harness.pool import log_training_event, run_cells
from models.config import CorticalConfig, ExperimentConfig
from models.errors import DivergenceError
from models.records import CorticalRecord
from sampling.rng import Rng
from sampling.shuffles import derange

DEFAULT_EPS_FRACTION = 0.05


@dataclass(frozen=True)
class CorticalCell:
    sweep_index: int
    sweep_value: float
    seed: int

    @property
    def run_id(self) -> str:
        return f"sweep{self.sweep_index}-s{self.seed}"


def reference_capacities(
    channel: ChannelScenario, constraint: ConstraintSpec
) -> tuple[Optional[float], Optional[float]]:
    """
    Closed-form (oracle, bound) pair for the scenarios that have one.

    Peak-limited scalar AWGN reports the equiprobable binary-input MI as its
    oracle and the McKellips bound; average-power AWGN the Gaussian capacity;
    Cauchy under the logarithmic constraint `ln(A/γ)`.
    """
    true_mi = channel.true_mi()
    if true_mi is not None:
        return true_mi, None
    if channel.name == "awgn" and getattr(channel, "sigma", 0) > 0:
        sigma = channel.sigma
        if constraint.peak_a is not None and channel.dim == 1 and constraint.cauchy_gamma is None:
            a = constraint.peak_a
            return binary_awgn_mi(a, sigma), mckellips_bound(a / sigma)
        if constraint.avg_p is not None:
            return awgn_capacity(constraint.avg_p / sigma**2, channel.dim), None
    if channel.name == "cauchy" and constraint.cauchy_gamma is not None:
        if constraint.peak_a >= channel.gamma:
            return cauchy_capacity(constraint.peak_a, channel.gamma), None
    return None, None


def run_cortical_cell(master_seed: int, config: CorticalConfig, cell: CorticalCell) -> list[CorticalRecord]:
    """
    Train, evaluate capacity on a fresh batch and summarise the learned inputs.

    Raises:
        DivergenceError: If training diverges; a training event is logged first.
    """
    rng = Rng(master_seed).child(cell.sweep_index).child(cell.seed)
    channel, constraint = config.channel_for(cell.sweep_value), config.constraint_for(cell.sweep_value)
    learner = CapacityLearner.build(
        channel,
        rng.child_seed(0),
        constraint=constraint,
        latent_dim=config.latent_dim,
        hidden=config.hidden,
        hidden_activation=config.hidden_activation,
        alpha=config.alpha,
        k_disc_steps=config.k_disc_steps,
        latent_mode=config.latent_mode,
        lr=config.lr,
    )
    train_rng = rng.child(1)
    try:
        cortical_train(learner, config.iters, config.n, train_rng)
    except DivergenceError as exc:
        log_training_event("cortical", cell.run_id, "diverged", str(exc))
        raise

    eval_rng = rng.child(2)
    sample = learner.draw_batch(config.eval_n, eval_rng)
    capacity = capacity_estimate(learner, sample.batch, derange(config.eval_n, "shift", eval_rng))
    oracle, bound = reference_capacities(channel, constraint)

    # Rayleigh-equivalent inputs are clustered on s = 1 / (1 + u^2), not on u
    inputs = channel.input_space(sample.batch.x[:, : config.cluster_n])
    scale = channel.input_extent or constraint.peak_a or (
        math.sqrt(constraint.avg_p) if constraint.avg_p else 1.0
    )
    eps = config.cluster_eps or DEFAULT_EPS_FRACTION * scale
    mass_points = cluster_mass_points(inputs, eps)

    logger.info(
        f"{cell.run_id} ({config.sweep_param}={cell.sweep_value:g}): C={capacity.nats:.4f} nats, "
        f"{len(mass_points)} mass points"
    )
    log_training_event(
        "cortical", cell.run_id, "finished", f"capacity {capacity.nats:.6f} nats"
    )
    return [
        CorticalRecord(
            run_id=cell.run_id,
            seed=cell.seed,
            channel=channel.name,
            sweep_value=cell.sweep_value,
            capacity_nats=capacity.nats,
            oracle_nats=oracle,
            bound_nats=bound,
            cluster_index=index,
            center=float(point.center[0]),
            center_2=float(point.center[1]) if point.center.size > 1 else None,
            mass=point.mass,
        )
        for index, point in enumerate(mass_points)
    ]


def run_cortical(config: ExperimentConfig, threads: int = 1) -> list[CorticalRecord]:
    """All (sweep value, seed) cells, in sweep-then-seed order."""
    section = config.cortical
    cells = [
        CorticalCell(sweep_index=index, sweep_value=value, seed=seed)
        for index, value in enumerate(section.sweep_values)
        for seed in section.seeds
    ]
    logger.info(
        f"Capacity sweep over {section.sweep_param} in {section.sweep_values} "
        f"on {section.channel}, {len(section.seeds)} seeds"
    )
    results = run_cells(partial(run_cortical_cell, config.seed, section), cells, threads)
    return [record for cell_records in results for record in cell_records]
