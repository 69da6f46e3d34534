"""Pydantic models for experiment output rows and training events."""

import math
from datetime import datetime, timezone
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator


class MetricRecord(BaseModel):
    """
    One staircase estimate.

    Attributes:
        run_id: Identifier of the (family, seed) cell.
        seed: Seed of the cell.
        family: Estimator family tag.
        step_index: Staircase step, starting at 0.
        iteration: Iteration within the step.
        estimate_nats: Estimate on the training batch.
        true_nats: Closed-form MI of the step, when an oracle exists.
    """

    run_id: str
    seed: int
    family: str
    step_index: int = Field(..., ge=0)
    iteration: int = Field(..., ge=0)
    estimate_nats: float
    true_nats: Optional[float] = None

    @field_validator("estimate_nats", "true_nats")
    @classmethod
    def must_be_finite(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not math.isfinite(value):
            raise ValueError("Record values must be finite.")
        return value


class MetricRow(BaseModel):
    """Bias, variance and MSE of one (family, step) over the metric window and all seeds."""

    family: str
    step_index: int
    true_nats: float
    bias: float
    variance: float = Field(..., ge=0)
    mse: float = Field(..., ge=0)
    n_estimates: int = Field(..., ge=1)


class CorticalTracePoint(BaseModel):
    """State of a capacity learner after one generator step."""

    iteration: int = Field(..., ge=0)
    value_function: float
    capacity_nats: float
    penalty: float = Field(default=0.0, ge=0)


class CorticalRecord(BaseModel):
    """
    One learned mass point of a capacity sweep cell.

    Capacity columns repeat on every mass point of the same cell.

    Attributes:
        run_id: Identifier of the (sweep value, seed) cell.
        channel: Channel scenario tag.
        sweep_value: Value of the swept parameter (e.g. peak amplitude A).
        capacity_nats: Capacity readout on a fresh evaluation batch.
        oracle_nats: Closed-form capacity or reference MI, when known.
        bound_nats: Closed-form upper bound, when known.
        cluster_index: Mass point index, sorted by first coordinate.
        center: First coordinate of the mass point.
        center_2: Second coordinate for two-dimensional inputs.
        mass: Probability mass of the point.
    """

    run_id: str
    seed: int
    channel: str
    sweep_value: float
    capacity_nats: float
    oracle_nats: Optional[float] = None
    bound_nats: Optional[float] = None
    cluster_index: int = Field(..., ge=0)
    center: float
    center_2: Optional[float] = None
    mass: float = Field(..., ge=0, le=1)


class MindRecord(BaseModel):
    """
    Symbol error rate and information readouts of one decoder at one SNR.

    Attributes:
        decoder: `mind`, `map` or `maxl`.
        snr_db: Eb/N0 in dB.
        ser: Monte Carlo symbol error rate.
        source_entropy_bits: H(X) from decoder posteriors (MIND only).
        conditional_entropy_bits: H(X|Y) (MIND only).
        mi_bits: H(X) - H(X|Y) (MIND only).
        error_probability: 1 - mean max posterior (MIND only).
    """

    run_id: str
    seed: int
    channel: str
    decoder: Literal["mind", "map", "maxl"]
    snr_db: float
    ser: float = Field(..., ge=0, le=1)
    source_entropy_bits: Optional[float] = None
    conditional_entropy_bits: Optional[float] = None
    mi_bits: Optional[float] = None
    error_probability: Optional[float] = None


class TrainingEvent(BaseModel):
    """
    A finished experiment cell or a divergence abort, logged as one JSON line.

    Attributes:
        created_at: UTC time of the event.
        experiment: `stairs`, `cortical` or `mind`.
        run_id: Identifier of the cell.
        status: `finished` or `diverged`.
        detail: Short human-readable summary.
    """

    created_at: datetime = Field(
        default_factory=lambda: datetime.now(timezone.utc),
        description="The UTC timestamp of the event.",
    )
    experiment: str
    run_id: str
    status: Literal["finished", "diverged"]
    detail: str = ""
