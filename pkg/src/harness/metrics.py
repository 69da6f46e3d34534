"""Bias, variance and MSE tables built from experiment records."""

from typing import Sequence

import pandas as pd
from pydantic import BaseModel

from models.errors import ConfigurationError
from models.records import MetricRecord, MetricRow

METRIC_COLUMNS = list(MetricRow.model_fields)
MIND_READOUTS = ("source_entropy_bits", "conditional_entropy_bits", "mi_bits", "error_probability")


def records_frame(records: Sequence[BaseModel]) -> pd.DataFrame:
    """One row per record, columns in schema order."""
    if not records:
        return pd.DataFrame()
    columns = list(type(records[0]).model_fields)
    return pd.DataFrame([record.model_dump() for record in records], columns=columns)


def metrics(records: "pd.DataFrame | Sequence[MetricRecord]", window: int) -> pd.DataFrame:
    """
    Bias, variance and MSE per (family, step) over the last `window`
    iterations of each step, pooled across seeds.

    Variance is the population variance of the pooled estimates and the MSE
    is reported as `bias^2 + variance`.

    Raises:
        ConfigurationError: If `window < 1`, a step has fewer iterations than
            `window`, or nothing with a known truth is left to aggregate.
    """
    frame = records if isinstance(records, pd.DataFrame) else records_frame(records)
    if window < 1:
        raise ConfigurationError(f"Metric window must be >= 1, got {window}.")
    if frame.empty or frame["true_nats"].isna().all():
        raise ConfigurationError("No records with a known true MI to aggregate.")
    frame = frame.dropna(subset=["true_nats"])

    last = frame.groupby(["family", "step_index"])["iteration"].transform("max")
    if (last + 1 < window).any():
        raise ConfigurationError(f"Metric window {window} exceeds the iterations of a step.")
    selected = frame[frame["iteration"] > last - window]

    rows = []
    for (family, step_index), group in selected.groupby(["family", "step_index"], sort=False):
        truth = float(group["true_nats"].iloc[0])
        estimates = group["estimate_nats"].to_numpy()
        bias = float(estimates.mean() - truth)
        variance = float(estimates.var(ddof=0))
        rows.append(
            MetricRow(
                family=family,
                step_index=int(step_index),
                true_nats=truth,
                bias=bias,
                variance=variance,
                mse=bias**2 + variance,
                n_estimates=len(estimates),
            ).model_dump()
        )
    return pd.DataFrame(rows, columns=METRIC_COLUMNS)


def cortical_metrics(frame: pd.DataFrame) -> pd.DataFrame:
    """Capacity statistics and mass-point counts per sweep value, across seeds."""
    if frame.empty:
        raise ConfigurationError("No cortical records to aggregate.")
    per_cell = frame.groupby(["sweep_value", "run_id"], sort=False).agg(
        capacity_nats=("capacity_nats", "first"),
        oracle_nats=("oracle_nats", "first"),
        bound_nats=("bound_nats", "first"),
        n_mass_points=("cluster_index", "size"),
    )
    summary = per_cell.groupby(level="sweep_value", sort=False).agg(
        capacity_mean=("capacity_nats", "mean"),
        capacity_std=("capacity_nats", lambda s: float(s.std(ddof=0))),
        oracle_nats=("oracle_nats", "first"),
        bound_nats=("bound_nats", "first"),
        mass_points_mean=("n_mass_points", "mean"),
        n_seeds=("capacity_nats", "size"),
    )
    return summary.reset_index()


def mind_metrics(frame: pd.DataFrame) -> pd.DataFrame:
    """Seed-averaged SER and information readouts per (decoder, SNR)."""
    if frame.empty:
        raise ConfigurationError("No MIND records to aggregate.")
    # readout columns are empty for the oracle decoders
    frame = frame.astype({column: float for column in MIND_READOUTS})
    summary = frame.groupby(["decoder", "snr_db"], sort=False).agg(
        ser_mean=("ser", "mean"),
        source_entropy_bits=("source_entropy_bits", "mean"),
        conditional_entropy_bits=("conditional_entropy_bits", "mean"),
        mi_bits=("mi_bits", "mean"),
        error_probability=("error_probability", "mean"),
        n_seeds=("ser", "size"),
    )
    return summary.reset_index()
