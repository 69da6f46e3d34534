"""Tests for the bias, variance and MSE tables."""

import pandas as pd
import pytest

from harness.metrics import cortical_metrics, metrics, mind_metrics, records_frame
from models.errors import ConfigurationError
from models.records import CorticalRecord, MetricRecord, MindRecord


def staircase(estimates, truth=2.0, family="gan_dime", seed=0, step_index=0):
    return [
        MetricRecord(
            run_id=f"{family}-s{seed}",
            seed=seed,
            family=family,
            step_index=step_index,
            iteration=iteration,
            estimate_nats=value,
            true_nats=truth,
        )
        for iteration, value in enumerate(estimates)
    ]


def test_symmetric_estimates_have_no_bias():
    table = metrics(staircase([2.1, 1.9]), window=2)
    row = table.iloc[0]
    assert row["bias"] == pytest.approx(0.0, abs=1e-12)
    assert row["variance"] == pytest.approx(0.01)
    assert row["mse"] == pytest.approx(0.01)
    assert row["n_estimates"] == 2


def test_constant_exact_estimates():
    row = metrics(staircase([2.0] * 5), window=5).iloc[0]
    assert (row["bias"], row["variance"], row["mse"]) == (0.0, 0.0, 0.0)


def test_constant_offset():
    row = metrics(staircase([3.0] * 4), window=4).iloc[0]
    assert row["bias"] == pytest.approx(1.0)
    assert row["variance"] == 0.0
    assert row["mse"] == pytest.approx(1.0)


def test_window_keeps_the_last_iterations_of_every_seed():
    records = staircase([0.0, 0.0, 2.0, 2.0], seed=0) + staircase([0.0, 0.0, 2.2, 1.8], seed=1)
    row = metrics(records, window=2).iloc[0]
    assert row["n_estimates"] == 4
    assert row["bias"] == pytest.approx(0.0, abs=1e-12)
    assert row["variance"] == pytest.approx(0.02)


def test_one_row_per_family_and_step():
    records = (
        staircase([1.0, 1.0], truth=1.0)
        + staircase([2.0, 2.0], truth=2.0, step_index=1)
        + staircase([1.5, 1.5], truth=1.0, family="mine")
    )
    table = metrics(records_frame(records), window=1)
    assert list(zip(table["family"], table["step_index"])) == [("gan_dime", 0), ("gan_dime", 1), ("mine", 0)]
    assert table["bias"].tolist() == pytest.approx([0.0, 0.0, 0.5])


@pytest.mark.parametrize("window", [0, 3])
def test_invalid_window(window):
    with pytest.raises(ConfigurationError):
        metrics(staircase([2.0, 2.0]), window=window)


def test_records_without_truth():
    records = [record.model_copy(update={"true_nats": None}) for record in staircase([1.0])]
    with pytest.raises(ConfigurationError):
        metrics(records, window=1)
    with pytest.raises(ConfigurationError):
        metrics(pd.DataFrame(), window=1)


def test_cortical_metrics_counts_mass_points():
    def point(run_id, value, capacity, index):
        return CorticalRecord(
            run_id=run_id,
            seed=0,
            channel="awgn",
            sweep_value=value,
            capacity_nats=capacity,
            oracle_nats=0.5,
            bound_nats=0.6,
            cluster_index=index,
            center=float(index),
            mass=0.5,
        )

    frame = records_frame(
        [point("a", 1.0, 0.4, 0), point("a", 1.0, 0.4, 1), point("b", 1.0, 0.6, 0), point("b", 1.0, 0.6, 1)]
    )
    row = cortical_metrics(frame).iloc[0]
    assert row["capacity_mean"] == pytest.approx(0.5)
    assert row["capacity_std"] == pytest.approx(0.1)
    assert row["mass_points_mean"] == 2
    assert row["n_seeds"] == 2


def test_mind_metrics_average_over_seeds():
    frame = records_frame(
        [
            MindRecord(run_id=f"snr0-s{seed}", seed=seed, channel="awgn", decoder="map", snr_db=5.0, ser=ser)
            for seed, ser in ((0, 0.01), (1, 0.03))
        ]
    )
    row = mind_metrics(frame).iloc[0]
    assert row["ser_mean"] == pytest.approx(0.02)
    assert row["n_seeds"] == 2
    with pytest.raises(ConfigurationError):
        mind_metrics(pd.DataFrame())
