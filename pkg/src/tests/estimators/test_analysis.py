"""Tests for the closed-form validation paths."""

import math

import numpy as np
import pytest

from channels.gaussian import gaussian_log_ratio, rho_for_target_mi, true_mi_gaussian
from estimators.analysis import (
    brute_force_permuted_optimum,
    discrete_mi,
    discrete_oracle_readout,
    estimate_with_oracle_log_ratio,
    estimate_with_oracle_ratio,
    permuted_optimum,
    permuted_optimum_gap,
    permuted_value_gap,
    readout_from_log_ratio,
    variance_gaussian,
)
from models.errors import ConfigurationError
from sampling.batches import gaussian_pair_batch
from sampling.shuffles import derange

PMF = np.array([[0.4, 0.1], [0.1, 0.4]])


def test_discrete_mi_of_the_two_by_two_pmf():
    assert discrete_mi(PMF) == pytest.approx(0.19274, abs=1e-5)


def test_discrete_mi_of_independent_pmf_is_zero():
    assert discrete_mi(np.outer([0.3, 0.7], [0.6, 0.4])) == pytest.approx(0.0, abs=1e-15)


def test_discrete_mi_rejects_non_pmf():
    with pytest.raises(ConfigurationError):
        discrete_mi(np.array([[0.5, 0.5], [0.5, 0.5]]))


@pytest.mark.parametrize("family", ["kl_dime", "gan_dime", "hd_dime", "gamma_dime", "gamma_dime(3)"])
def test_joint_only_readouts_equal_enumerated_mi(family):
    assert discrete_oracle_readout(family, PMF) == pytest.approx(discrete_mi(PMF), abs=1e-12)


def test_discrete_oracle_needs_joint_only_family():
    with pytest.raises(ConfigurationError):
        discrete_oracle_readout("mine", PMF)


@pytest.mark.parametrize("family", ["kl_dime", "gan_dime", "hd_dime", "mine", "nwj", "smile(inf)"])
def test_oracle_ratio_readouts_are_near_truth(family, rng):
    rho = rho_for_target_mi(1, 1.0)
    batch = gaussian_pair_batch(1, rho, 20000, rng)
    shuffle = derange(batch.n, "random", rng)

    def ratio(x, y):
        return np.exp(gaussian_log_ratio(x, y, rho))

    estimate = estimate_with_oracle_ratio(family, ratio, batch, shuffle)
    assert estimate.value_nats == pytest.approx(1.0, abs=0.1)
    assert estimate.n_samples == 20000


def test_cpc_oracle_readout_is_capped_by_log_n(rng):
    rho = rho_for_target_mi(2, 8.0)
    batch = gaussian_pair_batch(2, rho, 32, rng)

    estimate = estimate_with_oracle_log_ratio(
        "cpc", lambda x, y: gaussian_log_ratio(x, y, rho), batch, derange(32, "shift", rng)
    )

    assert estimate.value_nats <= math.log(32)
    assert estimate.value_nats == pytest.approx(math.log(32), abs=0.05)


def test_underflowing_oracle_ratio_is_read_in_the_log_domain(rng):
    """
    Test that off-diagonal ratios which underflow to exactly zero at high MI
    do not stop the CPC readout.
    """
    rho = rho_for_target_mi(2, 8.0)
    batch = gaussian_pair_batch(2, rho, 32, rng)

    def ratio(x, y):
        return np.exp(gaussian_log_ratio(x, y, rho))

    estimate = estimate_with_oracle_ratio("cpc", ratio, batch, derange(32, "shift", rng))

    assert estimate.value_nats == pytest.approx(math.log(32), abs=0.05)


def test_oracle_ratio_must_be_positive(rng):
    batch = gaussian_pair_batch(1, 0.5, 4, rng)
    with pytest.raises(ConfigurationError):
        estimate_with_oracle_ratio("kl_dime", lambda x, y: -np.ones(x.shape[1]), batch, derange(4, "shift", rng))


@pytest.mark.parametrize("bad", [np.nan, np.inf])
def test_oracle_log_ratio_rejects_nan_and_positive_infinity(bad, rng):
    batch = gaussian_pair_batch(1, 0.5, 4, rng)
    with pytest.raises(ConfigurationError):
        estimate_with_oracle_log_ratio(
            "kl_dime", lambda x, y: np.full(x.shape[1], bad), batch, derange(4, "shift", rng)
        )


def test_readouts_vanish_at_zero_log_ratio():
    zeros = np.zeros(5)
    for family in ("kl_dime", "gan_dime", "hd_dime", "gamma_dime(2)", "mine", "nwj", "smile"):
        assert readout_from_log_ratio(family, zeros, zeros) == pytest.approx(0.0, abs=1e-15)


def test_marginal_families_need_marginal_ratios():
    with pytest.raises(ConfigurationError):
        readout_from_log_ratio("nwj", np.zeros(3))
    with pytest.raises(ConfigurationError):
        readout_from_log_ratio("cpc", np.zeros(3))


def test_variance_formula_value():
    assert variance_gaussian(2.0, 64) == pytest.approx(0.01534, abs=1e-5)
    assert variance_gaussian(0.0, 10) == 0.0


@pytest.mark.parametrize("k", [0, 1, 3, 10])
def test_permuted_optimum_agrees_with_brute_force(k):
    p, q = np.array([0.5, 0.3, 0.2]), np.array([0.2, 0.3, 0.5])
    closed = permuted_optimum(p / q, 10, k)
    assert np.allclose(closed, brute_force_permuted_optimum(p, q, 10, k), rtol=1e-6)
    assert permuted_value_gap(p, q, 10, k) <= 1e-9
    assert permuted_optimum_gap(p, q, 10, k) <= 1e-6


def test_permuted_optimum_limits():
    assert permuted_optimum(1e6, 128, 1) == pytest.approx(128.0, rel=1e-3)
    assert math.log(permuted_optimum(1e6, 128, 1)) == pytest.approx(math.log(128), rel=1e-3)
    assert permuted_optimum(np.inf, 128, 1) == 128.0
    assert permuted_optimum(3.0, 10, 0) == pytest.approx(3.0)


@pytest.mark.parametrize("n, k", [(0, 0), (5, 6), (5, -1)])
def test_permuted_optimum_rejects(n, k):
    with pytest.raises(ConfigurationError):
        permuted_optimum(1.0, n, k)


@pytest.mark.slow
def test_variance_of_oracle_readout_matches_formula(rng):
    rho = rho_for_target_mi(1, 2.0)
    assert true_mi_gaussian(1, rho) == pytest.approx(2.0)
    shuffle = derange(64, "shift", rng)

    def ratio(x, y):
        return np.exp(gaussian_log_ratio(x, y, rho))

    estimates = [
        estimate_with_oracle_ratio("kl_dime", ratio, gaussian_pair_batch(1, rho, 64, rng), shuffle).value_nats
        for _ in range(1000)
    ]
    assert np.var(estimates, ddof=1) == pytest.approx(variance_gaussian(2.0, 64), rel=0.1)
