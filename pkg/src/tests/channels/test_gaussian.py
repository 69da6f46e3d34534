"""Tests for the correlated Gaussian scenario."""

import numpy as np
import pytest
from scipy.stats import multivariate_normal, norm

from channels.gaussian import (
    MAPPINGS,
    apply_mapping,
    gaussian_log_ratio,
    invert_mapping,
    mapped_log_ratio,
    rho_for_target_mi,
    true_mi_gaussian,
)
from models.errors import ConfigurationError
from sampling.batches import gaussian_pair_batch


@pytest.mark.parametrize("d, mi", [(1, 0.5), (5, 2.0), (5, 10.0), (20, 10.0)])
def test_rho_inverts_true_mi(d, mi):
    assert true_mi_gaussian(d, rho_for_target_mi(d, mi)) == pytest.approx(mi, rel=1e-12)


def test_zero_mi_means_zero_correlation():
    assert rho_for_target_mi(3, 0.0) == 0.0


@pytest.mark.parametrize("d, mi", [(0, 1.0), (2, -0.1)])
def test_rho_rejects(d, mi):
    with pytest.raises(ConfigurationError):
        rho_for_target_mi(d, mi)


def test_log_ratio_matches_densities(rng):
    rho = 0.6
    x, y = rng.generator.standard_normal((1, 5)), rng.generator.standard_normal((1, 5))
    joint = multivariate_normal(mean=[0, 0], cov=[[1, rho], [rho, 1]])
    expected = joint.logpdf(np.vstack((x, y)).T) - norm.logpdf(x[0]) - norm.logpdf(y[0])
    assert np.allclose(gaussian_log_ratio(x, y, rho), expected, atol=1e-12)


def test_log_ratio_averages_to_mi(rng):
    rho = rho_for_target_mi(2, 1.5)
    batch = gaussian_pair_batch(2, rho, 100000, rng)
    assert np.mean(gaussian_log_ratio(batch.x, batch.y, rho)) == pytest.approx(1.5, abs=0.03)


@pytest.mark.parametrize("tag", MAPPINGS)
def test_mapping_round_trip(tag, rng):
    y = rng.generator.standard_normal((2, 10))
    assert np.allclose(invert_mapping(tag, apply_mapping(tag, y)), y, atol=1e-10)


def test_mapped_log_ratio_is_invariant(rng):
    x, y = rng.generator.standard_normal((1, 6)), rng.generator.standard_normal((1, 6))
    assert np.allclose(mapped_log_ratio(x, apply_mapping("cubic", y), 0.7, "cubic"), gaussian_log_ratio(x, y, 0.7))


def test_unknown_mapping():
    with pytest.raises(ConfigurationError):
        apply_mapping("square", np.zeros(2))
