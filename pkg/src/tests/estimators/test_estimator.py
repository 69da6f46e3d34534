"""Tests for trainable estimators."""

import math

import numpy as np
import pytest

from channels.gaussian import rho_for_target_mi
from estimators.estimator import MiEstimator
from models.errors import ConfigurationError, DivergenceError
from nn.mlp import mlp_new
from sampling.batches import gaussian_pair_batch
from sampling.rng import Rng
from sampling.shuffles import Shuffle, derange, permute_naive

FAMILIES = ["kl_dime", "gan_dime", "hd_dime", "gamma_dime(2)", "mine", "nwj", "smile(5)", "cpc"]


def train(
    family: str,
    d: int,
    n: int,
    mi: float,
    iters: int,
    seed: int = 0,
    mode: str = "shift",
    hidden: tuple[int, ...] = (64, 64),
    lr: float = 1e-3,
    **kwargs,
):
    rng = Rng(seed)
    estimator = MiEstimator.build(family, d, d, rng.child_seed(0), hidden=hidden, lr=lr, **kwargs)
    data = rng.child(1)
    rho = rho_for_target_mi(d, mi)
    estimates = []
    for _ in range(iters):
        batch = gaussian_pair_batch(d, rho, n, data)
        shuffle = permute_naive(n, data) if mode == "naive" else derange(n, mode, data)
        estimator.train_step(batch, shuffle)
        estimates.append(estimator.last_estimate.value_nats)
    return estimator, estimates


@pytest.mark.parametrize("family", FAMILIES)
def test_train_step_updates_state(family):
    estimator, estimates = train(family, d=2, n=16, mi=1.0, iters=3)
    assert estimator.iteration == 3
    assert len(estimates) == 3
    assert all(math.isfinite(value) for value in estimates)
    assert estimator.last_estimate.family == estimator.family.tag


def test_build_uses_family_output_activation():
    assert MiEstimator.build("gan_dime", 1, 1, 0, hidden=(4,)).net.activations[-1].name == "sigmoid"
    assert MiEstimator.build("mine", 1, 1, 0, hidden=(4,)).net.layer_dims == [2, 4, 1]


def test_mismatched_output_activation_is_rejected():
    net = mlp_new([2, 4, 1], ["relu", "softplus"], seed=0)
    with pytest.raises(ConfigurationError):
        MiEstimator("gan_dime", net)


def test_fixed_points_are_rejected_unless_allowed(rng):
    estimator = MiEstimator.build("kl_dime", 1, 1, 0, hidden=(4,))
    batch = gaussian_pair_batch(1, 0.5, 8, rng)
    with pytest.raises(ConfigurationError):
        estimator.train_step(batch, Shuffle.identity(8))
    estimator.allow_fixed_points = True
    estimator.train_step(batch, Shuffle.identity(8))
    assert estimator.iteration == 1


def test_divergence_is_reported_with_family_and_iteration(rng):
    estimator = MiEstimator.build("nwj", 1, 1, 0, hidden=(4,))
    estimator.net.biases[-1][:] = 1e4
    batch = gaussian_pair_batch(1, 0.5, 8, rng)
    with pytest.raises(DivergenceError) as info:
        estimator.train_step(batch, derange(8, "shift", rng))
    assert info.value.family == "nwj"
    assert info.value.iteration == 0


def test_estimate_mi_without_shuffle_for_joint_only_families(rng):
    estimator = MiEstimator.build("hd_dime", 1, 1, 0, hidden=(4,))
    batch = gaussian_pair_batch(1, 0.5, 8, rng)
    assert math.isfinite(estimator.estimate_mi(batch).value_nats)
    with pytest.raises(ConfigurationError):
        MiEstimator.build("mine", 1, 1, 0, hidden=(4,)).estimate_mi(batch)


def test_cpc_estimate_never_exceeds_log_n():
    _, estimates = train("cpc", d=2, n=16, mi=6.0, iters=200)
    assert max(estimates) <= math.log(16) + 1e-12


@pytest.mark.slow
@pytest.mark.parametrize("family", ["kl_dime", "gan_dime", "hd_dime"])
def test_fdime_learns_two_nats(family):
    _, estimates = train(family, d=5, n=64, mi=2.0, iters=3000)
    assert np.mean(estimates[-200:]) == pytest.approx(2.0, abs=0.3)


@pytest.mark.slow
def test_naive_permutations_cap_kl_dime_near_log_n():
    _, naive = train(
        "kl_dime", d=20, n=128, mi=10.0, iters=4000, mode="naive", hidden=(256, 256), lr=5e-4, allow_fixed_points=True
    )
    _, deranged = train("kl_dime", d=20, n=128, mi=10.0, iters=4000, hidden=(256, 256), lr=5e-4)
    assert np.mean(naive[-100:]) <= math.log(128) + 0.2
    assert np.mean(deranged[-100:]) > 5.5
