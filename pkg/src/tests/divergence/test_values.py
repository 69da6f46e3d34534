"""Tests for f-divergence generators and value functions."""

import math

import numpy as np
import pytest

from divergence.generators import GAN, GENERATORS, HD, KL, get_generator
from divergence.values import (
    MineEma,
    log_mean_exp,
    value_capacity,
    value_cpc,
    value_fdime,
    value_fenchel,
    value_gamma,
    value_kl_permuted,
    value_mine,
    value_nwj,
    value_smile,
)
from models.errors import ConfigurationError, NumericError
from models.estimates import MiEstimate


def central_difference(fn, point, step=1e-6):
    grad = np.zeros_like(point)
    for index in range(point.size):
        plus, minus = point.copy(), point.copy()
        plus[index] += step
        minus[index] -= step
        grad[index] = (fn(plus) - fn(minus)) / (2 * step)
    return grad


@pytest.mark.parametrize("gen", [KL, GAN, HD], ids=lambda g: g.name)
def test_closed_form_matches_generic_fenchel(gen, rng):
    d_joint = 0.2 + 0.6 * rng.generator.random(7)
    d_marg = 0.2 + 0.6 * rng.generator.random(9)
    closed = value_fdime(gen, d_joint, d_marg).total
    assert closed == pytest.approx(value_fenchel(gen, d_joint, d_marg), abs=1e-12)


@pytest.mark.parametrize("gen", [KL, GAN, HD], ids=lambda g: g.name)
def test_value_vanishes_at_unit_ratio(gen):
    d = gen.optimal_discriminator(np.ones(5))
    assert value_fdime(gen, d, d).total == pytest.approx(0.0, abs=1e-15)
    assert float(gen.f(np.array(1.0))) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("gen", [KL, GAN, HD], ids=lambda g: g.name)
def test_readout_inverts_optimal_discriminator(gen):
    log_r = np.array([-3.0, -0.5, 0.0, 1.2, 4.0])
    d = gen.optimal_discriminator(np.exp(log_r))
    assert np.allclose(gen.readout(d), log_r, atol=1e-12)


def test_gan_offset_is_log_four():
    assert GAN.offset == math.log(4.0)


@pytest.mark.parametrize(
    "name, evaluate",
    [
        ("kl", lambda d: value_fdime(KL, d[:5], d[5:])),
        ("gan", lambda d: value_fdime(GAN, d[:5], d[5:])),
        ("hd", lambda d: value_fdime(HD, d[:5], d[5:])),
        ("gamma", lambda d: value_gamma(2.5, d[:5], d[5:])),
        ("capacity", lambda d: value_capacity(0.7, d[:5], d[5:])),
        ("nwj", lambda d: value_nwj(d[:5], d[5:])),
    ],
)
def test_gradients_match_finite_differences(name, evaluate, rng):
    point = 0.15 + 0.7 * rng.generator.random(10)
    evaluation = evaluate(point)
    analytic = np.concatenate((evaluation.grad_joint, evaluation.grad_marginal))
    numeric = central_difference(lambda p: evaluate(p).total, point)
    assert np.allclose(analytic, numeric, rtol=1e-5, atol=1e-9), name


def test_cpc_gradient_matches_finite_differences(rng):
    scores = rng.generator.standard_normal((4, 4))
    analytic = value_cpc(scores).grad_joint.reshape(-1)
    numeric = central_difference(lambda s: value_cpc(s.reshape(4, 4)).total, scores.reshape(-1))
    assert np.allclose(analytic, numeric, rtol=1e-5, atol=1e-9)


def test_cpc_is_bounded_by_log_n(rng):
    scores = 50.0 * np.eye(8) + rng.generator.standard_normal((8, 8))
    value = value_cpc(scores).total
    assert value <= math.log(8) + 1e-12
    assert value == pytest.approx(math.log(8), abs=1e-6)


def test_cpc_estimate_absorbs_rounding_above_log_n(rng):
    """
    Test that large diagonal scores, whose log-sum-exp rounds a few ulps past
    log N, still give a valid CPC estimate pinned at the ceiling.
    """
    for _ in range(50):
        scores = rng.generator.standard_normal((64, 64))
        np.fill_diagonal(scores, 1e5)

        estimate = MiEstimate(value_nats=value_cpc(scores).total, n_samples=64, family="cpc")

        assert estimate.value_nats <= math.log(64)
        assert estimate.value_nats == pytest.approx(math.log(64))


@pytest.mark.parametrize("value", [math.log(64) + 1e-3, math.inf, math.nan])
def test_invalid_cpc_estimate_is_a_numeric_error(value):
    with pytest.raises(NumericError):
        MiEstimate(value_nats=value, n_samples=64, family="cpc")


def test_cpc_needs_square_scores():
    with pytest.raises(ConfigurationError):
        value_cpc(np.zeros((2, 3)))


def test_fdime_rejects_out_of_domain_outputs():
    with pytest.raises(NumericError) as info:
        value_fdime(GAN, np.array([0.5, 1.5]), np.array([0.5]))
    assert info.value.family == "gan"


def test_gamma_one_matches_kl_shifted():
    d_joint, d_marg = np.array([0.5, 2.0]), np.array([1.5, 0.3])
    assert value_gamma(1.0, d_joint, d_marg).total + 1.0 == pytest.approx(
        value_fdime(KL, d_joint, d_marg).total
    )


def test_gamma_rejects_non_positive_gamma():
    with pytest.raises(ConfigurationError):
        value_gamma(0.0, np.ones(2), np.ones(2))


def test_log_mean_exp_is_stable():
    assert log_mean_exp(np.array([1000.0, 1000.0])) == pytest.approx(1000.0)


def test_mine_ema_tracks_partition(rng):
    t_joint, t_marg = rng.generator.standard_normal(16), rng.generator.standard_normal(16)
    evaluation, ema = value_mine(t_joint, t_marg)
    assert ema.log_value == pytest.approx(evaluation.marginal_term)
    _, ema_two = value_mine(t_joint, t_marg + 1.0, ema)
    expected = np.logaddexp(math.log(0.9) + ema.log_value, math.log(0.1) + evaluation.marginal_term + 1.0)
    assert ema_two.log_value == pytest.approx(expected)


def test_mine_ema_decay_range():
    with pytest.raises(ConfigurationError):
        MineEma(decay=1.0)


@pytest.mark.parametrize("tau", [1.0, 5.0])
def test_smile_clips_marginal_scores(tau):
    t_joint = np.zeros(3)
    t_marg = np.full(3, 100.0)
    assert value_smile(t_joint, t_marg, tau).total == pytest.approx(-tau)


def test_smile_infinite_tau_is_mine(rng):
    t_joint, t_marg = rng.generator.standard_normal(8), rng.generator.standard_normal(8)
    assert value_smile(t_joint, t_marg, math.inf).total == pytest.approx(value_mine(t_joint, t_marg)[0].total)


@pytest.mark.parametrize("shift", [-3.0, 0.0, 1.0, 4.0])
def test_mine_is_never_below_nwj(shift, rng):
    for _ in range(20):
        t_joint = rng.generator.standard_normal(32) + shift
        t_marg = rng.generator.standard_normal(32) + shift
        assert value_mine(t_joint, t_marg)[0].total >= value_nwj(t_joint, t_marg).total


def test_nwj_overflow_is_numeric_error():
    with pytest.raises(NumericError):
        value_nwj(np.zeros(2), np.array([1e4, 0.0]))


def test_permuted_value_is_maximised_by_ratio_without_fixed_points():
    p, q = np.array([0.5, 0.3, 0.2]), np.array([0.2, 0.3, 0.5])
    best = value_kl_permuted(p / q, p, q, n=10, k=0)
    assert best == pytest.approx(float(np.sum(p * np.log(p / q))))
    assert value_kl_permuted(1.1 * p / q, p, q, n=10, k=0) < best


def test_get_generator_unknown():
    with pytest.raises(ConfigurationError):
        get_generator("js")
    assert set(GENERATORS) == {"kl", "gan", "hd"}
