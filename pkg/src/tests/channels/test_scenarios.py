"""Tests for the channel registry, noise models and reparameterised gradients."""

import numpy as np
import pytest
from scipy.integrate import trapezoid

from channels.noise import MiddletonNoiseModel, NakagamiNoiseModel, rayleigh_equiv_output
from channels.scenarios import CHANNELS, AwgnChannel, build_channel
from models.errors import ConfigurationError
from sampling.rng import Rng

SCENARIOS = [
    ("awgn", {"sigma": 0.5}),
    ("awgn", {"sigma": 0.5, "d": 3}),
    ("independent", {}),
    ("cauchy", {"gamma": 0.7}),
    ("nakagami", {"m": 0.7}),
    ("rayleigh", {}),
    ("middleton", {"p": 0.1, "b": 4.0}),
    ("sqrt", {"sigma": 0.3}),
]


def test_registry_names():
    assert set(CHANNELS) == {"awgn", "independent", "cauchy", "nakagami", "rayleigh", "middleton", "sqrt"}


@pytest.mark.parametrize("name, params", SCENARIOS)
def test_apply_shapes(name, params, rng):
    channel = build_channel(name, **params)
    x = 0.5 + rng.generator.random((channel.dim, 7))
    y = channel.apply(x, rng)
    assert y.shape == (channel.dim, 7)
    assert np.all(np.isfinite(y))


@pytest.mark.parametrize("name, params", SCENARIOS)
def test_vjp_matches_finite_differences(name, params, rng):
    channel = build_channel(name, **params)
    x = 0.5 + rng.generator.random((channel.dim, 4))
    noise = channel.sample_noise(4, rng)
    grad_y = rng.generator.standard_normal((channel.dim, 4))
    analytic = channel.vjp(x, noise, grad_y)
    numeric = np.zeros_like(x)
    step = 1e-6
    for index in np.ndindex(x.shape):
        plus, minus = x.copy(), x.copy()
        plus[index] += step
        minus[index] -= step
        numeric[index] = np.sum(grad_y * (channel.transform(plus, noise) - channel.transform(minus, noise))) / (2 * step)
    assert np.allclose(analytic, numeric, rtol=1e-5, atol=1e-8)


def test_build_channel_rejects_unknown_name_and_params():
    with pytest.raises(ConfigurationError):
        build_channel("rician")
    with pytest.raises(ConfigurationError):
        build_channel("awgn", gamma=1.0)


def test_input_dimension_is_checked(rng):
    with pytest.raises(ConfigurationError):
        AwgnChannel(sigma=1.0, d=2).apply(np.zeros((1, 3)), rng)


def test_independent_channel_has_zero_mi():
    assert build_channel("independent").true_mi() == 0.0


def test_awgn_log_likelihood_is_gaussian():
    channel = AwgnChannel(sigma=2.0)
    value = channel.log_likelihood(np.array([[1.0]]), np.array([1.0]))
    assert value[0] == pytest.approx(-np.log(2.0 * np.sqrt(2 * np.pi)))


def test_middleton_density_integrates_to_one():
    model = MiddletonNoiseModel(p=0.2, b=9.0, sigma_b2=0.5)
    grid = np.linspace(-40, 40, 200001)
    assert trapezoid(model.pdf(grid), grid) == pytest.approx(1.0, abs=1e-6)
    assert model.variance == pytest.approx(0.5 * (0.8 + 0.2 * 9.0))


def test_middleton_noise_variance(rng):
    channel = build_channel("middleton", p=0.1, b=10.0, sigma_b2=1.0)
    noise = channel.sample_noise(200000, rng)
    assert np.var(noise) == pytest.approx(channel.model.variance, rel=0.05)


@pytest.mark.parametrize("m", [0.5, 0.75, 1.0])
def test_nakagami_splits_power(m, rng):
    model = NakagamiNoiseModel(m=m, sigma2=2.0)
    var_re, var_im = model.component_variances
    assert var_re + var_im == pytest.approx(2.0)
    noise = build_channel("nakagami", m=m, sigma2=2.0).sample_noise(100000, Rng(3))
    assert np.var(noise[0]) == pytest.approx(var_re, rel=0.05)


def test_nakagami_rejects_m_out_of_range():
    with pytest.raises(ConfigurationError):
        NakagamiNoiseModel(m=0.3)


def test_rayleigh_output_mean(rng):
    s = np.full((1, 100000), 0.25)
    assert np.mean(rayleigh_equiv_output(s, rng)) == pytest.approx(4.0, rel=0.03)
    with pytest.raises(ConfigurationError):
        rayleigh_equiv_output(np.array([[1.5]]), rng)


def test_rayleigh_inputs_are_reported_on_s():
    channel = build_channel("rayleigh")
    u = np.array([[0.0, 1.0, -1.0, 3.0]])
    assert channel.input_space(u).tolist() == pytest.approx([[1.0, 0.5, 0.5, 0.1]])
    assert channel.input_extent == 1.0


def test_additive_channels_report_raw_inputs():
    channel = build_channel("awgn", sigma=1.0)
    u = np.array([[-1.5, 0.0, 1.5]])
    assert channel.input_space(u) is u
    assert channel.input_extent is None


def test_cauchy_likelihood_needs_no_variance():
    channel = build_channel("cauchy", gamma=1.0)
    assert channel.log_likelihood(np.array([[0.0]]), np.array([0.0]))[0] == pytest.approx(-np.log(np.pi))


def test_sqrt_channel_warps_mean(rng):
    channel = build_channel("sqrt", sigma=0.0)
    y = channel.apply(np.array([[4.0, -9.0]]), rng)
    assert y.tolist() == [[2.0, -3.0]]
