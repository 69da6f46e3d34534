"""Tests for the input constraints and the hard output scalings."""

import math

import numpy as np
import pytest

from cortical.constraints import ConstraintSpec, apply_output_mode, constraint_penalty, output_mode_vjp
from models.errors import ConfigurationError

X = np.array([[0.3, -1.9, 2.4, 0.1, -0.7], [1.1, 0.2, -0.5, 1.7, -2.2]])


def numeric_gradient(func, x, step=1e-6):
    grad = np.zeros_like(x)
    for index in np.ndindex(x.shape):
        plus, minus = x.copy(), x.copy()
        plus[index] += step
        minus[index] -= step
        grad[index] = (func(plus) - func(minus)) / (2 * step)
    return grad


def test_no_penalty_inside_the_constraint():
    spec = ConstraintSpec(peak_a=10.0, avg_p=100.0)
    penalty, grad = constraint_penalty(X, spec)
    assert penalty == 0.0
    assert not grad.any()


def test_peak_hinge_is_a_per_sample_mean():
    spec = ConstraintSpec(peak_a=1.0)
    x = np.array([[0.5, 2.0, -3.0, 1.0]])
    penalty, _ = constraint_penalty(x, spec)
    assert penalty == pytest.approx((3.0 + 8.0) / 4)


def test_average_power_hinge():
    spec = ConstraintSpec(avg_p=1.0, lambda_p=2.0)
    x = np.array([[1.0, -3.0]])
    assert constraint_penalty(x, spec)[0] == pytest.approx(2.0 * (5.0 - 1.0))


@pytest.mark.parametrize(
    "spec",
    [
        ConstraintSpec(peak_a=1.5, lambda_a=0.7),
        ConstraintSpec(avg_p=1.0),
        ConstraintSpec(peak_a=0.5, cauchy_gamma=1.0, lambda_log=3.0),
        ConstraintSpec(peak_a=1.0, avg_p=0.5),
    ],
)
def test_penalty_gradient(spec):
    _, grad = constraint_penalty(X, spec)
    numeric = numeric_gradient(lambda x: constraint_penalty(x, spec)[0], X)
    assert np.allclose(grad, numeric, atol=1e-6)


def test_logarithmic_constraint_replaces_the_peak_hinge():
    spec = ConstraintSpec(peak_a=1.0, cauchy_gamma=1.0)
    x = np.array([[0.0, 1.0]])
    # mean log(4 + x^2) - log 4 = log(5/4) / 2
    assert constraint_penalty(x, spec)[0] == pytest.approx(0.5 * math.log(1.25))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"peak_a": 0.0},
        {"avg_p": -1.0},
        {"lambda_a": -0.1},
        {"output_mode": "clip"},
        {"output_mode": "tanh_peak"},
        {"output_mode": "avg_power"},
        {"cauchy_gamma": 1.0},
    ],
)
def test_invalid_specs(kwargs):
    with pytest.raises(ConfigurationError):
        ConstraintSpec(**kwargs)


def test_is_constrained():
    assert not ConstraintSpec().is_constrained
    assert not ConstraintSpec(peak_a=1.0, lambda_a=0.0).is_constrained
    assert ConstraintSpec(peak_a=1.0, output_mode="tanh_peak", lambda_a=0.0).is_constrained


def test_tanh_peak_bounds_every_component():
    spec = ConstraintSpec(peak_a=1.5, output_mode="tanh_peak")
    x = apply_output_mode(100 * X, spec)
    assert np.all(np.abs(x) <= 1.5)


def test_avg_power_hits_the_budget_exactly():
    spec = ConstraintSpec(avg_p=2.0, output_mode="avg_power")
    x = apply_output_mode(X, spec)
    assert np.mean(np.sum(x**2, axis=0)) == pytest.approx(2.0, rel=1e-12)
    with pytest.raises(ConfigurationError):
        apply_output_mode(np.zeros((1, 3)), spec)


@pytest.mark.parametrize(
    "spec",
    [
        ConstraintSpec(),
        ConstraintSpec(peak_a=1.5, output_mode="tanh_peak"),
        ConstraintSpec(avg_p=2.0, output_mode="avg_power"),
    ],
)
def test_output_mode_vjp(spec):
    upstream = np.linspace(-1.0, 1.0, X.size).reshape(X.shape)
    analytic = output_mode_vjp(X, upstream, spec)
    numeric = numeric_gradient(lambda raw: float(np.sum(upstream * apply_output_mode(raw, spec))), X)
    assert np.allclose(analytic, numeric, atol=1e-6)
