"""Additive noise models and the elementary non-Gaussian channels."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from models.errors import ConfigurationError
from sampling.distributions import draw
from sampling.rng import Rng


@dataclass(frozen=True)
class NakagamiNoiseModel:
    """
    Complex noise with independent Gaussian real and imaginary parts.

    Approximates Nakagami-m envelope noise for 1/2 <= m <= 1 by splitting the
    power `sigma2` as `sigma2 (1 + b) / 2` and `sigma2 (1 - b) / 2` with
    `b = sqrt(1/m - 1)`.
    """

    m: float
    sigma2: float = 1.0

    def __post_init__(self):
        if not 0.5 <= self.m <= 1.0:
            raise ConfigurationError(f"Nakagami m must lie in [0.5, 1], got {self.m}.")
        if self.sigma2 < 0:
            raise ConfigurationError(f"Noise power must be >= 0, got {self.sigma2}.")

    @property
    def b(self) -> float:
        return math.sqrt(1.0 / self.m - 1.0)

    @property
    def component_variances(self) -> tuple[float, float]:
        return self.sigma2 * (1.0 + self.b) / 2.0, self.sigma2 * (1.0 - self.b) / 2.0


@dataclass(frozen=True)
class MiddletonNoiseModel:
    """
    Bernoulli-Gaussian impulsive noise `(1 - P) N(0, s) + P N(0, B s)`.

    Attributes:
        p: Impulse probability.
        b: Variance multiplier of the impulsive component.
        sigma_b2: Background variance `s`.
    """

    p: float
    b: float
    sigma_b2: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ConfigurationError(f"Impulse probability must lie in [0, 1], got {self.p}.")
        if self.b <= 0 or self.sigma_b2 <= 0:
            raise ConfigurationError(
                f"B and sigma_b2 must be positive, got B={self.b}, sigma_b2={self.sigma_b2}."
            )

    @property
    def variance(self) -> float:
        return self.sigma_b2 * (1.0 - self.p + self.p * self.b)

    def pdf(self, n: np.ndarray) -> np.ndarray:
        base = math.sqrt(self.sigma_b2)
        return (1.0 - self.p) * norm.pdf(n, scale=base) + self.p * norm.pdf(
            n, scale=base * math.sqrt(self.b)
        )


def nakagami_noise(model: NakagamiNoiseModel, n: int, rng: Rng) -> np.ndarray:
    """Noise batch of shape `(2, n)`: row 0 real part, row 1 imaginary part."""
    var_re, var_im = model.component_variances
    z = rng.generator.standard_normal((2, n))
    return np.vstack((math.sqrt(var_re) * z[0], math.sqrt(var_im) * z[1]))


def middleton_noise(model: MiddletonNoiseModel, n: int, rng: Rng) -> np.ndarray:
    """Noise batch of shape `(1, n)`; the Bernoulli gate picks the impulsive variance."""
    gate = draw("bernoulli", (1, n), rng, p=model.p)
    scale = math.sqrt(model.sigma_b2) * np.where(gate > 0, math.sqrt(model.b), 1.0)
    return scale * rng.generator.standard_normal((1, n))


def cauchy_noise(gamma: float, n: int, rng: Rng) -> np.ndarray:
    """Cauchy(0, gamma) noise of shape `(1, n)`."""
    return draw("cauchy", (1, n), rng, scale=gamma)


def rayleigh_equiv_output(s: np.ndarray, rng: Rng) -> np.ndarray:
    """
    Output of the Rayleigh-equivalent channel `p(v | s) = s e^{-s v}`.

    Raises:
        ConfigurationError: If any `s` lies outside `(0, 1]`.
    """
    s = np.asarray(s, dtype=np.float64)
    if np.any(s <= 0) or np.any(s > 1.0):
        raise ConfigurationError("Rayleigh-equivalent inputs must lie in (0, 1].")
    return draw("exponential", s.shape, rng) / s


def sqrt_warp(x: np.ndarray) -> np.ndarray:
    return np.sign(x) * np.sqrt(np.abs(x))


def nonlinear_sqrt_channel(x: np.ndarray, sigma: float, rng: Rng) -> np.ndarray:
    """`y = sign(x) sqrt(|x|) + sigma n`."""
    if sigma < 0:
        raise ConfigurationError(f"sigma must be >= 0, got {sigma}.")
    x = np.asarray(x, dtype=np.float64)
    return sqrt_warp(x) + sigma * rng.generator.standard_normal(x.shape)
