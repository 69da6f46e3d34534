"""Reparameterised channel scenarios.

A scenario splits `apply` into `sample_noise` and a deterministic
`transform(x, noise)`, so generators trained through the channel can take
vector-Jacobian products with the noise held fixed.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, fields
from typing import ClassVar, Optional

import numpy as np
from scipy.stats import cauchy, norm

from channels.noise import (
    MiddletonNoiseModel,
    NakagamiNoiseModel,
    cauchy_noise,
    middleton_noise,
    nakagami_noise,
    sqrt_warp,
)
from models.errors import ConfigurationError
from sampling.rng import Rng

_SQRT_FLOOR = 1e-12


class ChannelScenario(ABC):
    """Memoryless stochastic map from `(dim, N)` inputs to `(dim, N)` outputs."""

    name: ClassVar[str]
    reparameterizable: ClassVar[bool] = True
    # range of input_space when it differs from the generator output
    input_extent: ClassVar[Optional[float]] = None

    @property
    def dim(self) -> int:
        return 1

    @abstractmethod
    def sample_noise(self, n: int, rng: Rng) -> np.ndarray: ...

    @abstractmethod
    def transform(self, x: np.ndarray, noise: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def vjp(self, x: np.ndarray, noise: np.ndarray, grad_y: np.ndarray) -> np.ndarray:
        """Gradient w.r.t. `x` of `sum(grad_y * transform(x, noise))`."""

    def log_likelihood(self, y: np.ndarray, symbol: np.ndarray) -> np.ndarray:
        """
        log p(y | x = symbol) for each column of `y`.

        Raises:
            ConfigurationError: If the scenario has no usable density.
        """
        raise ConfigurationError(f"Channel {self.name!r} has no closed-form likelihood.")

    def true_mi(self) -> Optional[float]:
        return None

    def input_space(self, x: np.ndarray) -> np.ndarray:
        """Generator outputs expressed in the space where the channel input is reported."""
        return x

    def check_input(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[0] != self.dim:
            raise ConfigurationError(
                f"Channel {self.name!r} expects inputs of shape ({self.dim}, N), got {x.shape}."
            )
        return x

    def apply(self, x: np.ndarray, rng: Rng) -> np.ndarray:
        x = self.check_input(x)
        return self.transform(x, self.sample_noise(x.shape[1], rng))


@dataclass(frozen=True)
class AwgnChannel(ChannelScenario):
    name: ClassVar[str] = "awgn"
    sigma: float = 1.0
    d: int = 1

    def __post_init__(self):
        if self.sigma < 0 or self.d < 1:
            raise ConfigurationError(f"awgn needs sigma >= 0 and d >= 1, got {self}.")

    @property
    def dim(self) -> int:
        return self.d

    def sample_noise(self, n: int, rng: Rng) -> np.ndarray:
        return self.sigma * rng.generator.standard_normal((self.d, n))

    def transform(self, x, noise):
        return x + noise

    def vjp(self, x, noise, grad_y):
        return grad_y

    def log_likelihood(self, y, symbol):
        mean = np.asarray(symbol, dtype=np.float64).reshape(-1, 1)
        return np.sum(norm.logpdf(y, loc=mean, scale=self.sigma), axis=0)


@dataclass(frozen=True)
class IndependentChannel(ChannelScenario):
    """Output is pure noise; the input is ignored."""

    name: ClassVar[str] = "independent"
    sigma: float = 1.0
    d: int = 1

    def __post_init__(self):
        if self.sigma <= 0 or self.d < 1:
            raise ConfigurationError(f"independent needs sigma > 0 and d >= 1, got {self}.")

    @property
    def dim(self) -> int:
        return self.d

    def sample_noise(self, n: int, rng: Rng) -> np.ndarray:
        return self.sigma * rng.generator.standard_normal((self.d, n))

    def transform(self, x, noise):
        return noise.copy()

    def vjp(self, x, noise, grad_y):
        return np.zeros_like(x)

    def log_likelihood(self, y, symbol):
        return np.sum(norm.logpdf(y, scale=self.sigma), axis=0)

    def true_mi(self) -> Optional[float]:
        return 0.0


@dataclass(frozen=True)
class CauchyChannel(ChannelScenario):
    name: ClassVar[str] = "cauchy"
    gamma: float = 1.0

    def __post_init__(self):
        if self.gamma <= 0:
            raise ConfigurationError(f"Cauchy gamma must be positive, got {self.gamma}.")

    def sample_noise(self, n: int, rng: Rng) -> np.ndarray:
        return cauchy_noise(self.gamma, n, rng)

    def transform(self, x, noise):
        return x + noise

    def vjp(self, x, noise, grad_y):
        return grad_y

    def log_likelihood(self, y, symbol):
        return np.sum(cauchy.logpdf(y, loc=np.reshape(symbol, (-1, 1)), scale=self.gamma), axis=0)


@dataclass(frozen=True)
class NakagamiChannel(ChannelScenario):
    """Complex input as a `(2, N)` batch plus Nakagami-m approximated noise."""

    name: ClassVar[str] = "nakagami"
    m: float = 1.0
    sigma2: float = 1.0

    @property
    def model(self) -> NakagamiNoiseModel:
        return NakagamiNoiseModel(m=self.m, sigma2=self.sigma2)

    def __post_init__(self):
        NakagamiNoiseModel(m=self.m, sigma2=self.sigma2)

    @property
    def dim(self) -> int:
        return 2

    def sample_noise(self, n: int, rng: Rng) -> np.ndarray:
        return nakagami_noise(self.model, n, rng)

    def transform(self, x, noise):
        return x + noise

    def vjp(self, x, noise, grad_y):
        return grad_y

    def log_likelihood(self, y, symbol):
        var_re, var_im = self.model.component_variances
        if var_im == 0.0 or var_re == 0.0:
            raise ConfigurationError("Degenerate Nakagami noise (m = 0.5) has no density.")
        mean = np.reshape(symbol, (-1, 1))
        scales = np.sqrt([[var_re], [var_im]])
        return np.sum(norm.logpdf(y, loc=mean, scale=scales), axis=0)


@dataclass(frozen=True)
class RayleighEquivChannel(ChannelScenario):
    """
    Amplitude `u` mapped to `s = 1 / (1 + u^2)`, output `v ~ Exp(rate s)`.

    Written as `v = e (1 + u^2)` with `e ~ Exp(1)` so the output is
    differentiable in `u`.
    """

    name: ClassVar[str] = "rayleigh"
    input_extent: ClassVar[Optional[float]] = 1.0

    def sample_noise(self, n: int, rng: Rng) -> np.ndarray:
        return rng.generator.standard_exponential((1, n))

    def transform(self, x, noise):
        return noise * (1.0 + x**2)

    def vjp(self, x, noise, grad_y):
        return grad_y * 2.0 * x * noise

    def input_space(self, x):
        return 1.0 / (1.0 + np.asarray(x) ** 2)

    def log_likelihood(self, y, symbol):
        s = 1.0 / (1.0 + float(np.ravel(symbol)[0]) ** 2)
        y = np.asarray(y, dtype=np.float64)
        return np.where(y[0] >= 0, math.log(s) - s * y[0], -np.inf)


@dataclass(frozen=True)
class MiddletonChannel(ChannelScenario):
    name: ClassVar[str] = "middleton"
    p: float = 0.05
    b: float = 5.0
    sigma_b2: float = 1.0

    @property
    def model(self) -> MiddletonNoiseModel:
        return MiddletonNoiseModel(p=self.p, b=self.b, sigma_b2=self.sigma_b2)

    def __post_init__(self):
        MiddletonNoiseModel(p=self.p, b=self.b, sigma_b2=self.sigma_b2)

    def sample_noise(self, n: int, rng: Rng) -> np.ndarray:
        return middleton_noise(self.model, n, rng)

    def transform(self, x, noise):
        return x + noise

    def vjp(self, x, noise, grad_y):
        return grad_y

    def log_likelihood(self, y, symbol):
        residual = np.asarray(y, dtype=np.float64) - np.reshape(symbol, (-1, 1))
        return np.sum(np.log(np.maximum(self.model.pdf(residual), 1e-300)), axis=0)


@dataclass(frozen=True)
class SqrtChannel(ChannelScenario):
    """`y = sign(x) sqrt(|x|) + sigma n`."""

    name: ClassVar[str] = "sqrt"
    sigma: float = 1.0

    def __post_init__(self):
        if self.sigma < 0:
            raise ConfigurationError(f"sigma must be >= 0, got {self.sigma}.")

    def sample_noise(self, n: int, rng: Rng) -> np.ndarray:
        return self.sigma * rng.generator.standard_normal((1, n))

    def transform(self, x, noise):
        return sqrt_warp(x) + noise

    def vjp(self, x, noise, grad_y):
        return grad_y * 0.5 / np.sqrt(np.maximum(np.abs(x), _SQRT_FLOOR))

    def log_likelihood(self, y, symbol):
        mean = sqrt_warp(np.reshape(np.asarray(symbol, dtype=np.float64), (-1, 1)))
        return np.sum(norm.logpdf(y, loc=mean, scale=self.sigma), axis=0)


CHANNELS: dict[str, type[ChannelScenario]] = {
    cls.name: cls
    for cls in (
        AwgnChannel,
        IndependentChannel,
        CauchyChannel,
        NakagamiChannel,
        RayleighEquivChannel,
        MiddletonChannel,
        SqrtChannel,
    )
}


def build_channel(name: str, **params: float) -> ChannelScenario:
    """
    Instantiate a registered scenario.

    Raises:
        ConfigurationError: On an unknown name or unexpected parameter.
    """
    try:
        cls = CHANNELS[name]
    except KeyError:
        raise ConfigurationError(
            f"Unknown channel {name!r}; expected one of {sorted(CHANNELS)}."
        ) from None
    allowed = {f.name for f in fields(cls)}
    unknown = set(params) - allowed
    if unknown:
        raise ConfigurationError(
            f"Channel {name!r} does not take {sorted(unknown)}; allowed: {sorted(allowed)}."
        )
    return cls(**params)
