"""Elementary samplers shared by the channel models."""

from typing import Sequence

import numpy as np

from models.errors import ConfigurationError
from sampling.rng import Rng

DISTRIBUTIONS = ("normal", "uniform", "bernoulli", "cauchy", "exponential")


def draw(dist: str, shape: "int | Sequence[int]", rng: Rng, **params: float) -> np.ndarray:
    """
    Draw i.i.d. samples of `dist` with the given parameters.

    Supported tags and parameters:
        normal(mean=0, std=1), uniform(low=0, high=1), bernoulli(p),
        cauchy(loc=0, scale=1) via tan(pi (u - 1/2)),
        exponential(rate=1).

    Raises:
        ConfigurationError: On an unknown tag or invalid parameter.
    """
    generator = rng.generator
    match dist:
        case "normal":
            std = params.get("std", 1.0)
            if std < 0:
                raise ConfigurationError(f"normal std must be >= 0, got {std}.")
            return params.get("mean", 0.0) + std * generator.standard_normal(shape)
        case "uniform":
            low, high = params.get("low", 0.0), params.get("high", 1.0)
            if not high > low:
                raise ConfigurationError(f"uniform needs low < high, got [{low}, {high}].")
            return generator.uniform(low, high, size=shape)
        case "bernoulli":
            p = params.get("p")
            if p is None or not 0.0 <= p <= 1.0:
                raise ConfigurationError(f"bernoulli p must lie in [0, 1], got {p}.")
            return (generator.random(shape) < p).astype(np.float64)
        case "cauchy":
            scale = params.get("scale", 1.0)
            if scale <= 0:
                raise ConfigurationError(f"cauchy scale must be > 0, got {scale}.")
            u = generator.random(shape)
            return params.get("loc", 0.0) + scale * np.tan(np.pi * (u - 0.5))
        case "exponential":
            rate = params.get("rate", 1.0)
            if rate <= 0:
                raise ConfigurationError(f"exponential rate must be > 0, got {rate}.")
            return generator.standard_exponential(shape) / rate
        case _:
            raise ConfigurationError(f"Unknown distribution tag: {dist!r}")
