"""Elementwise activations and their derivatives."""

import re
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from models.errors import ConfigurationError

DEFAULT_LEAKY_SLOPE = 0.2

ACTIVATION_NAMES = ("relu", "leaky_relu", "softplus", "sigmoid", "tanh", "identity")

_TAG_PATTERN = re.compile(r"^(?P<name>[a-z_]+)(\((?P<slope>[-+0-9.eE]+)\))?$")


def softplus(t: np.ndarray) -> np.ndarray:
    """Overflow-safe log(1 + e^t)."""
    return np.maximum(t, 0.0) + np.log1p(np.exp(-np.abs(t)))


@dataclass(frozen=True)
class Activation:
    """
    An activation tag with its optional leaky slope.

    Attributes:
        name: One of `ACTIVATION_NAMES`.
        slope: Negative-side slope, only meaningful for `leaky_relu`.
    """

    name: str
    slope: float = DEFAULT_LEAKY_SLOPE

    @classmethod
    def parse(cls, tag: "str | Activation") -> "Activation":
        """
        Build an activation from a tag such as `relu` or `leaky_relu(0.1)`.

        Raises:
            ConfigurationError: If the tag is unknown or malformed.
        """
        if isinstance(tag, Activation):
            return tag
        match = _TAG_PATTERN.match(tag.strip())
        if match is None or match.group("name") not in ACTIVATION_NAMES:
            raise ConfigurationError(f"Unknown activation tag: {tag!r}")
        name = match.group("name")
        slope = match.group("slope")
        if slope is not None and name != "leaky_relu":
            raise ConfigurationError(f"Activation {name!r} takes no parameter.")
        return cls(name=name, slope=float(slope) if slope else DEFAULT_LEAKY_SLOPE)

    @property
    def tag(self) -> str:
        if self.name == "leaky_relu":
            return f"leaky_relu({self.slope!r})"
        return self.name

    def apply(self, z: np.ndarray) -> np.ndarray:
        match self.name:
            case "relu":
                return np.maximum(z, 0.0)
            case "leaky_relu":
                return np.where(z > 0, z, self.slope * z)
            case "softplus":
                return softplus(z)
            case "sigmoid":
                return expit(z)
            case "tanh":
                return np.tanh(z)
            case _:
                return z

    def derivative(self, z: np.ndarray) -> np.ndarray:
        """Derivative of the activation evaluated at the pre-activation `z`."""
        match self.name:
            case "relu":
                return (z > 0).astype(np.float64)
            case "leaky_relu":
                return np.where(z > 0, 1.0, self.slope)
            case "softplus":
                return expit(z)
            case "sigmoid":
                s = expit(z)
                return s * (1.0 - s)
            case "tanh":
                return 1.0 - np.tanh(z) ** 2
            case _:
                return np.ones_like(z)
