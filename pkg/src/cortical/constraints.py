"""Input power constraints: hinge penalties and hard output scaling."""

import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from models.errors import ConfigurationError

OutputMode = Literal["identity", "tanh_peak", "avg_power"]
OUTPUT_MODES = ("identity", "tanh_peak", "avg_power")


@dataclass(frozen=True)
class ConstraintSpec:
    """
    Constraints on the generator's channel inputs.

    Attributes:
        peak_a: Peak amplitude A, `||x|| <= A`.
        avg_p: Average power P, `E||x||^2 <= P`.
        lambda_a: Weight of the peak hinge.
        lambda_p: Weight of the average-power hinge.
        cauchy_gamma: Noise scale of the logarithmic constraint
            `E[log(((A + γ)/A)^2 + (x/A)^2)] <= log 4`, which uses `peak_a` as A.
            When set, no peak hinge is applied.
        lambda_log: Weight of the logarithmic hinge.
        output_mode: Hard scaling applied to raw generator outputs.
    """

    peak_a: Optional[float] = None
    avg_p: Optional[float] = None
    lambda_a: float = 1.0
    lambda_p: float = 1.0
    cauchy_gamma: Optional[float] = None
    lambda_log: float = 1.0
    output_mode: OutputMode = "identity"

    def __post_init__(self):
        for name in ("peak_a", "avg_p", "cauchy_gamma"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ConfigurationError(f"{name} must be positive, got {value}.")
        if min(self.lambda_a, self.lambda_p, self.lambda_log) < 0:
            raise ConfigurationError("Penalty weights must be non-negative.")
        if self.output_mode not in OUTPUT_MODES:
            raise ConfigurationError(
                f"Unknown output mode {self.output_mode!r}; expected one of {OUTPUT_MODES}."
            )
        if self.output_mode == "tanh_peak" and self.peak_a is None:
            raise ConfigurationError("tanh_peak scaling needs peak_a.")
        if self.output_mode == "avg_power" and self.avg_p is None:
            raise ConfigurationError("avg_power scaling needs avg_p.")
        if self.cauchy_gamma is not None and self.peak_a is None:
            raise ConfigurationError("The logarithmic constraint needs peak_a as its A.")

    @property
    def is_constrained(self) -> bool:
        return (
            self.output_mode != "identity"
            or (self.peak_a is not None and self.lambda_a > 0)
            or (self.avg_p is not None and self.lambda_p > 0)
            or (self.cauchy_gamma is not None and self.lambda_log > 0)
        )


def constraint_penalty(x: np.ndarray, spec: ConstraintSpec) -> tuple[float, np.ndarray]:
    """
    Hinge penalties subtracted from the generator objective, with their gradient.

    `lambda_a mean_j max(||x_j||^2 - A^2, 0)`
    `+ lambda_p max(mean_j ||x_j||^2 - P, 0)`
    `+ lambda_log max(mean_j log(((A + γ)/A)^2 + (x_j/A)^2) - log 4, 0)`

    Args:
        x: Channel inputs of shape `(d, N)`.

    Returns:
        The penalty and its gradient w.r.t. `x`.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[1]
    power = np.sum(x**2, axis=0)
    penalty = 0.0
    grad = np.zeros_like(x)

    if spec.peak_a is not None and spec.lambda_a > 0 and spec.cauchy_gamma is None:
        excess = power - spec.peak_a**2
        active = excess > 0
        penalty += spec.lambda_a * float(np.sum(excess[active])) / n
        grad += spec.lambda_a * 2.0 * x * active / n

    if spec.avg_p is not None and spec.lambda_p > 0:
        excess = float(np.mean(power)) - spec.avg_p
        if excess > 0:
            penalty += spec.lambda_p * excess
            grad += spec.lambda_p * 2.0 * x / n

    if spec.cauchy_gamma is not None and spec.lambda_log > 0:
        a = spec.peak_a
        offset = ((a + spec.cauchy_gamma) / a) ** 2
        inner = offset + power / a**2
        excess = float(np.mean(np.log(inner))) - math.log(4.0)
        if excess > 0:
            penalty += spec.lambda_log * excess
            grad += spec.lambda_log * (2.0 * x / a**2) / inner / n

    return penalty, grad


def apply_output_mode(raw: np.ndarray, spec: ConstraintSpec) -> np.ndarray:
    """
    Map raw generator outputs to channel inputs.

    `tanh_peak` squashes each component into `[-A, A]`; `avg_power` rescales
    the batch so that `mean_j ||x_j||^2 = P` exactly.
    """
    match spec.output_mode:
        case "tanh_peak":
            return spec.peak_a * np.tanh(raw)
        case "avg_power":
            rms = math.sqrt(float(np.mean(np.sum(raw**2, axis=0))))
            if rms == 0.0:
                raise ConfigurationError("Cannot rescale an all-zero generator batch.")
            return math.sqrt(spec.avg_p) * raw / rms
        case _:
            return raw


def output_mode_vjp(raw: np.ndarray, grad_x: np.ndarray, spec: ConstraintSpec) -> np.ndarray:
    """Gradient w.r.t. the raw outputs given the gradient w.r.t. the scaled ones."""
    match spec.output_mode:
        case "tanh_peak":
            return grad_x * spec.peak_a * (1.0 - np.tanh(raw) ** 2)
        case "avg_power":
            n = raw.shape[1]
            rms2 = float(np.mean(np.sum(raw**2, axis=0)))
            scale = math.sqrt(spec.avg_p / rms2)
            return scale * (grad_x - raw * float(np.sum(grad_x * raw)) / (n * rms2))
        case _:
            return grad_x
