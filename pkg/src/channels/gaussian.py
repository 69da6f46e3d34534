"""Correlated Gaussian scenario: closed-form MI, correlation inversion and
the exact log density ratio, plus the MI-preserving output mappings."""

import math

import numpy as np

from models.errors import ConfigurationError

MAPPINGS = ("linear", "cubic", "half_cube", "asinh")


def _check_rho(rho: float) -> None:
    if not 0.0 <= rho < 1.0:
        raise ConfigurationError(f"rho must lie in [0, 1), got {rho}.")


def true_mi_gaussian(d: int, rho: float) -> float:
    """I = -(d/2) ln(1 - rho^2) in nats."""
    _check_rho(rho)
    return -0.5 * d * math.log1p(-(rho**2))


def rho_for_target_mi(d: int, mi: float) -> float:
    """Correlation giving `mi` nats over `d` independent components."""
    if mi < 0 or d < 1:
        raise ConfigurationError(f"Need mi >= 0 and d >= 1, got mi={mi}, d={d}.")
    return math.sqrt(-math.expm1(-2.0 * mi / d))


def gaussian_log_ratio(x: np.ndarray, y: np.ndarray, rho: float) -> np.ndarray:
    """
    log p(x, y) / (p(x) p(y)) for `y = rho x + sqrt(1 - rho^2) n`, per column.

    Args:
        x: Array of shape `(d, N)`.
        y: Array of shape `(d, N)`, unmapped.

    Returns:
        Vector of N log ratios, summed over the d components.
    """
    _check_rho(rho)
    one_minus = 1.0 - rho**2
    per_component = -0.5 * math.log(one_minus) - (
        rho**2 * x**2 - 2.0 * rho * x * y + rho**2 * y**2
    ) / (2.0 * one_minus)
    return np.sum(per_component, axis=0)


def apply_mapping(tag: str, y: np.ndarray) -> np.ndarray:
    """
    Elementwise strictly monotone warp of the channel output.

    Raises:
        ConfigurationError: On an unknown tag.
    """
    match tag:
        case "linear":
            return y
        case "cubic":
            return y**3
        case "half_cube":
            return np.sign(y) * np.abs(y) ** 1.5
        case "asinh":
            return np.arcsinh(y)
        case _:
            raise ConfigurationError(f"Unknown mapping {tag!r}; expected one of {MAPPINGS}.")


def invert_mapping(tag: str, y: np.ndarray) -> np.ndarray:
    match tag:
        case "linear":
            return y
        case "cubic":
            return np.cbrt(y)
        case "half_cube":
            return np.sign(y) * np.abs(y) ** (2.0 / 3.0)
        case "asinh":
            return np.sinh(y)
        case _:
            raise ConfigurationError(f"Unknown mapping {tag!r}; expected one of {MAPPINGS}.")


def mapped_log_ratio(x: np.ndarray, y_mapped: np.ndarray, rho: float, tag: str) -> np.ndarray:
    """Log ratio for mapped outputs; the Jacobians cancel, so pull back and reuse."""
    return gaussian_log_ratio(x, invert_mapping(tag, y_mapped), rho)
