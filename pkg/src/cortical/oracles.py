"""Closed-form capacities and bounds, all in nats."""

import math

import numpy as np
from scipy.integrate import quad
from scipy.stats import cauchy, norm

from models.errors import ConfigurationError

QUANTILE_LEVELS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


def mckellips_bound(a: float) -> float:
    """Upper bound `min(ln(1 + 2A/sqrt(2 pi e)), ln(1 + A^2) / 2)` for the scalar peak-limited AWGN."""
    if a < 0:
        raise ConfigurationError(f"Peak amplitude must be >= 0, got {a}.")
    return min(math.log1p(2.0 * a / math.sqrt(2.0 * math.pi * math.e)), 0.5 * math.log1p(a**2))


def awgn_capacity(snr: float, d: int = 1) -> float:
    """`(d/2) ln(1 + snr/d)`; with `snr = A^2` this is the trivial peak-power bound."""
    if snr < 0 or d < 1:
        raise ConfigurationError(f"Need snr >= 0 and d >= 1, got snr={snr}, d={d}.")
    return 0.5 * d * math.log1p(snr / d)


def binary_awgn_mi(a: float, sigma: float = 1.0) -> float:
    """
    I(X; X + N) for equiprobable X in {-A, A} and N ~ N(0, sigma^2).

    `ln 2 - E[ln(1 + exp(-2 A Y / sigma^2))]` with `Y ~ N(A, sigma^2)`,
    integrated by adaptive quadrature.
    """
    if a < 0 or sigma <= 0:
        raise ConfigurationError(f"Need A >= 0 and sigma > 0, got A={a}, sigma={sigma}.")

    def integrand(t: float) -> float:
        y = a + sigma * t
        return norm.pdf(t) * np.logaddexp(0.0, -2.0 * a * y / sigma**2)

    expectation, _ = quad(integrand, -np.inf, np.inf, epsabs=1e-13)
    return math.log(2.0) - expectation


def cauchy_capacity(a: float, gamma: float) -> float:
    """Capacity `ln(A/γ)` of the Cauchy channel under the logarithmic constraint, A >= γ."""
    if not a >= gamma > 0:
        raise ConfigurationError(f"Need A >= gamma > 0, got A={a}, gamma={gamma}.")
    return math.log(a / gamma)


def cauchy_quantile_gap(samples: np.ndarray, a: float, gamma: float) -> float:
    """
    Largest gap between empirical decile quantiles of `samples` and those of
    the capacity-achieving Cauchy(0, A - γ) input.
    """
    if not a > gamma > 0:
        raise ConfigurationError(f"Need A > gamma > 0, got A={a}, gamma={gamma}.")
    levels = np.asarray(QUANTILE_LEVELS)
    empirical = np.quantile(np.ravel(samples), levels)
    reference = cauchy.ppf(levels, scale=a - gamma)
    return float(np.max(np.abs(empirical - reference)))
