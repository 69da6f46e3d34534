"""Closed-form validation paths: oracle-ratio readouts, the Gaussian variance
formula and the optimum of a discriminator trained on permuted pairs."""

import math
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp

from divergence.generators import safe_log
from divergence.values import log_mean_exp, value_kl_permuted, value_smile
from estimators.families import Family
from models.errors import ConfigurationError
from models.estimates import MiEstimate
from sampling.batches import Batch, marginal_view
from sampling.shuffles import Shuffle

# (x, y) -> density ratio p(x, y) / (p(x) p(y)) per column
RatioFn = Callable[[np.ndarray, np.ndarray], np.ndarray]
LogRatioFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


def readout_from_log_ratio(
    family: "str | Family",
    log_r_joint: np.ndarray,
    log_r_marg: np.ndarray | None = None,
    log_r_matrix: np.ndarray | None = None,
    weights: np.ndarray | None = None,
) -> float:
    """
    Readout of `family` with its discriminator set to the optimum for the
    given log ratios.

    f-DIME and γ-DIME need only joint log ratios (optionally probability
    weighted); MINE/NWJ/SMILE also need marginal ones; CPC needs the full
    N x N matrix of `log R(x_i, y_j)`.
    """
    family = Family.parse(family)
    log_r_joint = np.asarray(log_r_joint, dtype=np.float64)
    weights = (
        np.full(log_r_joint.size, 1.0 / log_r_joint.size)
        if weights is None
        else np.asarray(weights, dtype=np.float64)
    )
    if family.is_fdime:
        gen = family.generator
        d_opt = gen.optimal_discriminator(np.exp(log_r_joint))
        return float(np.sum(weights * gen.readout(d_opt)))
    if family.name == "gamma_dime":
        d_opt = np.exp(log_r_joint / family.param)
        return float(np.sum(weights * family.param * safe_log(d_opt)))
    if family.name == "cpc":
        if log_r_matrix is None:
            raise ConfigurationError("The cpc oracle readout needs the full log-ratio matrix.")
        scores = np.asarray(log_r_matrix, dtype=np.float64)
        n = scores.shape[0]
        return float(np.mean(np.diag(scores) - logsumexp(scores, axis=1)) + math.log(n))
    if log_r_marg is None:
        raise ConfigurationError(f"The {family.name} oracle readout needs marginal log ratios.")
    log_r_marg = np.asarray(log_r_marg, dtype=np.float64)
    match family.name:
        case "mine":
            return float(np.mean(log_r_joint) - log_mean_exp(log_r_marg))
        case "nwj":
            # optimal critic T = 1 + log R
            return float(np.mean(1.0 + log_r_joint) - np.mean(np.exp(log_r_marg)))
        case _:
            return value_smile(log_r_joint, log_r_marg, family.param).total


def estimate_with_oracle_log_ratio(
    family: "str | Family", log_ratio_fn: LogRatioFn, batch: Batch, shuffle: Shuffle
) -> MiEstimate:
    """
    Readout of `family` at the exact log density ratio, bypassing training.

    The readout stays in the log domain, so pairs whose ratio underflows
    (far off-diagonal CPC pairs at high MI) contribute `-inf` scores.

    Raises:
        ConfigurationError: If the log ratio is NaN or `+inf`.
    """
    family = Family.parse(family)

    def log_ratio(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        values = np.asarray(log_ratio_fn(x, y), dtype=np.float64)
        if np.any(np.isnan(values)) or np.any(values == np.inf):
            raise ConfigurationError("The oracle log density ratio must be finite or -inf.")
        return values

    log_r_joint = log_ratio(batch.x, batch.y)
    log_r_marg = log_r_matrix = None
    if family.name == "cpc":
        n = batch.n
        x_rows = np.repeat(batch.x, n, axis=1)
        y_cols = np.tile(batch.y, (1, n))
        log_r_matrix = log_ratio(x_rows, y_cols).reshape(n, n)
    elif not family.joint_only_readout:
        marginal = marginal_view(batch, shuffle)
        log_r_marg = log_ratio(marginal.x, marginal.y)
    value = readout_from_log_ratio(family, log_r_joint, log_r_marg, log_r_matrix)
    return MiEstimate(value_nats=value, n_samples=batch.n, family=family.tag)


def estimate_with_oracle_ratio(
    family: "str | Family", ratio_fn: RatioFn, batch: Batch, shuffle: Shuffle
) -> MiEstimate:
    """
    Readout of `family` at the exact density ratio, bypassing training.

    A ratio of exactly zero is taken as an underflowed positive ratio.

    Raises:
        ConfigurationError: If the ratio function returns a negative or NaN value.
    """

    def log_ratio(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        ratio = np.asarray(ratio_fn(x, y), dtype=np.float64)
        if np.any(np.isnan(ratio)) or np.any(ratio < 0):
            raise ConfigurationError("The oracle density ratio must be positive.")
        with np.errstate(divide="ignore"):
            return np.log(ratio)

    return estimate_with_oracle_log_ratio(family, log_ratio, batch, shuffle)


def discrete_mi(pmf: np.ndarray) -> float:
    """Exact MI in nats of a joint pmf given as a 2-D table."""
    pmf = np.asarray(pmf, dtype=np.float64)
    if pmf.ndim != 2 or np.any(pmf < 0) or not math.isclose(pmf.sum(), 1.0, abs_tol=1e-12):
        raise ConfigurationError("A joint pmf must be a non-negative 2-D table summing to 1.")
    product = np.outer(pmf.sum(axis=1), pmf.sum(axis=0))
    support = pmf > 0
    return float(np.sum(pmf[support] * np.log(pmf[support] / product[support])))


def discrete_oracle_readout(family: "str | Family", pmf: np.ndarray) -> float:
    """Exact expectation of a joint-only readout at the true ratio of a discrete pmf."""
    family = Family.parse(family)
    if not family.joint_only_readout:
        raise ConfigurationError(f"{family.tag} has no joint-only readout to enumerate.")
    pmf = np.asarray(pmf, dtype=np.float64)
    product = np.outer(pmf.sum(axis=1), pmf.sum(axis=0))
    support = pmf > 0
    log_r = np.log(pmf[support]) - np.log(product[support])
    return readout_from_log_ratio(family, log_r, weights=pmf[support])


def variance_gaussian(mi: float, m: int) -> float:
    """Variance `(1 - e^{-2I}) / M` of the oracle f-DIME readout on a scalar Gaussian."""
    if mi < 0 or m < 1:
        raise ConfigurationError(f"Need I >= 0 and M >= 1, got I={mi}, M={m}.")
    return -math.expm1(-2.0 * mi) / m


def permuted_optimum(ratio: "float | np.ndarray", n: int, k: int) -> "float | np.ndarray":
    """
    Optimal KL discriminator `N R / (K R + N - K)` when `k` of the `n`
    marginal pairs are fixed points of the permutation.

    Raises:
        ConfigurationError: Unless `n >= 1` and `0 <= k <= n`.
    """
    if n < 1 or not 0 <= k <= n:
        raise ConfigurationError(f"Need N >= 1 and 0 <= K <= N, got N={n}, K={k}.")
    ratio = np.asarray(ratio, dtype=np.float64)
    limit = n / k if k else np.inf
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.where(np.isinf(ratio), limit, n * ratio / (k * ratio + n - k))
    return float(out) if out.ndim == 0 else out


def brute_force_permuted_optimum(p: np.ndarray, q: np.ndarray, n: int, k: int) -> np.ndarray:
    """
    Maximise the permuted KL value pointwise over `log D` with Brent's method.

    On each support point the objective `p log D - (k/n) p D - ((n-k)/n) q D`
    is concave in `log D`.
    """
    p, q = np.asarray(p, dtype=np.float64), np.asarray(q, dtype=np.float64)
    frac = k / n
    optimum = np.empty_like(p)
    for index, (p_i, q_i) in enumerate(zip(p, q)):
        weight = frac * p_i + (1.0 - frac) * q_i
        result = minimize_scalar(
            lambda u: -(p_i * u - weight * math.exp(u)),
            bracket=(-5.0, 5.0),
            method="brent",
            options={"xtol": 1e-12},
        )
        optimum[index] = math.exp(result.x)
    return optimum


def permuted_optimum_gap(p: np.ndarray, q: np.ndarray, n: int, k: int) -> float:
    """Largest relative difference between the closed-form and brute-force maximisers."""
    closed = np.asarray(permuted_optimum(np.asarray(p) / np.asarray(q), n, k))
    brute = brute_force_permuted_optimum(p, q, n, k)
    return float(np.max(np.abs(brute - closed) / closed))


def permuted_value_gap(p: np.ndarray, q: np.ndarray, n: int, k: int) -> float:
    """
    |J(closed-form optimum) - J(brute-force optimum)| for the permuted KL value.
    """
    closed = permuted_optimum(np.asarray(p) / np.asarray(q), n, k)
    brute = brute_force_permuted_optimum(p, q, n, k)
    return abs(value_kl_permuted(closed, p, q, n, k) - value_kl_permuted(brute, p, q, n, k))
