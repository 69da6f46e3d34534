"""Likelihood-based reference decoders and closed-form MIND quantities."""

from typing import Callable

import numpy as np
from scipy.special import erfc, logsumexp

from divergence.generators import safe_log
from mind.alphabet import Alphabet
from models.errors import ConfigurationError

LogLikelihoodFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


def log_likelihood_table(log_likelihood: LogLikelihoodFn, alphabet: Alphabet, y: np.ndarray) -> np.ndarray:
    """`log p(y_j | x_i)` as an `(M, N)` table, `y` of shape `(dim_y, N)`."""
    y = np.atleast_2d(np.asarray(y, dtype=np.float64))
    return np.vstack([log_likelihood(y, alphabet.symbols[:, i]) for i in range(alphabet.m)])


def exact_posteriors(log_likelihood: LogLikelihoodFn, alphabet: Alphabet, y: np.ndarray) -> np.ndarray:
    """Genie `P(x_i | y_j)` as an `(M, N)` table."""
    with np.errstate(divide="ignore"):
        log_joint = log_likelihood_table(log_likelihood, alphabet, y) + np.log(alphabet.prior)[:, None]
    return np.exp(log_joint - logsumexp(log_joint, axis=0, keepdims=True))


def map_oracle(log_likelihood: LogLikelihoodFn, alphabet: Alphabet, y: np.ndarray) -> np.ndarray:
    """Indices maximising `prior * likelihood`; ties go to the lowest index."""
    with np.errstate(divide="ignore"):
        scores = log_likelihood_table(log_likelihood, alphabet, y) + np.log(alphabet.prior)[:, None]
    return np.argmax(scores, axis=0)


def maxl_oracle(log_likelihood: LogLikelihoodFn, alphabet: Alphabet, y: np.ndarray) -> np.ndarray:
    """Indices maximising the likelihood alone; the prior is ignored."""
    return np.argmax(log_likelihood_table(log_likelihood, alphabet, y), axis=0)


def genie_optimal_d(posteriors: np.ndarray) -> np.ndarray:
    """Optimal discriminator outputs `1 / (1 + P(x_i | y))`."""
    return 1.0 / (1.0 + np.asarray(posteriors, dtype=np.float64))


def symbol_error_rate(decided: np.ndarray, sent: np.ndarray) -> float:
    decided, sent = np.asarray(decided).reshape(-1), np.asarray(sent).reshape(-1)
    if decided.shape != sent.shape or decided.size == 0:
        raise ConfigurationError(
            f"Decisions {decided.shape} and sent indices {sent.shape} must be equal and non-empty."
        )
    return float(np.mean(decided != sent))


def pam_ser_awgn(m: int, sigma: float) -> float:
    """
    Exact nearest-neighbour SER of uniform M-PAM on odd integers in AWGN:
    `2 (1 - 1/M) Q(1/sigma)`.
    """
    if m < 2 or sigma <= 0:
        raise ConfigurationError(f"Need M >= 2 and sigma > 0, got M={m}, sigma={sigma}.")
    q = 0.5 * erfc(1.0 / (sigma * np.sqrt(2.0)))
    return float(2.0 * (1.0 - 1.0 / m) * q)


def mind_value_unsupervised(
    d_fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
    joint: tuple[np.ndarray, np.ndarray],
    uniform: tuple[np.ndarray, np.ndarray],
    support_measure: float,
    joint_weights: "np.ndarray | None" = None,
    uniform_weights: "np.ndarray | None" = None,
) -> float:
    """
    `|T_x| E_{u,y}[log D(u, y)] + E_{x,y}[log(1 - D(x, y))]`.

    The maximiser is `D* = p_Y / (p_Y + p_{XY})`, for which `(1 - D*) / D*`
    is the posterior `P(x | y)` when the inputs are discrete. Expectations are
    sample means unless weights are given (enumeration of a discrete toy).

    Args:
        d_fn: Maps `(x, y)` columns to discriminator outputs in (0, 1).
        joint: `(x, y)` pairs drawn from the joint.
        uniform: `(u, y)` pairs with `u` uniform on the input support and `y`
            from the output marginal.
        support_measure: Size `|T_x|` of the input support.

    Raises:
        ConfigurationError: If `support_measure <= 0`.
    """
    if not support_measure > 0:
        raise ConfigurationError(f"Support measure must be positive, got {support_measure}.")
    d_joint = np.asarray(d_fn(*joint), dtype=np.float64).reshape(-1)
    d_unif = np.asarray(d_fn(*uniform), dtype=np.float64).reshape(-1)
    uniform_term = np.average(safe_log(d_unif), weights=uniform_weights)
    joint_term = np.average(safe_log(1.0 - d_joint), weights=joint_weights)
    return float(support_measure * uniform_term + joint_term)
