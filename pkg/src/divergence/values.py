"""Monte Carlo value functions and their gradients.

Every function returns a `ValueFunctionEval` whose `grad_joint` and
`grad_marginal` hold d total / d output for each joint and marginal sample
(already averaged over the batch), so callers can feed them straight into
`Mlp.backward` after negation.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import logsumexp, softmax

from divergence.generators import LOG_FLOOR, FGenerator, safe_log
from models.errors import ConfigurationError, NumericError
from models.estimates import ValueFunctionEval

DEFAULT_EMA_DECAY = 0.9


def _as_vector(values: np.ndarray, family: str) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise ConfigurationError(f"{family} value function needs at least one sample.")
    if not np.all(np.isfinite(values)):
        raise NumericError(f"Non-finite input to the {family} value function.", family=family)
    return values


def log_mean_exp(values: np.ndarray, axis: Optional[int] = None) -> np.ndarray:
    """log(mean(exp(values))) with max subtraction."""
    n = values.size if axis is None else values.shape[axis]
    return logsumexp(values, axis=axis) - math.log(n)


def _finish(family: str, joint: float, marginal: float, offset: float, **grads) -> ValueFunctionEval:
    total = joint - marginal + offset
    if not math.isfinite(total):
        raise NumericError(f"Non-finite {family} value.", family=family)
    return ValueFunctionEval(
        family=family,
        joint_term=joint,
        marginal_term=marginal,
        offset=offset,
        total=total,
        **grads,
    )


def value_fdime(gen: FGenerator, d_joint: np.ndarray, d_marg: np.ndarray) -> ValueFunctionEval:
    """
    f-DIME value `E_joint[T(D)] - E_marg[f*(T(D))] + offset` in closed form.

    kl:  mean log D_j + 1 - mean D_m
    gan: mean log(1 - D_j) + mean log D_m + log 4
    hd:  2 - mean D_j - mean 1/D_m

    Raises:
        NumericError: If any D is outside the family's domain.
    """
    d_joint = np.asarray(d_joint, dtype=np.float64).reshape(-1)
    d_marg = np.asarray(d_marg, dtype=np.float64).reshape(-1)
    gen.check_domain(d_joint)
    gen.check_domain(d_marg)
    n_j, n_m = d_joint.size, d_marg.size
    dj = np.maximum(d_joint, LOG_FLOOR)
    dm = np.maximum(d_marg, LOG_FLOOR)

    match gen.name:
        case "kl":
            joint = float(np.mean(1.0 + np.log(dj)))
            marginal = float(np.mean(d_marg))
            grad_joint = 1.0 / (n_j * dj)
            grad_marg = np.full(n_m, -1.0 / n_m)
        case "gan":
            one_minus = np.maximum(1.0 - d_joint, LOG_FLOOR)
            joint = float(np.mean(np.log(one_minus)))
            marginal = float(-np.mean(np.log(dm)))
            grad_joint = -1.0 / (n_j * one_minus)
            grad_marg = 1.0 / (n_m * dm)
        case "hd":
            joint = float(np.mean(1.0 - d_joint))
            marginal = float(np.mean(1.0 / dm - 1.0))
            grad_joint = np.full(n_j, -1.0 / n_j)
            grad_marg = 1.0 / (n_m * dm**2)
        case _:
            raise ConfigurationError(f"No closed-form value for generator {gen.name!r}.")

    return _finish(
        gen.name, joint, marginal, gen.offset, grad_joint=grad_joint, grad_marginal=grad_marg
    )


def value_fenchel(gen: FGenerator, d_joint: np.ndarray, d_marg: np.ndarray) -> float:
    """Generic `mean T(D_j) - mean f*(T(D_m)) + offset`, without gradients."""
    t_joint = gen.to_variational(np.asarray(d_joint, dtype=np.float64))
    t_marg = gen.to_variational(np.asarray(d_marg, dtype=np.float64))
    return float(np.mean(t_joint) - np.mean(gen.conjugate(t_marg)) + gen.offset)


def value_gamma(gamma: float, d_joint: np.ndarray, d_marg: np.ndarray) -> ValueFunctionEval:
    """
    γ-DIME value `γ mean log D_j - mean D_m^γ`, maximised at D = R^{1/γ}.

    The mutual information satisfies `I >= value + 1`.

    Raises:
        ConfigurationError: If `gamma <= 0`.
        NumericError: If any D is non-positive or non-finite.
    """
    if not gamma > 0:
        raise ConfigurationError(f"gamma must be positive, got {gamma}.")
    d_joint = _as_vector(d_joint, "gamma")
    d_marg = _as_vector(d_marg, "gamma")
    if np.any(d_joint < 0) or np.any(d_marg < 0):
        raise NumericError("γ-DIME needs positive discriminator outputs.", family="gamma")
    dj = np.maximum(d_joint, LOG_FLOOR)
    dm = np.maximum(d_marg, LOG_FLOOR)
    powered = dm**gamma
    return _finish(
        "gamma",
        float(gamma * np.mean(np.log(dj))),
        float(np.mean(powered)),
        0.0,
        grad_joint=gamma / (dj.size * dj),
        grad_marginal=-gamma * powered / (dm.size * dm),
    )


@dataclass(frozen=True)
class MineEma:
    """
    Moving average of the partition function `mean e^{T_marg}`, kept as a log.

    Attributes:
        decay: Weight of the previous average.
        log_value: Current log average, `None` before the first batch.
    """

    decay: float = DEFAULT_EMA_DECAY
    log_value: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.decay < 1.0:
            raise ConfigurationError(f"EMA decay must lie in [0, 1), got {self.decay}.")

    def updated(self, log_batch_mean: float) -> "MineEma":
        if self.log_value is None or self.decay == 0.0:
            return MineEma(self.decay, log_batch_mean)
        mixed = np.logaddexp(
            math.log(self.decay) + self.log_value,
            math.log1p(-self.decay) + log_batch_mean,
        )
        return MineEma(self.decay, float(mixed))


def value_mine(
    t_joint: np.ndarray, t_marg: np.ndarray, ema: Optional[MineEma] = None
) -> tuple[ValueFunctionEval, MineEma]:
    """
    MINE value `mean T_j - log mean e^{T_m}` and the updated moving average.

    The marginal gradient divides by the moving average instead of the
    batch partition estimate, which removes most of the minibatch bias.
    """
    t_joint = _as_vector(t_joint, "mine")
    t_marg = _as_vector(t_marg, "mine")
    ema = ema or MineEma()
    log_partition = float(log_mean_exp(t_marg))
    ema = ema.updated(log_partition)
    grad_marg = -np.exp(t_marg - ema.log_value) / t_marg.size
    evaluation = _finish(
        "mine",
        float(np.mean(t_joint)),
        log_partition,
        0.0,
        grad_joint=np.full(t_joint.size, 1.0 / t_joint.size),
        grad_marginal=grad_marg,
    )
    return evaluation, ema


def value_nwj(t_joint: np.ndarray, t_marg: np.ndarray) -> ValueFunctionEval:
    """NWJ value `mean T_j - mean e^{T_m - 1}`."""
    t_joint = _as_vector(t_joint, "nwj")
    t_marg = _as_vector(t_marg, "nwj")
    with np.errstate(over="ignore"):
        partition = np.exp(t_marg - 1.0)
    if not np.all(np.isfinite(partition)):
        raise NumericError("Overflow in the NWJ partition term.", family="nwj")
    return _finish(
        "nwj",
        float(np.mean(t_joint)),
        float(np.mean(partition)),
        0.0,
        grad_joint=np.full(t_joint.size, 1.0 / t_joint.size),
        grad_marginal=-partition / t_marg.size,
    )


def value_smile(t_joint: np.ndarray, t_marg: np.ndarray, tau: float) -> ValueFunctionEval:
    """
    SMILE readout `mean T_j - log mean clip(e^{T_m}, e^{-τ}, e^{τ})`.

    Readout only; SMILE discriminators are trained with the gan value.
    `tau = inf` gives the MINE readout.
    """
    if not tau > 0:
        raise ConfigurationError(f"tau must be positive, got {tau}.")
    t_joint = _as_vector(t_joint, "smile")
    t_marg = _as_vector(t_marg, "smile")
    clipped = np.clip(t_marg, -tau, tau)
    return _finish("smile", float(np.mean(t_joint)), float(log_mean_exp(clipped)), 0.0)


def value_cpc(scores: np.ndarray) -> ValueFunctionEval:
    """
    InfoNCE value `mean_i [S_ii - log mean_j e^{S_ij}]` over an N x N score matrix.

    `grad_joint` holds the full N x N gradient `(I - softmax_rows(S)) / N`;
    `grad_marginal` is unused.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 2 or scores.shape[0] != scores.shape[1] or scores.shape[0] == 0:
        raise ConfigurationError(f"CPC needs a square score matrix, got {scores.shape}.")
    if not np.all(np.isfinite(scores)):
        raise NumericError("Non-finite CPC score.", family="cpc")
    n = scores.shape[0]
    grad = (np.eye(n) - softmax(scores, axis=1)) / n
    return _finish(
        "cpc",
        float(np.mean(np.diag(scores))),
        float(np.mean(log_mean_exp(scores, axis=1))),
        0.0,
        grad_joint=grad,
    )


def value_capacity(alpha: float, d_joint: np.ndarray, d_marg: np.ndarray) -> ValueFunctionEval:
    """
    Cooperative capacity value `α mean log D_j - mean D_m`, maximised at
    `D = α R`. Capacity reads as `value / α + 1 - ln α`.
    """
    if not alpha > 0:
        raise ConfigurationError(f"alpha must be positive, got {alpha}.")
    d_joint = _as_vector(d_joint, "capacity")
    d_marg = _as_vector(d_marg, "capacity")
    if np.any(d_joint < 0) or np.any(d_marg < 0):
        raise NumericError("Capacity discriminator outputs must be positive.", family="capacity")
    dj = np.maximum(d_joint, LOG_FLOOR)
    return _finish(
        "capacity",
        float(alpha * np.mean(np.log(dj))),
        float(np.mean(d_marg)),
        0.0,
        grad_joint=alpha / (dj.size * dj),
        grad_marginal=np.full(d_marg.size, -1.0 / d_marg.size),
    )


def value_kl_permuted(
    d: np.ndarray, p: np.ndarray, q: np.ndarray, n: int, k: int
) -> float:
    """
    Expected KL value on a discrete toy when the marginal batch comes from a
    permutation with `k` fixed points out of `n`.

    A fraction `k/n` of the "marginal" pairs are actually joint pairs, so
    `J(D) = sum_x p log D - (k/n) sum_x p D - ((n-k)/n) sum_x q D + 1`,
    with `p` the joint pmf and `q` the product of marginals on the same support.
    """
    if not 0 <= k <= n or n < 1:
        raise ConfigurationError(f"Need 0 <= K <= N and N >= 1, got N={n}, K={k}.")
    d, p, q = (np.asarray(a, dtype=np.float64) for a in (d, p, q))
    frac = k / n
    return float(np.sum(p * safe_log(d)) - frac * np.sum(p * d) - (1.0 - frac) * np.sum(q * d) + 1.0)
