"""Deterministic analytic checks gating a release."""

import math
import time
from typing import Callable

import numpy as np

from channels.gaussian import gaussian_log_ratio, rho_for_target_mi
from channels.scenarios import AwgnChannel
from config.logger import logger
from divergence.generators import GAN, GENERATORS, HD, KL
from divergence.values import value_capacity, value_cpc, value_fdime, value_gamma, value_nwj
from estimators.analysis import (
    discrete_mi,
    discrete_oracle_readout,
    estimate_with_oracle_log_ratio,
    permuted_optimum,
    permuted_optimum_gap,
    permuted_value_gap,
    readout_from_log_ratio,
    variance_gaussian,
)
from harness.metrics import metrics
from mind.alphabet import pam4_nonuniform
from mind.decoder import PosteriorTable, decide
from mind.oracles import exact_posteriors, genie_optimal_d, map_oracle
from models.config import ChecksConfig
from models.estimates import CheckReport, CheckResult
from models.records import MetricRecord
from nn.gradcheck import gradient_check
from nn.mlp import mlp_new
from sampling.batches import gaussian_pair_batch
from sampling.rng import Rng
from sampling.shuffles import derange

ORACLE_PMF = np.array([[0.4, 0.1], [0.1, 0.4]])
ORACLE_MI_NATS = 0.19274
PERMUTED_TOY = (np.array([0.5, 0.3, 0.2]), np.array([0.2, 0.3, 0.5]))
FD_STEP = 1e-6
CEILING_REL_TOL = 1e-3

Check = Callable[[ChecksConfig, Rng], CheckResult]


def _central_difference(fn: Callable[[np.ndarray], float], point: np.ndarray) -> np.ndarray:
    grad = np.zeros_like(point)
    flat, out = point.reshape(-1), grad.reshape(-1)
    for index in range(flat.size):
        original = flat[index]
        flat[index] = original + FD_STEP
        plus = fn(point)
        flat[index] = original - FD_STEP
        minus = fn(point)
        flat[index] = original
        out[index] = (plus - minus) / (2.0 * FD_STEP)
    return grad


def _relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    scale = np.linalg.norm(analytic) + np.linalg.norm(numeric)
    return float(np.linalg.norm(analytic - numeric) / scale) if scale > 0 else 0.0


def check_network_gradients(config: ChecksConfig, rng: Rng) -> CheckResult:
    """Backprop against central differences for every smooth hidden activation."""
    batch = rng.generator.standard_normal((3, 8))

    def quadratic(output: np.ndarray) -> tuple[float, np.ndarray]:
        return 0.5 * float(np.sum(output**2)), output

    worst = 0.0
    for index, act in enumerate(("tanh", "softplus", "sigmoid", "leaky_relu(0.2)")):
        net = mlp_new([3, 6, 5, 2], [act, act, "identity"], rng.child_seed(index))
        report = gradient_check(net, quadratic, batch, config.gradient_tol)
        worst = max(worst, report.max_relative_error)
    return CheckResult(
        name="network_gradients",
        passed=worst <= config.gradient_tol,
        observed=worst,
        tolerance=config.gradient_tol,
        detail="max relative error over tanh/softplus/sigmoid/leaky_relu networks",
    )


def check_value_gradients(config: ChecksConfig, rng: Rng) -> CheckResult:
    """Closed-form d value / d output of each trainable family against central differences."""
    d_pos = 0.5 + rng.generator.random(12)
    d_gan = 0.1 + 0.8 * rng.generator.random(12)
    t = rng.generator.standard_normal(12)
    scores = rng.generator.standard_normal((4, 4))
    cases = {
        "kl": (lambda d: value_fdime(KL, d[:6], d[6:]), d_pos),
        "gan": (lambda d: value_fdime(GAN, d[:6], d[6:]), d_gan),
        "hd": (lambda d: value_fdime(HD, d[:6], d[6:]), d_pos),
        "gamma": (lambda d: value_gamma(2.0, d[:6], d[6:]), d_pos),
        "nwj": (lambda d: value_nwj(d[:6], d[6:]), t),
        "capacity": (lambda d: value_capacity(1.5, d[:6], d[6:]), d_pos),
    }
    worst = 0.0
    for evaluate, point in cases.values():
        evaluation = evaluate(point)
        analytic = np.concatenate((evaluation.grad_joint, evaluation.grad_marginal))
        numeric = _central_difference(lambda p: evaluate(p).total, point.copy())
        worst = max(worst, _relative_error(analytic, numeric))
    cpc_numeric = _central_difference(lambda s: value_cpc(s).total, scores.copy())
    worst = max(worst, _relative_error(value_cpc(scores).grad_joint, cpc_numeric))
    return CheckResult(
        name="value_gradients",
        passed=worst <= config.gradient_tol,
        observed=worst,
        tolerance=config.gradient_tol,
        detail="kl, gan, hd, gamma(2), nwj, capacity and cpc",
    )


def check_value_zeros(config: ChecksConfig, rng: Rng) -> CheckResult:
    """At unit ratio the f-DIME values, f(1) and every joint-only readout vanish."""
    worst = 0.0
    for gen in GENERATORS.values():
        d = gen.optimal_discriminator(np.ones(4))
        worst = max(
            worst,
            abs(value_fdime(gen, d, d).total),
            abs(float(gen.f(np.array(1.0)))),
            float(np.max(np.abs(gen.readout(d)))),
        )
    for family in ("kl_dime", "gan_dime", "hd_dime", "gamma_dime(2)", "mine", "nwj", "smile"):
        zeros = np.zeros(4)
        worst = max(worst, abs(readout_from_log_ratio(family, zeros, zeros)))
    return CheckResult(
        name="value_zeros",
        passed=worst <= 1e-15,
        observed=worst,
        tolerance=1e-15,
        detail="values, generators and readouts at R = 1",
    )


def check_oracle_ratio(config: ChecksConfig, rng: Rng) -> CheckResult:
    """Joint-only readouts at the exact ratio of a 2x2 pmf all equal its MI."""
    truth = discrete_mi(ORACLE_PMF)
    readouts = [
        discrete_oracle_readout(family, ORACLE_PMF)
        for family in ("kl_dime", "gan_dime", "hd_dime", "gamma_dime", "gamma_dime(3)")
    ]
    spread = max(abs(value - truth) for value in readouts)
    rounded = abs(truth - ORACLE_MI_NATS) < 1e-5
    return CheckResult(
        name="oracle_ratio",
        passed=spread <= config.oracle_tol and rounded,
        observed=spread,
        tolerance=config.oracle_tol,
        detail=f"enumerated MI {truth:.12f} nats",
    )


def check_variance_formula(config: ChecksConfig, rng: Rng) -> CheckResult:
    """Monte Carlo variance of the oracle readout against `(1 - e^{-2I}) / M`."""
    rho = rho_for_target_mi(1, config.variance_mi)
    m = config.variance_m
    shuffle = derange(m, "shift", rng)

    def log_ratio(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return gaussian_log_ratio(x, y, rho)

    estimates = np.array(
        [
            estimate_with_oracle_log_ratio(
                "kl_dime", log_ratio, gaussian_pair_batch(1, rho, m, rng), shuffle
            ).value_nats
            for _ in range(config.variance_reps)
        ]
    )
    expected = variance_gaussian(config.variance_mi, m)
    relative = abs(estimates.var(ddof=1) - expected) / expected
    return CheckResult(
        name="variance_formula",
        passed=relative <= config.variance_rel_tol,
        observed=relative,
        tolerance=config.variance_rel_tol,
        detail=f"expected variance {expected:.5f}",
    )


def check_permuted_optimum(config: ChecksConfig, rng: Rng) -> CheckResult:
    """Closed-form permuted optimum against Brent's method, plus its log N ceiling."""
    p, q = PERMUTED_TOY
    gap = max(permuted_value_gap(p, q, 10, k) for k in (0, 1, 3, 10))
    argmax_gap = max(permuted_optimum_gap(p, q, 10, k) for k in (0, 1, 3, 10))
    ceiling = float(permuted_optimum(1e6, 128, 1))
    # D only approaches N as R grows, so compare the implied log ceilings
    ceiling_gap = abs(math.log(ceiling) - math.log(128.0)) / math.log(128.0)
    passed = (
        gap <= config.permuted_tol
        and argmax_gap <= config.permuted_argmax_tol
        and ceiling_gap < CEILING_REL_TOL
    )
    return CheckResult(
        name="permuted_optimum",
        passed=passed,
        observed=gap,
        tolerance=config.permuted_tol,
        detail=(
            f"maximiser rel. gap {argmax_gap:.2e}, D(R=1e6, N=128, K=1) = {ceiling:.6f}, "
            f"ceiling log 128 = {math.log(128):.3f} nats"
        ),
    )


def check_mse_identity(config: ChecksConfig, rng: Rng) -> CheckResult:
    """Reported MSE equals bias^2 + variance and the direct mean squared error."""
    records = [
        MetricRecord(
            run_id=f"synthetic-s{seed}",
            seed=seed,
            family="kl_dime",
            step_index=step,
            iteration=iteration,
            estimate_nats=float(2.0 * (step + 1) + rng.generator.normal(0.1, 0.3)),
            true_nats=2.0 * (step + 1),
        )
        for seed in range(3)
        for step in range(2)
        for iteration in range(20)
    ]
    table = metrics(records, window=10)
    worst = 0.0
    for row in table.itertuples():
        window = [
            r.estimate_nats - r.true_nats
            for r in records
            if r.step_index == row.step_index and r.iteration >= 10
        ]
        direct = float(np.mean(np.square(window)))
        worst = max(worst, abs(row.mse - (row.bias**2 + row.variance)), abs(row.mse - direct))
    return CheckResult(
        name="mse_identity",
        passed=worst <= config.mse_tol,
        observed=worst,
        tolerance=config.mse_tol,
        detail="synthetic records, 3 seeds x 2 steps",
    )


def check_genie_decoding(config: ChecksConfig, rng: Rng) -> CheckResult:
    """Substituting the optimal MIND outputs reproduces MAP on an output grid."""
    alphabet = pam4_nonuniform(0.05)
    channel = AwgnChannel(sigma=0.7)
    grid = np.linspace(-6.0, 6.0, 2400).reshape(1, -1)
    table = PosteriorTable.from_outputs(genie_optimal_d(exact_posteriors(channel.log_likelihood, alphabet, grid)))
    mismatches = int(np.count_nonzero(decide(table) != map_oracle(channel.log_likelihood, alphabet, grid)))
    return CheckResult(
        name="genie_decoding",
        passed=mismatches == 0,
        observed=float(mismatches),
        tolerance=0.0,
        detail="non-uniform 4-PAM over AWGN, 2400 grid points",
    )


CHECKS: tuple[Check, ...] = (
    check_network_gradients,
    check_value_gradients,
    check_value_zeros,
    check_oracle_ratio,
    check_variance_formula,
    check_permuted_optimum,
    check_mse_identity,
    check_genie_decoding,
)


def run_checks(config: ChecksConfig, seed: int = 0) -> CheckReport:
    """Run every check on its own derived stream; never raises on a failed check."""
    root = Rng(seed)
    report = CheckReport()
    for index, check in enumerate(CHECKS):
        started = time.perf_counter()
        result = check(config, root.child(index))
        report.results.append(result)
        status = "passed" if result.passed else "FAILED"
        logger.info(
            f"check {result.name} {status}: observed {result.observed:.3e} "
            f"(tolerance {result.tolerance:.1e}) in {time.perf_counter() - started:.2f}s"
        )
    return report
