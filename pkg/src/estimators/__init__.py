"""Trainable MI estimators and their closed-form validation paths."""

from .analysis import (
    brute_force_permuted_optimum,
    discrete_mi,
    discrete_oracle_readout,
    estimate_with_oracle_log_ratio,
    estimate_with_oracle_ratio,
    permuted_optimum,
    permuted_optimum_gap,
    permuted_value_gap,
    readout_from_log_ratio,
    variance_gaussian,
)
from .estimator import DIVERGENCE_THRESHOLD, MiEstimator
from .families import FAMILY_NAMES, FDIME_FAMILIES, Family

__all__ = [
    "DIVERGENCE_THRESHOLD",
    "FAMILY_NAMES",
    "FDIME_FAMILIES",
    "Family",
    "MiEstimator",
    "brute_force_permuted_optimum",
    "discrete_mi",
    "discrete_oracle_readout",
    "estimate_with_oracle_log_ratio",
    "estimate_with_oracle_ratio",
    "permuted_optimum",
    "permuted_optimum_gap",
    "permuted_value_gap",
    "readout_from_log_ratio",
    "variance_gaussian",
]
