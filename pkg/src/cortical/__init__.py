"""Cooperative channel-capacity learning and its closed-form references."""

from .clusters import MassPoint, cluster_mass_points
from .constraints import (
    OUTPUT_MODES,
    ConstraintSpec,
    apply_output_mode,
    constraint_penalty,
    output_mode_vjp,
)
from .learner import CapacityLearner, ChannelDraw, capacity_estimate, cortical_train
from .oracles import (
    awgn_capacity,
    binary_awgn_mi,
    cauchy_capacity,
    cauchy_quantile_gap,
    mckellips_bound,
)

__all__ = [
    "CapacityLearner",
    "ChannelDraw",
    "ConstraintSpec",
    "MassPoint",
    "OUTPUT_MODES",
    "apply_output_mode",
    "awgn_capacity",
    "binary_awgn_mi",
    "capacity_estimate",
    "cauchy_capacity",
    "cauchy_quantile_gap",
    "cluster_mass_points",
    "constraint_penalty",
    "cortical_train",
    "mckellips_bound",
    "output_mode_vjp",
]
