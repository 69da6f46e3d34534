"""Synthetic channels, noise models and their closed-form oracles."""

from .gaussian import (
    MAPPINGS,
    apply_mapping,
    gaussian_log_ratio,
    invert_mapping,
    mapped_log_ratio,
    rho_for_target_mi,
    true_mi_gaussian,
)
from .noise import (
    MiddletonNoiseModel,
    NakagamiNoiseModel,
    cauchy_noise,
    middleton_noise,
    nakagami_noise,
    nonlinear_sqrt_channel,
    rayleigh_equiv_output,
    sqrt_warp,
)
from .scenarios import CHANNELS, ChannelScenario, build_channel

__all__ = [
    "CHANNELS",
    "ChannelScenario",
    "MAPPINGS",
    "MiddletonNoiseModel",
    "NakagamiNoiseModel",
    "apply_mapping",
    "build_channel",
    "cauchy_noise",
    "gaussian_log_ratio",
    "invert_mapping",
    "mapped_log_ratio",
    "middleton_noise",
    "nakagami_noise",
    "nonlinear_sqrt_channel",
    "rayleigh_equiv_output",
    "rho_for_target_mi",
    "sqrt_warp",
    "true_mi_gaussian",
]
