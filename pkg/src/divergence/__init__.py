"""f-divergence generators and the value functions estimators train on."""

from .generators import GENERATORS, LOG_FLOOR, FGenerator, get_generator, safe_log
from .values import (
    MineEma,
    log_mean_exp,
    value_capacity,
    value_cpc,
    value_fdime,
    value_fenchel,
    value_gamma,
    value_kl_permuted,
    value_mine,
    value_nwj,
    value_smile,
)

__all__ = [
    "FGenerator",
    "GENERATORS",
    "LOG_FLOOR",
    "MineEma",
    "get_generator",
    "log_mean_exp",
    "safe_log",
    "value_capacity",
    "value_cpc",
    "value_fdime",
    "value_fenchel",
    "value_gamma",
    "value_kl_permuted",
    "value_mine",
    "value_nwj",
    "value_smile",
]
