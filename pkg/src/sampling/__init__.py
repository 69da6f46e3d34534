"""Random streams, batches, derangements and elementary samplers."""

from .batches import Batch, gaussian_pair_batch, marginal_view
from .distributions import draw
from .rng import Rng
from .shuffles import (
    DEFAULT_DERANGEMENT_MODE,
    DerangementMode,
    Shuffle,
    derange,
    permute_naive,
)

__all__ = [
    "Batch",
    "DEFAULT_DERANGEMENT_MODE",
    "DerangementMode",
    "Rng",
    "Shuffle",
    "derange",
    "draw",
    "gaussian_pair_batch",
    "marginal_view",
    "permute_naive",
]
