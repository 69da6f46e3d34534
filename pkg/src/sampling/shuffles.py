"""Permutations and derangements used to build product-of-marginals pairs."""

from dataclasses import dataclass
from typing import Literal

import numpy as np

from models.errors import ConfigurationError, SamplingError
from sampling.rng import Rng

DerangementMode = Literal["random", "shift"]

DEFAULT_DERANGEMENT_MODE: DerangementMode = "shift"
MAX_REJECTION_TRIES = 1000


@dataclass(frozen=True)
class Shuffle:
    """
    A permutation of `0..N-1` with its fixed-point count.

    Attributes:
        perm: `perm[i]` is the index of the `y` paired with `x_i`.
        fixed_points: Number of `i` with `perm[i] == i`.
    """

    perm: np.ndarray
    fixed_points: int

    @classmethod
    def from_perm(cls, perm: np.ndarray) -> "Shuffle":
        perm = np.asarray(perm, dtype=np.int64)
        if not np.array_equal(np.sort(perm), np.arange(perm.size)):
            raise ConfigurationError("perm is not a bijection of 0..N-1.")
        return cls(perm=perm, fixed_points=count_fixed_points(perm))

    @classmethod
    def identity(cls, n: int) -> "Shuffle":
        return cls(perm=np.arange(n, dtype=np.int64), fixed_points=n)

    @property
    def n(self) -> int:
        return int(self.perm.size)

    @property
    def is_derangement(self) -> bool:
        return self.fixed_points == 0


def count_fixed_points(perm: np.ndarray) -> int:
    return int(np.count_nonzero(perm == np.arange(perm.size)))


def permute_naive(n: int, rng: Rng) -> Shuffle:
    """Uniform random permutation (Fisher-Yates), fixed points counted exactly."""
    if n < 1:
        raise ConfigurationError(f"Permutation length must be >= 1, got {n}.")
    perm = rng.generator.permutation(n)
    return Shuffle(perm=perm, fixed_points=count_fixed_points(perm))


def derange(n: int, mode: DerangementMode, rng: Rng) -> Shuffle:
    """
    A permutation without fixed points.

    `shift` pairs `x_i` with `y_{(i+1) mod N}`. `random` resamples uniform
    permutations until one has no fixed point, which is uniform over
    derangements and takes about e tries on average.

    Raises:
        ConfigurationError: If `n < 2` or the mode is unknown.
        SamplingError: If `random` mode exhausts its rejection budget.
    """
    if n < 2:
        raise ConfigurationError(f"A derangement needs N >= 2, got {n}.")
    if mode == "shift":
        return Shuffle(perm=(np.arange(n, dtype=np.int64) + 1) % n, fixed_points=0)
    if mode != "random":
        raise ConfigurationError(f"Unknown derangement mode: {mode!r}")
    for _ in range(MAX_REJECTION_TRIES):
        perm = rng.generator.permutation(n)
        if count_fixed_points(perm) == 0:
            return Shuffle(perm=perm, fixed_points=0)
    raise SamplingError(
        f"No derangement of N={n} found in {MAX_REJECTION_TRIES} rejection tries."
    )
