"""Paired sample batches and their product-of-marginals views."""

from dataclasses import dataclass

import numpy as np

from models.errors import ConfigurationError
from sampling.rng import Rng
from sampling.shuffles import Shuffle


@dataclass(frozen=True)
class Batch:
    """
    N paired samples stored column-wise.

    Attributes:
        x: Array of shape `(d_x, N)`.
        y: Array of shape `(d_y, N)`.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        if self.x.ndim != 2 or self.y.ndim != 2 or self.x.shape[1] != self.y.shape[1]:
            raise ConfigurationError(
                f"Batch needs (d_x, N) and (d_y, N) arrays, got {self.x.shape} and {self.y.shape}."
            )

    @property
    def n(self) -> int:
        return int(self.x.shape[1])

    def stacked(self) -> np.ndarray:
        """Concatenate `(x, y)` row-wise into the discriminator input `(d_x + d_y, N)`."""
        return np.vstack((self.x, self.y))

    def with_y(self, y: np.ndarray) -> "Batch":
        return Batch(x=self.x, y=y)


def gaussian_pair_batch(d: int, rho: float, n: int, rng: Rng) -> Batch:
    """
    Correlated Gaussian pairs `y = rho x + sqrt(1 - rho^2) n`, componentwise.

    Raises:
        ConfigurationError: If `rho` is outside `[0, 1)` or sizes are invalid.
    """
    if not 0.0 <= rho < 1.0:
        raise ConfigurationError(f"rho must lie in [0, 1), got {rho}.")
    if d < 1 or n < 1:
        raise ConfigurationError(f"Need d >= 1 and N >= 1, got d={d}, N={n}.")
    x = rng.generator.standard_normal((d, n))
    noise = rng.generator.standard_normal((d, n))
    return Batch(x=x, y=rho * x + np.sqrt(1.0 - rho**2) * noise)


def marginal_view(batch: Batch, shuffle: Shuffle) -> Batch:
    """
    Pairs `(x_i, y_{perm[i]})`.

    With a derangement these columns are treated as draws from p_X p_Y.

    Raises:
        ConfigurationError: If the shuffle length differs from the batch size.
    """
    if shuffle.n != batch.n:
        raise ConfigurationError(
            f"Shuffle of length {shuffle.n} cannot view a batch of {batch.n}."
        )
    return batch.with_y(batch.y[:, shuffle.perm])
