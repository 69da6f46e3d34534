"""f-divergence generators used by the DIME family of estimators.

Each generator fixes how the discriminator output D is turned into the
variational function T, the Fenchel conjugate f*, and the readout
log (f*)'(T) that recovers the log density ratio at the optimum.

| family | f(u)                            | f*(t)          | T(D)       | D at ratio R |
|--------|---------------------------------|----------------|------------|--------------|
| kl     | u log u                         | e^{t-1}        | 1 + log D  | R            |
| gan    | u log u - (u+1) log(u+1) + log4 | -log(1 - e^t)  | log(1 - D) | 1 / (1 + R)  |
| hd     | (sqrt(u) - 1)^2                 | t / (1 - t)    | 1 - D      | R^{-1/2}     |
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from models.errors import ConfigurationError, NumericError

LOG_FLOOR = 1e-300

Array = np.ndarray
ArrayFn = Callable[[Array], Array]


def safe_log(values: Array) -> Array:
    """Natural log with arguments floored at `LOG_FLOOR`."""
    return np.log(np.maximum(values, LOG_FLOOR))


@dataclass(frozen=True)
class FGenerator:
    """
    Descriptor of one f-divergence family.

    Attributes:
        name: `kl`, `gan` or `hd`.
        f: The convex generator, with f(1) = 0.
        conjugate: Fenchel conjugate f*.
        conjugate_deriv: Derivative (f*)'.
        output_activation: Activation mapping raw network output to the D domain.
        to_variational: Change of variables D -> T.
        readout: D -> log density ratio, i.e. log (f*)'(T(D)).
        optimal_discriminator: Density ratio R -> optimal D.
        offset: Constant the family's closed-form value function carries.
        lower: Smallest admissible D (inclusive, boundary values are floored).
        upper: Largest admissible D (inclusive).
    """

    name: str
    f: ArrayFn
    conjugate: ArrayFn
    conjugate_deriv: ArrayFn
    output_activation: str
    to_variational: ArrayFn
    readout: ArrayFn
    optimal_discriminator: ArrayFn
    offset: float
    lower: float
    upper: float

    def check_domain(self, d: Array) -> None:
        """
        Raises:
            NumericError: If any D is non-finite or outside the family's domain.
        """
        if not np.all(np.isfinite(d)) or np.any(d < self.lower) or np.any(d > self.upper):
            raise NumericError(
                f"Discriminator output outside the {self.name} domain "
                f"[{self.lower}, {self.upper}].",
                family=self.name,
            )


KL = FGenerator(
    name="kl",
    f=lambda u: u * safe_log(u),
    conjugate=lambda t: np.exp(t - 1.0),
    conjugate_deriv=lambda t: np.exp(t - 1.0),
    output_activation="softplus",
    to_variational=lambda d: 1.0 + safe_log(d),
    readout=lambda d: safe_log(d),
    optimal_discriminator=lambda r: np.asarray(r, dtype=np.float64),
    offset=0.0,
    lower=0.0,
    upper=math.inf,
)

GAN = FGenerator(
    name="gan",
    f=lambda u: u * safe_log(u) - (u + 1.0) * np.log(u + 1.0) + math.log(4.0),
    conjugate=lambda t: -np.log1p(-np.exp(t)),
    conjugate_deriv=lambda t: np.exp(t) / (-np.expm1(t)),
    output_activation="sigmoid",
    to_variational=lambda d: safe_log(1.0 - d),
    readout=lambda d: safe_log(1.0 - d) - safe_log(d),
    optimal_discriminator=lambda r: 1.0 / (1.0 + np.asarray(r, dtype=np.float64)),
    offset=math.log(4.0),
    lower=0.0,
    upper=1.0,
)

HD = FGenerator(
    name="hd",
    f=lambda u: (np.sqrt(u) - 1.0) ** 2,
    conjugate=lambda t: t / (1.0 - t),
    conjugate_deriv=lambda t: 1.0 / (1.0 - t) ** 2,
    output_activation="softplus",
    to_variational=lambda d: 1.0 - d,
    readout=lambda d: -2.0 * safe_log(d),
    optimal_discriminator=lambda r: 1.0 / np.sqrt(np.asarray(r, dtype=np.float64)),
    offset=0.0,
    lower=0.0,
    upper=math.inf,
)

GENERATORS: dict[str, FGenerator] = {gen.name: gen for gen in (KL, GAN, HD)}


def get_generator(name: str) -> FGenerator:
    """
    Raises:
        ConfigurationError: If `name` is not a known generator.
    """
    try:
        return GENERATORS[name]
    except KeyError:
        raise ConfigurationError(
            f"Unknown f-divergence {name!r}; expected one of {sorted(GENERATORS)}."
        ) from None
