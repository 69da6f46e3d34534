"""Uncoded symbol alphabets with a source prior."""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from models.errors import ConfigurationError
from sampling.rng import Rng

PRIOR_TOL = 1e-9


@dataclass(frozen=True)
class Alphabet:
    """
    M channel-input symbols and the source pmf over them.

    Attributes:
        symbols: Array of shape `(dim, M)`; column `i` is symbol `i`.
        prior: Probabilities of shape `(M,)`, summing to one.
    """

    symbols: np.ndarray
    prior: np.ndarray

    def __post_init__(self):
        symbols = np.asarray(self.symbols, dtype=np.float64)
        if symbols.ndim == 1:
            symbols = symbols.reshape(1, -1)
        prior = np.asarray(self.prior, dtype=np.float64).reshape(-1)
        if symbols.ndim != 2 or symbols.shape[1] < 2:
            raise ConfigurationError(f"Need at least two symbols, got shape {symbols.shape}.")
        if prior.shape != (symbols.shape[1],):
            raise ConfigurationError(
                f"Prior has {prior.size} entries for {symbols.shape[1]} symbols."
            )
        if np.any(prior < 0) or abs(prior.sum() - 1.0) > PRIOR_TOL:
            raise ConfigurationError(f"Prior must be a pmf, got {prior.tolist()}.")
        if np.unique(symbols.T, axis=0).shape[0] != symbols.shape[1]:
            raise ConfigurationError("Alphabet symbols must be distinct.")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "prior", prior)

    @property
    def m(self) -> int:
        return int(self.symbols.shape[1])

    @property
    def dim(self) -> int:
        return int(self.symbols.shape[0])

    @property
    def bits_per_symbol(self) -> float:
        return math.log2(self.m)

    @property
    def symbol_energy(self) -> float:
        """Average energy per transmitted symbol under the prior."""
        return float(np.sum(self.prior * np.sum(self.symbols**2, axis=0)))

    @property
    def entropy_bits(self) -> float:
        p = self.prior[self.prior > 0]
        return float(-np.sum(p * np.log2(p)))

    def with_prior(self, prior: Sequence[float]) -> "Alphabet":
        return Alphabet(symbols=self.symbols, prior=np.asarray(prior, dtype=np.float64))

    def sample(self, n: int, rng: Rng) -> tuple[np.ndarray, np.ndarray]:
        """Draw `n` source symbols: their indices `(n,)` and values `(dim, n)`."""
        if n < 1:
            raise ConfigurationError(f"Need n >= 1, got {n}.")
        indices = rng.generator.choice(self.m, size=n, p=self.prior)
        return indices, self.symbols[:, indices]


def pam(m: int, prior: Optional[Sequence[float]] = None) -> Alphabet:
    """M-PAM on the odd integers `{-(M-1), ..., -1, 1, ..., M-1}`, uniform unless given a prior."""
    if m < 2 or m % 2:
        raise ConfigurationError(f"PAM order must be an even number >= 2, got {m}.")
    symbols = np.arange(-(m - 1), m, 2, dtype=np.float64)
    weights = np.full(m, 1.0 / m) if prior is None else np.asarray(prior, dtype=np.float64)
    return Alphabet(symbols=symbols, prior=weights)


def bpsk() -> Alphabet:
    return pam(2)


def pam4_nonuniform(p: float = 0.05) -> Alphabet:
    """
    4-PAM on `{-3, -1, 1, 3}` with prior `[(1-P)/2, P/2, (1-P)/2, P/2]`.

    `-1` and `3` are the rare symbols and share mass `P`. The symbol energy is
    5 for every `P`, the same as uniform 4-PAM.
    """
    if not 0.0 <= p <= 1.0:
        raise ConfigurationError(f"P must lie in [0, 1], got {p}.")
    return pam(4, [(1.0 - p) / 2.0, p / 2.0, (1.0 - p) / 2.0, p / 2.0])


ALPHABETS = ("bpsk", "pam4", "pam4_nonuniform")


def build_alphabet(name: str, p: float = 0.05) -> Alphabet:
    """
    Alphabet from its config tag.

    Raises:
        ConfigurationError: On an unknown tag.
    """
    match name:
        case "bpsk":
            return bpsk()
        case "pam4":
            return pam(4)
        case "pam4_nonuniform":
            return pam4_nonuniform(p)
        case _:
            raise ConfigurationError(f"Unknown alphabet {name!r}; expected one of {list(ALPHABETS)}.")


def noise_std_from_ebn0(ebn0_db: float, alphabet: Alphabet) -> float:
    """
    Per-dimension noise standard deviation for a given Eb/N0 in dB.

    `Eb = Es / log2 M` with `Es` the prior-weighted symbol energy, and the
    noise variance per real dimension is `N0 / 2`.
    """
    ebn0 = 10.0 ** (ebn0_db / 10.0)
    eb = alphabet.symbol_energy / alphabet.bits_per_symbol
    return math.sqrt(eb / (2.0 * ebn0))
