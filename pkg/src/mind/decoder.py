"""Supervised maximum-mutual-information decoding.

An M-output sigmoid network reads channel outputs. Training ascends

    E_y[ sum_i log D_i(y) ] + E_{x,y}[ log(1 - D_x(y)) ]

whose maximiser is `D_i = 1 / (1 + P(x_i | y))`, so `(1 - D_i) / D_i` is the
posterior of symbol `i`.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import entr

from channels.scenarios import ChannelScenario
from config.logger import logger
from divergence.generators import LOG_FLOOR, safe_log
from mind.alphabet import Alphabet
from models.errors import ConfigurationError, DivergenceError, NumericError
from models.estimates import EntropyEstimate
from nn.adam import DEFAULT_LR, AdamState, adam_step
from nn.mlp import Mlp, mlp_new
from sampling.rng import Rng

DIVERGENCE_THRESHOLD = 1e6
DEFAULT_HIDDEN = (100, 100)
DEFAULT_HIDDEN_ACTIVATION = "relu"
_OUTPUT_FLOOR = 1e-12


@dataclass(frozen=True)
class PosteriorTable:
    """
    Posteriors for a batch of channel outputs, one column per output.

    Attributes:
        raw: `(1 - D_i) / D_i`, shape `(M, N)`.
        normalized: `raw` rescaled so each column sums to one.
    """

    raw: np.ndarray
    normalized: np.ndarray

    @classmethod
    def from_outputs(cls, d: np.ndarray) -> "PosteriorTable":
        d = np.atleast_2d(np.asarray(d, dtype=np.float64))
        if np.any(d < 0) or np.any(d > 1):
            raise NumericError("Decoder outputs must lie in [0, 1].", family="mind")
        raw = (1.0 - d) / np.maximum(d, _OUTPUT_FLOOR)
        return cls(raw=raw, normalized=normalize_posteriors(raw))

    @property
    def information_bits(self) -> np.ndarray:
        """A-posteriori information `-log2 P(x_i | y)`."""
        return -np.log2(np.maximum(self.normalized, LOG_FLOOR))


def decide(table: PosteriorTable) -> np.ndarray:
    """Index of the largest normalised posterior per column, lowest index on ties."""
    return np.argmax(table.normalized, axis=0)


def normalize_posteriors(raw: np.ndarray) -> np.ndarray:
    """Rescale columns to sum to one; an all-zero column becomes uniform."""
    raw = np.atleast_2d(np.asarray(raw, dtype=np.float64))
    totals = raw.sum(axis=0, keepdims=True)
    uniform = np.full_like(raw, 1.0 / raw.shape[0])
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(totals > 0, raw / np.where(totals > 0, totals, 1.0), uniform)


def entropies_from_posteriors(posteriors: np.ndarray) -> EntropyEstimate:
    """
    Source entropy, conditional entropy, MI and error probability, in bits.

    `H(X)` uses the Monte Carlo average of the posterior columns as the source
    pmf; `P_e` is one minus the mean of the largest posterior.

    Raises:
        ConfigurationError: If there are no columns.
    """
    p = np.atleast_2d(np.asarray(posteriors, dtype=np.float64))
    n = p.shape[1]
    if n < 1:
        raise ConfigurationError("Entropy estimation needs at least one channel output.")
    source_pmf = p.mean(axis=1)
    h_x = float(np.sum(entr(source_pmf)) / math.log(2.0))
    h_x_given_y = float(np.mean(np.sum(entr(p), axis=0)) / math.log(2.0))
    # H(X) >= H(X|Y) by concavity; clip float noise
    h_x_given_y = min(h_x_given_y, h_x)
    error = float(np.clip(1.0 - np.mean(p.max(axis=0)), 0.0, 1.0))
    return EntropyEstimate(
        source_entropy_bits=max(h_x, 0.0),
        conditional_entropy_bits=max(h_x_given_y, 0.0),
        mutual_information_bits=max(h_x - h_x_given_y, 0.0),
        error_probability=error,
        n_samples=n,
    )


class MindDecoder:
    """
    An M-output sigmoid discriminator over channel outputs.

    Attributes:
        net: Network `dim_y -> ... -> M` with a sigmoid output.
        alphabet: Symbols the decoder chooses between.
        adam: Optimiser state, exclusively owned.
        iteration: Completed training steps.
    """

    def __init__(self, net: Mlp, alphabet: Alphabet, lr: float = DEFAULT_LR):
        if net.layer_dims[-1] != alphabet.m:
            raise ConfigurationError(
                f"Decoder has {net.layer_dims[-1]} outputs for an alphabet of {alphabet.m} symbols."
            )
        if net.activations[-1].name != "sigmoid":
            raise ConfigurationError(f"Decoder needs a sigmoid output, got {net.activations[-1].tag}.")
        self.net = net
        self.alphabet = alphabet
        self.adam = AdamState.for_network(net, lr)
        self.iteration = 0

    @classmethod
    def build(
        cls,
        alphabet: Alphabet,
        d_y: int,
        seed: "int | np.random.SeedSequence",
        hidden: Sequence[int] = DEFAULT_HIDDEN,
        hidden_activation: str = DEFAULT_HIDDEN_ACTIVATION,
        lr: float = DEFAULT_LR,
    ) -> "MindDecoder":
        dims = [d_y, *hidden, alphabet.m]
        activations = [hidden_activation] * len(hidden) + ["sigmoid"]
        return cls(mlp_new(dims, activations, seed), alphabet, lr)

    def _diverged(self, message: str) -> DivergenceError:
        logger.error(f"{message} (family=mind, iteration={self.iteration})")
        return DivergenceError(message, family="mind", iteration=self.iteration)

    def train_step(self, y: np.ndarray, indices: np.ndarray) -> float:
        """
        One Adam ascent step on the supervised value.

        Args:
            y: Channel outputs, shape `(dim_y, N)`.
            indices: Index of the symbol sent for each column, shape `(N,)`.

        Returns:
            The value before the step.

        Raises:
            DivergenceError: If the value is non-finite or exceeds the abort threshold.
        """
        indices = np.asarray(indices).reshape(-1)
        n = indices.size
        try:
            d = self.net.forward(y)
        except NumericError as exc:
            raise self._diverged(str(exc)) from exc
        if d.shape[1] != n:
            raise ConfigurationError(f"Got {d.shape[1]} channel outputs for {n} sent symbols.")
        columns = np.arange(n)
        d_sent = d[indices, columns]
        value = float(np.sum(safe_log(d)) / n + np.mean(safe_log(1.0 - d_sent)))
        if not math.isfinite(value) or abs(value) > DIVERGENCE_THRESHOLD:
            raise self._diverged(f"Value {value} left the admissible range")

        grad = 1.0 / (n * np.maximum(d, LOG_FLOOR))
        grad[indices, columns] -= 1.0 / (n * np.maximum(1.0 - d_sent, LOG_FLOOR))
        adam_step(self.net, self.net.backward(-grad), self.adam)
        self.iteration += 1
        return value

    def outputs(self, y: np.ndarray) -> np.ndarray:
        return self.net.predict(np.atleast_2d(y))

    def posterior(self, y: np.ndarray) -> PosteriorTable:
        return PosteriorTable.from_outputs(self.outputs(y))

    def decode(self, y: np.ndarray) -> np.ndarray:
        """Argmax of the normalised posterior per column, lowest index on ties."""
        return decide(self.posterior(y))

    def estimate_entropies(self, y: np.ndarray) -> EntropyEstimate:
        return entropies_from_posteriors(self.posterior(y).normalized)


def posterior(decoder: MindDecoder, y: np.ndarray) -> PosteriorTable:
    return decoder.posterior(y)


def decode(decoder: MindDecoder, y: np.ndarray) -> np.ndarray:
    return decoder.decode(y)


def estimate_entropies(decoder: MindDecoder, y: np.ndarray) -> EntropyEstimate:
    return decoder.estimate_entropies(y)


def mind_train(
    decoder: MindDecoder,
    channel: "ChannelScenario | Sequence[ChannelScenario]",
    iters: int,
    n: int,
    rng: Rng,
    log_every: int = 200,
) -> MindDecoder:
    """
    Train on fresh `(x, y)` batches: `x` from the alphabet prior, `y` from the channel.

    Passing several channels cycles through them batch by batch, which trains
    one decoder across a whole SNR sweep.

    Raises:
        ConfigurationError: On invalid sizes or a channel that cannot carry the symbols.
        DivergenceError: If training leaves the finite range.
    """
    channels: list[ChannelScenario] = (
        [channel] if isinstance(channel, ChannelScenario) else list(channel)
    )
    if iters < 1 or n < 1 or not channels:
        raise ConfigurationError(f"Need iters >= 1, N >= 1 and a channel, got iters={iters}, N={n}.")
    for scenario in channels:
        if scenario.dim != decoder.alphabet.dim:
            raise ConfigurationError(
                f"Channel {scenario.name!r} takes {scenario.dim}-dimensional inputs, "
                f"symbols are {decoder.alphabet.dim}-dimensional."
            )
    value: Optional[float] = None
    for step in range(iters):
        scenario = channels[step % len(channels)]
        indices, x = decoder.alphabet.sample(n, rng)
        y = scenario.apply(x, rng)
        value = decoder.train_step(y, indices)
        if decoder.iteration % log_every == 0:
            logger.debug(f"mind iteration {decoder.iteration}: value={value:.4f}")
    return decoder
