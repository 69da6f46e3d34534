"""Cooperative capacity learning.

A generator maps latent noise to channel inputs; a discriminator scores
paired and deranged channel input/output samples. Both ascend the value
`α E log D(x, y) - E D(x, π(y))`: the discriminator K times per generator
step, the generator through the channel with the noise held fixed.
"""

from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np

from channels.scenarios import ChannelScenario
from config.logger import logger
from cortical.constraints import (
    ConstraintSpec,
    apply_output_mode,
    constraint_penalty,
    output_mode_vjp,
)
from divergence.values import value_capacity
from models.errors import ConfigurationError, DivergenceError, NumericError
from models.estimates import CapacityEstimate, ValueFunctionEval
from models.records import CorticalTracePoint
from nn.adam import DEFAULT_LR, AdamState, adam_step
from nn.mlp import Mlp, mlp_new
from sampling.batches import Batch, marginal_view
from sampling.distributions import draw
from sampling.rng import Rng
from sampling.shuffles import DEFAULT_DERANGEMENT_MODE, DerangementMode, Shuffle, derange

LatentMode = Literal["normal", "bernoulli"]

DEFAULT_LATENT_DIM = 30
DEFAULT_K_DISC_STEPS = 10
DEFAULT_HIDDEN = (100, 100)
DEFAULT_HIDDEN_ACTIVATION = "leaky_relu(0.2)"
DIVERGENCE_THRESHOLD = 1e6


@dataclass
class ChannelDraw:
    """One generator batch pushed through the channel, kept for backprop."""

    latent: np.ndarray
    raw: np.ndarray
    noise: np.ndarray
    batch: Batch


@dataclass
class CapacityLearner:
    """
    Generator/discriminator pair bound to a channel and its constraints.

    Attributes:
        generator: `latent_dim -> ... -> channel.dim`, identity output.
        discriminator: `2 channel.dim -> ... -> 1`, softplus output.
        channel: Reparameterisable scenario the inputs go through.
        constraint: Power constraints on generator outputs.
        alpha: Positive scaling of the log term.
        k_disc_steps: Discriminator steps per generator step.
        latent_dim: Width of the latent source.
        latent_mode: `normal` for continuous inputs, `bernoulli` for discrete latents.
        derangement_mode: How unpaired samples are built.
    """

    generator: Mlp
    discriminator: Mlp
    channel: ChannelScenario
    constraint: ConstraintSpec = field(default_factory=ConstraintSpec)
    alpha: float = 1.0
    k_disc_steps: int = DEFAULT_K_DISC_STEPS
    latent_dim: int = DEFAULT_LATENT_DIM
    latent_mode: LatentMode = "normal"
    derangement_mode: DerangementMode = DEFAULT_DERANGEMENT_MODE
    lr: float = DEFAULT_LR
    generator_adam: AdamState = field(init=False)
    discriminator_adam: AdamState = field(init=False)
    iteration: int = field(default=0, init=False)

    def __post_init__(self):
        if not self.alpha > 0:
            raise ConfigurationError(f"alpha must be positive, got {self.alpha}.")
        if self.k_disc_steps < 1:
            raise ConfigurationError(f"Need at least one discriminator step, got {self.k_disc_steps}.")
        if not self.channel.reparameterizable:
            raise ConfigurationError(
                f"Channel {self.channel.name!r} cannot pass gradients to the generator."
            )
        d = self.channel.dim
        if self.generator.layer_dims[0] != self.latent_dim or self.generator.layer_dims[-1] != d:
            raise ConfigurationError(
                f"Generator dims {self.generator.layer_dims} do not map "
                f"{self.latent_dim} latents to {d} channel inputs."
            )
        if self.discriminator.layer_dims[0] != 2 * d or self.discriminator.layer_dims[-1] != 1:
            raise ConfigurationError(
                f"Discriminator dims {self.discriminator.layer_dims} do not score ({d}, {d}) pairs."
            )
        if self.discriminator.activations[-1].name != "softplus":
            raise ConfigurationError("The capacity discriminator needs a softplus output.")
        if self.latent_mode not in ("normal", "bernoulli"):
            raise ConfigurationError(f"Unknown latent mode {self.latent_mode!r}.")
        self.generator_adam = AdamState.for_network(self.generator, self.lr)
        self.discriminator_adam = AdamState.for_network(self.discriminator, self.lr)

    @classmethod
    def build(
        cls,
        channel: ChannelScenario,
        seed: "int | np.random.SeedSequence",
        constraint: Optional[ConstraintSpec] = None,
        latent_dim: int = DEFAULT_LATENT_DIM,
        hidden: Sequence[int] = DEFAULT_HIDDEN,
        hidden_activation: str = DEFAULT_HIDDEN_ACTIVATION,
        **kwargs,
    ) -> "CapacityLearner":
        """Fresh learner; generator and discriminator get independent child seeds."""
        seeds = np.random.SeedSequence(seed).spawn(2) if isinstance(seed, int) else seed.spawn(2)
        d = channel.dim
        generator = mlp_new(
            [latent_dim, *hidden, d],
            [hidden_activation] * len(hidden) + ["identity"],
            seeds[0],
        )
        discriminator = mlp_new(
            [2 * d, *hidden, 1],
            [hidden_activation] * len(hidden) + ["softplus"],
            seeds[1],
        )
        return cls(
            generator=generator,
            discriminator=discriminator,
            channel=channel,
            constraint=constraint or ConstraintSpec(),
            latent_dim=latent_dim,
            **kwargs,
        )

    def sample_latent(self, n: int, rng: Rng) -> np.ndarray:
        if self.latent_mode == "bernoulli":
            return draw("bernoulli", (self.latent_dim, n), rng, p=0.5)
        return rng.generator.standard_normal((self.latent_dim, n))

    def draw_batch(self, n: int, rng: Rng, cache: bool = False) -> ChannelDraw:
        """Generate inputs, push them through the channel, keep the noise."""
        latent = self.sample_latent(n, rng)
        raw = self.generator.forward(latent) if cache else self.generator.predict(latent)
        x = apply_output_mode(raw, self.constraint)
        noise = self.channel.sample_noise(n, rng)
        y = self.channel.transform(x, noise)
        return ChannelDraw(latent=latent, raw=raw, noise=noise, batch=Batch(x=x, y=y))

    def generate(self, n: int, rng: Rng) -> np.ndarray:
        """Channel inputs from the current generator, shape `(dim, n)`."""
        return apply_output_mode(self.generator.predict(self.sample_latent(n, rng)), self.constraint)

    def _pairs(self, batch: Batch, shuffle: Shuffle) -> np.ndarray:
        return np.hstack((batch.stacked(), marginal_view(batch, shuffle).stacked()))

    def _check(self, value: float) -> None:
        if not np.isfinite(value) or abs(value) > DIVERGENCE_THRESHOLD:
            logger.error(f"Capacity value {value} left the admissible range (iteration={self.iteration})")
            raise DivergenceError(
                f"Capacity value {value} left the admissible range.",
                family="capacity",
                iteration=self.iteration,
            )

    def discriminator_step(self, n: int, rng: Rng) -> ValueFunctionEval:
        sample = self.draw_batch(n, rng)
        shuffle = derange(n, self.derangement_mode, rng)
        d = self.discriminator.forward(self._pairs(sample.batch, shuffle)).reshape(-1)
        evaluation = value_capacity(self.alpha, d[:n], d[n:])
        self._check(evaluation.total)
        upstream = np.concatenate((evaluation.grad_joint, evaluation.grad_marginal)).reshape(1, -1)
        adam_step(self.discriminator, self.discriminator.backward(-upstream), self.discriminator_adam)
        return evaluation

    def generator_step(self, n: int, rng: Rng) -> tuple[ValueFunctionEval, float]:
        """
        One ascent step of the generator on the value minus the constraint penalty.

        Returns:
            The value before the step and the penalty.
        """
        sample = self.draw_batch(n, rng, cache=True)
        shuffle = derange(n, self.derangement_mode, rng)
        x, dim = sample.batch.x, self.channel.dim
        d = self.discriminator.forward(self._pairs(sample.batch, shuffle)).reshape(-1)
        evaluation = value_capacity(self.alpha, d[:n], d[n:])
        self._check(evaluation.total)

        upstream = np.concatenate((evaluation.grad_joint, evaluation.grad_marginal)).reshape(1, -1)
        grad_in = self.discriminator.backward(upstream).inputs
        grad_x = grad_in[:dim, :n] + grad_in[:dim, n:]
        grad_y = grad_in[dim:, :n].copy()
        # marginal column i saw y[:, perm[i]]
        grad_y[:, shuffle.perm] += grad_in[dim:, n:]
        grad_x = grad_x + self.channel.vjp(x, sample.noise, grad_y)

        penalty, grad_penalty = constraint_penalty(x, self.constraint)
        grad_raw = output_mode_vjp(sample.raw, grad_x - grad_penalty, self.constraint)
        adam_step(self.generator, self.generator.backward(-grad_raw), self.generator_adam)
        return evaluation, penalty


def cortical_train(
    learner: CapacityLearner,
    iters: int,
    n: int,
    rng: Rng,
    log_every: int = 50,
) -> tuple[CapacityLearner, list[CorticalTracePoint]]:
    """
    Alternate `k_disc_steps` discriminator steps with one generator step.

    Raises:
        ConfigurationError: If `iters < 1` or `n < 2`.
        DivergenceError: If the value leaves the finite range.
    """
    if iters < 1 or n < 2:
        raise ConfigurationError(f"Need iters >= 1 and N >= 2, got iters={iters}, N={n}.")
    trace: list[CorticalTracePoint] = []
    for _ in range(iters):
        try:
            for _ in range(learner.k_disc_steps):
                learner.discriminator_step(n, rng)
            evaluation, penalty = learner.generator_step(n, rng)
        except DivergenceError:
            raise
        except NumericError as exc:
            logger.error(f"Numeric failure in capacity training at iteration {learner.iteration}: {exc}")
            raise DivergenceError(str(exc), family="capacity", iteration=learner.iteration) from exc
        point = CorticalTracePoint(
            iteration=learner.iteration,
            value_function=evaluation.total,
            capacity_nats=CapacityEstimate.from_value(evaluation.total, learner.alpha).nats,
            penalty=penalty,
        )
        trace.append(point)
        if learner.iteration % log_every == 0:
            logger.debug(
                f"cortical iteration {point.iteration}: C={point.capacity_nats:.4f} "
                f"penalty={point.penalty:.4f}"
            )
        learner.iteration += 1
    return learner, trace


def capacity_estimate(
    learner: CapacityLearner, batch: Batch, shuffle: Optional[Shuffle] = None
) -> CapacityEstimate:
    """Capacity readout `J / α + 1 - ln α` on an evaluation batch."""
    shuffle = shuffle or derange(batch.n, "shift", Rng(0))
    d = learner.discriminator.predict(learner._pairs(batch, shuffle)).reshape(-1)
    evaluation = value_capacity(learner.alpha, d[: batch.n], d[batch.n :])
    return CapacityEstimate.from_value(evaluation.total, learner.alpha)
