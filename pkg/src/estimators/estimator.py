"""Trainable mutual-information estimators on the deranged architecture.

One network scores concatenated `(x, y)` columns. Joint and marginal columns
go through a single forward pass; CPC scores all N^2 pairings instead.
"""

import math
from typing import Optional, Sequence

import numpy as np
from scipy.special import expit

from config.logger import logger
from divergence.generators import GAN, safe_log
from divergence.values import (
    DEFAULT_EMA_DECAY,
    MineEma,
    value_cpc,
    value_fdime,
    value_gamma,
    value_mine,
    value_nwj,
    value_smile,
)
from estimators.families import Family
from models.errors import ConfigurationError, DivergenceError, NumericError
from models.estimates import MiEstimate, ValueFunctionEval
from nn.adam import DEFAULT_LR, AdamState, adam_step
from nn.mlp import Mlp, mlp_new
from sampling.batches import Batch, marginal_view
from sampling.shuffles import DEFAULT_DERANGEMENT_MODE, DerangementMode, Shuffle

DIVERGENCE_THRESHOLD = 1e6
DEFAULT_HIDDEN = (256, 256)
DEFAULT_HIDDEN_ACTIVATION = "relu"


class MiEstimator:
    """
    A discriminator network bound to an estimator family and its optimiser.

    Attributes:
        family: Parsed family tag.
        net: Network with input width `d_x + d_y` and a single output whose
            activation matches the family.
        derangement_mode: How marginal pairs are built by the caller.
        adam: Optimiser state, exclusively owned.
        ema: MINE partition moving average (unused by other families).
        allow_fixed_points: Accept non-derangement shuffles in `train_step`.
        iteration: Number of completed training steps.
        last_estimate: Readout computed from the most recent training batch.
    """

    def __init__(
        self,
        family: "str | Family",
        net: Mlp,
        derangement_mode: DerangementMode = DEFAULT_DERANGEMENT_MODE,
        lr: float = DEFAULT_LR,
        ema_decay: float = DEFAULT_EMA_DECAY,
        allow_fixed_points: bool = False,
    ):
        self.family = Family.parse(family)
        if net.layer_dims[-1] != 1:
            raise ConfigurationError(
                f"Estimator networks have one output, got {net.layer_dims[-1]}."
            )
        if net.activations[-1].name != self.family.output_activation:
            raise ConfigurationError(
                f"{self.family.tag} needs a {self.family.output_activation} output, "
                f"got {net.activations[-1].tag}."
            )
        self.net = net
        self.derangement_mode = derangement_mode
        self.adam = AdamState.for_network(net, lr)
        self.ema = MineEma(decay=ema_decay)
        self.allow_fixed_points = allow_fixed_points
        self.iteration = 0
        self.last_estimate: Optional[MiEstimate] = None

    @classmethod
    def build(
        cls,
        family: "str | Family",
        d_x: int,
        d_y: int,
        seed: "int | np.random.SeedSequence",
        hidden: Sequence[int] = DEFAULT_HIDDEN,
        hidden_activation: str = DEFAULT_HIDDEN_ACTIVATION,
        **kwargs,
    ) -> "MiEstimator":
        """Fresh estimator with the default two-hidden-layer architecture."""
        family = Family.parse(family)
        dims = [d_x + d_y, *hidden, 1]
        activations = [hidden_activation] * len(hidden) + [family.output_activation]
        return cls(family, mlp_new(dims, activations, seed), **kwargs)

    def _pair_inputs(self, batch: Batch, shuffle: Optional[Shuffle]) -> np.ndarray:
        if self.family.name == "cpc":
            n = batch.n
            return np.vstack((np.repeat(batch.x, n, axis=1), np.tile(batch.y, (1, n))))
        if shuffle is None:
            return batch.stacked()
        return np.hstack((batch.stacked(), marginal_view(batch, shuffle).stacked()))

    def _evaluate(
        self, outputs: np.ndarray, n: int
    ) -> tuple[ValueFunctionEval, np.ndarray, float, Optional[MineEma]]:
        """
        Value of the trained objective, d value / d output, the readout, and
        the updated EMA for MINE.
        """
        family = self.family
        out = outputs.reshape(-1)
        if family.name == "cpc":
            evaluation = value_cpc(out.reshape(n, n))
            return evaluation, evaluation.grad_joint.reshape(1, -1), evaluation.total, None

        joint, marg = out[:n], out[n:]
        new_ema = None
        match family.name:
            case "kl_dime" | "gan_dime" | "hd_dime":
                evaluation = value_fdime(family.generator, joint, marg)
                readout = float(np.mean(family.generator.readout(joint)))
                grad = np.concatenate((evaluation.grad_joint, evaluation.grad_marginal))
            case "gamma_dime":
                evaluation = value_gamma(family.param, joint, marg)
                readout = float(family.param * np.mean(safe_log(joint)))
                grad = np.concatenate((evaluation.grad_joint, evaluation.grad_marginal))
            case "mine":
                evaluation, new_ema = value_mine(joint, marg, self.ema)
                readout = evaluation.total
                grad = np.concatenate((evaluation.grad_joint, evaluation.grad_marginal))
            case "nwj":
                evaluation = value_nwj(joint, marg)
                readout = evaluation.total
                grad = np.concatenate((evaluation.grad_joint, evaluation.grad_marginal))
            case _:
                # smile: train the gan objective on D = sigmoid(-T), so e^T tracks the ratio
                d_all = expit(-out)
                evaluation = value_fdime(GAN, d_all[:n], d_all[n:])
                readout = value_smile(joint, marg, family.param).total
                d_grad = np.concatenate((evaluation.grad_joint, evaluation.grad_marginal))
                grad = -d_grad * d_all * (1.0 - d_all)
        return evaluation, grad.reshape(1, -1), readout, new_ema

    def _diverged(self, message: str) -> DivergenceError:
        logger.error(f"{message} (family={self.family.tag}, iteration={self.iteration})")
        return DivergenceError(message, family=self.family.tag, iteration=self.iteration)

    def train_step(self, batch: Batch, shuffle: Shuffle) -> float:
        """
        One Adam ascent step on the family's value function.

        Returns:
            The value before the step. The matching readout is kept in
            `last_estimate`.

        Raises:
            ConfigurationError: If `shuffle` has fixed points and they are not allowed.
            DivergenceError: If the value is non-finite or exceeds the abort threshold.
        """
        if self.family.name != "cpc" and shuffle.fixed_points and not self.allow_fixed_points:
            raise ConfigurationError(
                f"Training on a shuffle with {shuffle.fixed_points} fixed points; "
                "use a derangement or enable allow_fixed_points."
            )
        try:
            outputs = self.net.forward(self._pair_inputs(batch, shuffle))
            evaluation, grad, readout, new_ema = self._evaluate(outputs, batch.n)
        except DivergenceError:
            raise
        except NumericError as exc:
            raise self._diverged(str(exc)) from exc

        value = evaluation.total
        if not math.isfinite(value) or abs(value) > DIVERGENCE_THRESHOLD:
            raise self._diverged(f"Value {value} left the admissible range")
        if not math.isfinite(readout):
            raise self._diverged(f"Non-finite readout {readout}")

        grads = self.net.backward(-grad)
        adam_step(self.net, grads, self.adam)
        if new_ema is not None:
            self.ema = new_ema
        self.iteration += 1
        self.last_estimate = MiEstimate(value_nats=readout, n_samples=batch.n, family=self.family.tag)
        return value

    def estimate_mi(self, batch: Batch, shuffle: Optional[Shuffle] = None) -> MiEstimate:
        """
        Readout on `batch` without training.

        f-DIME and γ-DIME readouts use the joint samples only, so `shuffle`
        may be omitted for them.

        Raises:
            ConfigurationError: If the family needs marginal pairs and no shuffle is given.
        """
        joint_only = self.family.joint_only_readout
        if shuffle is None and not joint_only and self.family.name != "cpc":
            raise ConfigurationError(f"{self.family.tag} readout needs a marginal shuffle.")
        outputs = self.net.predict(self._pair_inputs(batch, None if joint_only else shuffle))
        out = outputs.reshape(-1)
        n = batch.n
        match self.family.name:
            case "kl_dime" | "gan_dime" | "hd_dime":
                value = float(np.mean(self.family.generator.readout(out)))
            case "gamma_dime":
                value = float(self.family.param * np.mean(safe_log(out)))
            case "mine":
                value = value_mine(out[:n], out[n:], self.ema)[0].total
            case "nwj":
                value = value_nwj(out[:n], out[n:]).total
            case "smile":
                value = value_smile(out[:n], out[n:], self.family.param).total
            case _:
                value = value_cpc(out.reshape(n, n)).total
        return MiEstimate(value_nats=value, n_samples=n, family=self.family.tag)
