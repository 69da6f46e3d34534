"""Adaptive-moment optimiser operating in place on `Mlp` parameters."""

from dataclasses import dataclass, field

import numpy as np

from models.errors import ConfigurationError
from nn.mlp import Mlp, ParameterGradients

DEFAULT_LR = 5e-4
DEFAULT_BETA1 = 0.9
DEFAULT_BETA2 = 0.999
DEFAULT_EPS = 1e-8


@dataclass
class AdamState:
    """
    Optimiser state for one network.

    Moments are created lazily on the first step with zeros of each
    parameter's shape; `step_count` grows by exactly one per `adam_step`.
    """

    lr: float = DEFAULT_LR
    beta1: float = DEFAULT_BETA1
    beta2: float = DEFAULT_BETA2
    eps: float = DEFAULT_EPS
    step_count: int = 0
    first_moment: list[np.ndarray] = field(default_factory=list)
    second_moment: list[np.ndarray] = field(default_factory=list)

    @classmethod
    def for_network(cls, net: Mlp, lr: float = DEFAULT_LR, **kwargs) -> "AdamState":
        state = cls(lr=lr, **kwargs)
        state.first_moment = [np.zeros_like(p) for p in net.parameters()]
        state.second_moment = [np.zeros_like(p) for p in net.parameters()]
        return state


def adam_step(net: Mlp, grads: ParameterGradients, state: AdamState) -> None:
    """
    Apply one bias-corrected Adam update that *descends* `grads`.

    Callers maximising a value function pass the negated gradient.

    Raises:
        ConfigurationError: If gradient or moment shapes do not match the network.
    """
    params = net.parameters()
    grad_list = grads.as_list()
    if len(grad_list) != len(params):
        raise ConfigurationError(
            f"Got {len(grad_list)} gradient arrays for {len(params)} parameters."
        )
    if not state.first_moment:
        state.first_moment = [np.zeros_like(p) for p in params]
        state.second_moment = [np.zeros_like(p) for p in params]
    for p, g, m in zip(params, grad_list, state.first_moment):
        if p.shape != g.shape or p.shape != m.shape:
            raise ConfigurationError(
                f"Shape mismatch: parameter {p.shape}, gradient {g.shape}, moment {m.shape}."
            )

    state.step_count += 1
    bc1 = 1.0 - state.beta1**state.step_count
    bc2 = 1.0 - state.beta2**state.step_count
    step_size = state.lr / bc1

    for p, g, m, v in zip(params, grad_list, state.first_moment, state.second_moment):
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * (g * g)
        p -= step_size * m / (np.sqrt(v / bc2) + state.eps)
