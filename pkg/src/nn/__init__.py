"""Dense networks, Adam and gradient checking."""

from .activations import Activation, softplus
from .adam import AdamState, adam_step
from .gradcheck import gradient_check
from .mlp import Mlp, ParameterGradients, mlp_new

__all__ = [
    "Activation",
    "AdamState",
    "Mlp",
    "ParameterGradients",
    "adam_step",
    "gradient_check",
    "mlp_new",
    "softplus",
]
