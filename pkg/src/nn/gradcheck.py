"""Finite-difference verification of `Mlp.backward`."""

from typing import Callable

import numpy as np

from models.estimates import GradientCheckReport
from nn.mlp import Mlp

# loss(output) -> (scalar value, d value / d output)
ScalarLoss = Callable[[np.ndarray], tuple[float, np.ndarray]]

DEFAULT_STEP = 1e-6


def gradient_check(
    net: Mlp,
    scalar_loss: ScalarLoss,
    batch: np.ndarray,
    tol: float,
    step: float = DEFAULT_STEP,
) -> GradientCheckReport:
    """
    Compare analytic parameter gradients with central differences.

    The relative error of each parameter array is `|a - n| / (|a| + |n|)`
    in Euclidean norm (zero when both vanish); the report keeps the maximum.

    Args:
        net: Network under test. Parameters are restored after probing.
        scalar_loss: Deterministic loss of the network output and its gradient.
        batch: Input batch, shape `(dims[0], N)`.
        tol: Pass threshold on the maximum relative error.
        step: Central-difference step.
    """
    output = net.forward(batch)
    _, upstream = scalar_loss(output)
    analytic = net.backward(upstream).as_list()

    worst = 0.0
    n_params = 0
    for param, grad in zip(net.parameters(), analytic):
        numeric = np.zeros_like(param)
        flat = param.reshape(-1)
        numeric_flat = numeric.reshape(-1)
        for index in range(flat.size):
            original = flat[index]
            flat[index] = original + step
            loss_plus, _ = scalar_loss(net.predict(batch))
            flat[index] = original - step
            loss_minus, _ = scalar_loss(net.predict(batch))
            flat[index] = original
            numeric_flat[index] = (loss_plus - loss_minus) / (2.0 * step)
        n_params += flat.size
        scale = np.linalg.norm(grad) + np.linalg.norm(numeric)
        if scale > 0.0:
            worst = max(worst, float(np.linalg.norm(grad - numeric) / scale))

    return GradientCheckReport(
        max_relative_error=worst,
        tol=tol,
        passed=worst <= tol,
        n_parameters=n_params,
    )
