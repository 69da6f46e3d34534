"""Dense feed-forward network with explicit reverse-mode gradients.

Data is laid out feature-major: a batch is a `(features, N)` matrix and column
`j` of every intermediate array belongs to sample `j`.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from models.errors import ConfigurationError, NumericError, StateError
from nn.activations import Activation

SNAPSHOT_MAGIC = "infocap-mlp v1"


@dataclass
class ParameterGradients:
    """
    Gradients of a scalar w.r.t. every parameter of an `Mlp`, plus its input.

    Attributes:
        weights: One array per layer, shaped like the layer's weight matrix.
        biases: One vector per layer.
        inputs: Gradient w.r.t. the network input batch, shape `(dims[0], N)`.
    """

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    inputs: np.ndarray

    def as_list(self) -> list[np.ndarray]:
        """Flatten into the same order as `Mlp.parameters()`."""
        out: list[np.ndarray] = []
        for dw, db in zip(self.weights, self.biases):
            out.extend((dw, db))
        return out

    def scaled(self, factor: float) -> "ParameterGradients":
        return ParameterGradients(
            weights=[factor * dw for dw in self.weights],
            biases=[factor * db for db in self.biases],
            inputs=factor * self.inputs,
        )


@dataclass
class _ForwardCache:
    inputs: list[np.ndarray] = field(default_factory=list)
    pre_activations: list[np.ndarray] = field(default_factory=list)


class Mlp:
    """
    A multilayer perceptron `dims[0] -> ... -> dims[-1]`.

    Layer `l` computes `a_{l+1} = act_l(W_l a_l + b_l)` with `W_l` of shape
    `(dims[l+1], dims[l])`. `forward` caches what `backward` needs; `predict`
    is cache-free and safe to call concurrently on a network nobody mutates.
    """

    def __init__(
        self,
        layer_dims: Sequence[int],
        activations: Sequence["str | Activation"],
        weights: Sequence[np.ndarray],
        biases: Sequence[np.ndarray],
    ):
        layer_dims = [int(d) for d in layer_dims]
        if len(layer_dims) < 2 or any(d < 1 for d in layer_dims):
            raise ConfigurationError(
                f"An Mlp needs at least two positive layer widths, got {layer_dims}."
            )
        n_layers = len(layer_dims) - 1
        if len(activations) != n_layers:
            raise ConfigurationError(
                f"Expected {n_layers} activation tags for dims {layer_dims}, "
                f"got {len(activations)}."
            )
        if len(weights) != n_layers or len(biases) != n_layers:
            raise ConfigurationError("Weight/bias count does not match the layer count.")
        for index, (w, b) in enumerate(zip(weights, biases)):
            expected = (layer_dims[index + 1], layer_dims[index])
            if w.shape != expected or b.shape != (expected[0],):
                raise ConfigurationError(
                    f"Layer {index} expects W{expected} and b({expected[0]},), "
                    f"got W{w.shape} and b{b.shape}."
                )

        self.layer_dims = layer_dims
        self.activations = [Activation.parse(a) for a in activations]
        self.weights = [np.asarray(w, dtype=np.float64) for w in weights]
        self.biases = [np.asarray(b, dtype=np.float64) for b in biases]
        self._cache: Optional[_ForwardCache] = None

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    def parameters(self) -> list[np.ndarray]:
        """Live parameter arrays, ordered `[W0, b0, W1, b1, ...]`."""
        out: list[np.ndarray] = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def copy(self) -> "Mlp":
        return Mlp(
            self.layer_dims,
            self.activations,
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
        )

    def _check_input(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[0] != self.layer_dims[0]:
            raise ConfigurationError(
                f"Input must have shape ({self.layer_dims[0]}, N), got {x.shape}."
            )
        if not np.all(np.isfinite(x)):
            raise NumericError("Non-finite value in network input.", layer=0)
        return x

    def _run(self, x: np.ndarray, cache: Optional[_ForwardCache]) -> np.ndarray:
        a = self._check_input(x)
        for index, (w, b, act) in enumerate(zip(self.weights, self.biases, self.activations)):
            z = w @ a + b[:, None]
            if cache is not None:
                cache.inputs.append(a)
                cache.pre_activations.append(z)
            a = act.apply(z)
            if not np.all(np.isfinite(a)):
                raise NumericError(
                    f"Non-finite activation produced by layer {index}.", layer=index
                )
        return a

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Evaluate the batch `x` of shape `(dims[0], N)` and cache for `backward`."""
        cache = _ForwardCache()
        out = self._run(x, cache)
        self._cache = cache
        return out

    def predict(self, x: np.ndarray) -> np.ndarray:
        """Evaluate without touching the backward cache."""
        return self._run(x, None)

    def backward(self, upstream: np.ndarray) -> ParameterGradients:
        """
        Gradients of `sum_j <upstream[:, j], output[:, j]>` w.r.t. all parameters.

        Args:
            upstream: Array shaped like the last `forward` output.

        Raises:
            StateError: If no forward pass has been cached.
            ConfigurationError: If `upstream` does not match the cached output.
        """
        if self._cache is None:
            raise StateError("backward called before forward.")
        cache = self._cache
        n_cols = cache.inputs[0].shape[1]
        upstream = np.asarray(upstream, dtype=np.float64)
        if upstream.shape != (self.layer_dims[-1], n_cols):
            raise ConfigurationError(
                f"Upstream gradient must have shape ({self.layer_dims[-1]}, {n_cols}), "
                f"got {upstream.shape}."
            )

        grad_w: list[np.ndarray] = [np.empty(0)] * self.n_layers
        grad_b: list[np.ndarray] = [np.empty(0)] * self.n_layers
        delta = upstream
        for index in reversed(range(self.n_layers)):
            dz = delta * self.activations[index].derivative(cache.pre_activations[index])
            grad_w[index] = dz @ cache.inputs[index].T
            grad_b[index] = dz.sum(axis=1)
            delta = self.weights[index].T @ dz
        return ParameterGradients(weights=grad_w, biases=grad_b, inputs=delta)

    def save_snapshot(self, path: Path) -> None:
        """Write a header line followed by little-endian float64 parameters."""
        header = (
            f"{SNAPSHOT_MAGIC}; dims={','.join(str(d) for d in self.layer_dims)}; "
            f"acts={','.join(a.tag for a in self.activations)}\n"
        )
        flat = np.concatenate([p.ravel() for p in self.parameters()]).astype("<f8")
        with open(path, "wb") as handle:
            handle.write(header.encode("ascii"))
            handle.write(flat.tobytes())

    @classmethod
    def load_snapshot(cls, path: Path) -> "Mlp":
        with open(path, "rb") as handle:
            header = handle.readline().decode("ascii").strip()
            payload = handle.read()
        parts = [part.strip() for part in header.split(";")]
        if len(parts) != 3 or parts[0] != SNAPSHOT_MAGIC:
            raise ConfigurationError(f"Not an infocap snapshot: {path}")
        dims = [int(d) for d in parts[1].removeprefix("dims=").split(",")]
        # leaky_relu(0.2) carries a comma-free parameter, so a plain split is safe
        acts = parts[2].removeprefix("acts=").split(",")
        flat = np.frombuffer(payload, dtype="<f8").astype(np.float64)
        weights, biases, offset = [], [], 0
        for fan_in, fan_out in zip(dims[:-1], dims[1:]):
            weights.append(flat[offset : offset + fan_in * fan_out].reshape(fan_out, fan_in))
            offset += fan_in * fan_out
            biases.append(flat[offset : offset + fan_out].copy())
            offset += fan_out
        if offset != flat.size:
            raise ConfigurationError(
                f"Snapshot payload holds {flat.size} values, header implies {offset}."
            )
        return cls(dims, acts, weights, biases)


def mlp_new(
    layer_dims: Sequence[int],
    activations: Sequence["str | Activation"],
    seed: "int | np.random.SeedSequence",
) -> Mlp:
    """
    Create a network with Glorot-uniform weights and zero biases.

    Weights are drawn from U(-s, s) with `s = sqrt(6 / (fan_in + fan_out))`.
    The same seed always yields bitwise-identical parameters.

    Raises:
        ConfigurationError: On a dimension/activation length mismatch.
    """
    layer_dims = [int(d) for d in layer_dims]
    if len(layer_dims) < 2:
        raise ConfigurationError(f"Need at least two layer widths, got {layer_dims}.")
    if len(activations) != len(layer_dims) - 1:
        raise ConfigurationError(
            f"Expected {len(layer_dims) - 1} activation tags, got {len(activations)}."
        )
    generator = np.random.Generator(np.random.PCG64(seed))
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(generator.uniform(-limit, limit, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return Mlp(layer_dims, activations, weights, biases)
