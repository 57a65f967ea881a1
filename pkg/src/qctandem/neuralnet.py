"""Minimal dense feed-forward networks with exact backpropagation.

Covers the standalone classifier (two equal-width tanh hidden layers and a
sigmoid output unit) and the single sigmoid-unit readout head that
post-processes per-qubit measurement expectations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ACTIVATIONS = ("tanh", "sigmoid", "leaky_relu", "identity")
LEAKY_SLOPE = 0.01


def _activate(name: str, z: np.ndarray) -> np.ndarray:
    if name == "tanh":
        return np.tanh(z)
    if name == "sigmoid":
        return 1.0 / (1.0 + np.exp(-z))
    if name == "leaky_relu":
        return np.where(z > 0, z, LEAKY_SLOPE * z)
    if name == "identity":
        return z
    raise ValueError(f"unknown activation {name!r}")


def _activate_deriv(name: str, z: np.ndarray, a: np.ndarray) -> np.ndarray:
    # a is the already-computed activation value at z
    if name == "tanh":
        return 1.0 - a * a
    if name == "sigmoid":
        return a * (1.0 - a)
    if name == "leaky_relu":
        return np.where(z > 0, 1.0, LEAKY_SLOPE)
    if name == "identity":
        return np.ones_like(z)
    raise ValueError(f"unknown activation {name!r}")


@dataclass
class DenseLayer:
    weights: np.ndarray    # (out, in)
    bias: np.ndarray       # (out,)
    activation: str

    @property
    def n_params(self) -> int:
        return self.weights.size + self.bias.size


@dataclass
class Mlp:
    layers: list[DenseLayer]

    @property
    def n_params(self) -> int:
        return sum(layer.n_params for layer in self.layers)

    @property
    def n_inputs(self) -> int:
        return self.layers[0].weights.shape[1]

    def to_vector(self) -> np.ndarray:
        chunks = []
        for layer in self.layers:
            chunks.append(layer.weights.ravel())
            chunks.append(layer.bias)
        return np.concatenate(chunks) if chunks else np.zeros(0)

    def with_vector(self, vec: np.ndarray) -> "Mlp":
        """New Mlp with the same architecture and parameters taken from a
        flat vector (weights row-major, then bias, per layer)."""
        if vec.shape != (self.n_params,):
            raise ValueError(f"expected vector of length {self.n_params}, "
                             f"got {vec.shape}")
        layers = []
        pos = 0
        for layer in self.layers:
            w = vec[pos:pos + layer.weights.size].reshape(layer.weights.shape)
            pos += layer.weights.size
            b = vec[pos:pos + layer.bias.size]
            pos += layer.bias.size
            layers.append(DenseLayer(w.copy(), b.copy(), layer.activation))
        return Mlp(layers)


def _dense(n_out: int, n_in: int, activation: str) -> DenseLayer:
    return DenseLayer(np.zeros((n_out, n_in)), np.zeros(n_out), activation)


def build_classical_net(n_inputs: int) -> Mlp:
    """Two hidden layers of the input width (tanh) and a sigmoid output
    unit; zero-initialized."""
    if n_inputs < 1:
        raise ValueError(f"n_inputs must be >= 1, got {n_inputs}")
    return Mlp([_dense(n_inputs, n_inputs, "tanh"),
                _dense(n_inputs, n_inputs, "tanh"),
                _dense(1, n_inputs, "sigmoid")])


def build_head(n_inputs: int) -> Mlp:
    """Single sigmoid unit mapping a measurement vector to a probability;
    zero-initialized."""
    if n_inputs < 1:
        raise ValueError(f"n_inputs must be >= 1, got {n_inputs}")
    return Mlp([_dense(1, n_inputs, "sigmoid")])


def forward(mlp: Mlp, x) -> tuple[np.ndarray, list]:
    """Affine-then-activation composition. Returns the output vector and a
    cache of (input, pre-activation, activation) per layer for backward."""
    a = np.asarray(x, dtype=float)
    if a.shape != (mlp.n_inputs,):
        raise ValueError(f"expected input of length {mlp.n_inputs}, got {a.shape}")
    cache = []
    for layer in mlp.layers:
        z = layer.weights @ a + layer.bias
        out = _activate(layer.activation, z)
        cache.append((a, z, out))
        a = out
    return a, cache


def backward(mlp: Mlp, cache: list, d_output) -> tuple[list[tuple[np.ndarray, np.ndarray]], np.ndarray]:
    """Reverse-mode gradients. Returns ([(dW, db) per layer], d_input)."""
    if len(cache) != len(mlp.layers):
        raise ValueError("cache does not match network depth")
    delta = np.asarray(d_output, dtype=float)
    grads: list[tuple[np.ndarray, np.ndarray]] = [None] * len(mlp.layers)
    for i in range(len(mlp.layers) - 1, -1, -1):
        layer = mlp.layers[i]
        a_in, z, a_out = cache[i]
        if delta.shape != z.shape:
            raise ValueError(f"bad d_output shape at layer {i}: {delta.shape}")
        dz = delta * _activate_deriv(layer.activation, z, a_out)
        grads[i] = (np.outer(dz, a_in), dz)
        delta = layer.weights.T @ dz
    return grads, delta


def init_params(mlp: Mlp, seed: int) -> Mlp:
    """Fresh parameters: weights uniform in +-sqrt(6 / (fan_in + fan_out)),
    biases zero; deterministic per seed."""
    rng = np.random.default_rng(seed)
    layers = []
    for layer in mlp.layers:
        n_out, n_in = layer.weights.shape
        bound = np.sqrt(6.0 / (n_in + n_out))
        w = rng.uniform(-bound, bound, size=(n_out, n_in))
        layers.append(DenseLayer(w, np.zeros(n_out), layer.activation))
    return Mlp(layers)
