"""The five classifier families behind one predict/gradient interface.

Readout conventions: parity models map the circuit output to the class-1
probability p = P(odd parity) = (1 - <Z x ... x Z>) / 2; head models feed the
per-qubit expectation vector (<Z_0>, ..., <Z_{n-1}>) into a sigmoid unit.
Probabilities are clamped to [1e-7, 1 - 1e-7] to keep the cross-entropy
finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import ParamCircuit, build_combined, build_feature_var, validate_circuit
from .data import Dataset
from .gradients import shift_rule_grad
from .neuralnet import Mlp, backward, build_classical_net, build_head, forward, init_params
from .qsim import expectation_z_all, probability_odd_parity, run_circuit

MODEL_KINDS = ("classical_net", "feature_var", "feature_var_cnn",
               "combined_qnn", "combined_qnn_cnn")

PROB_EPS = 1e-7
INPUT_RANGE_TOL = 1e-9


@dataclass
class HybridModel:
    """A model kind plus its fixed architecture: the circuit (quantum kinds),
    a zero-initialized network template (classical kinds), and the input
    range features must be scaled to."""

    kind: str
    n_features: int
    circuit: ParamCircuit | None
    net: Mlp | None
    input_range: tuple[float, float] = (0.0, math.pi)


def build_model(kind: str, n_features: int,
                circuit: ParamCircuit | None = None) -> HybridModel:
    """Assemble one of the five model families for a feature count. A custom
    circuit may replace the default for the quantum kinds."""
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}; choose from {MODEL_KINDS}")
    if kind == "classical_net":
        if circuit is not None:
            raise ValueError("classical_net does not take a circuit")
        return HybridModel(kind, n_features, None, build_classical_net(n_features))
    if circuit is None:
        if kind.startswith("feature_var"):
            circuit = build_feature_var(n_features)
        else:
            circuit = build_combined(n_features)
    else:
        if circuit.n_features != n_features:
            raise ValueError(
                f"circuit expects {circuit.n_features} features, dataset has "
                f"{n_features}")
        issues = validate_circuit(circuit)
        if issues:
            raise ValueError("invalid circuit: " + "; ".join(issues))
    net = build_head(circuit.n_qubits) if kind.endswith("_cnn") else None
    return HybridModel(kind, n_features, circuit, net)


@dataclass
class ModelParams:
    theta: np.ndarray    # quantum rotation angles (radians)
    net: Mlp | None      # classical parameters, when the kind has any

    def to_vector(self) -> np.ndarray:
        parts = [self.theta]
        if self.net is not None:
            parts.append(self.net.to_vector())
        return np.concatenate(parts)


@dataclass
class ModelGrads:
    theta: np.ndarray
    net: list[tuple[np.ndarray, np.ndarray]] | None   # (dW, db) per layer

    def to_vector(self) -> np.ndarray:
        parts = [self.theta]
        if self.net is not None:
            for dw, db in self.net:
                parts.append(dw.ravel())
                parts.append(db)
        return np.concatenate(parts)


def params_from_vector(model: HybridModel, vec: np.ndarray) -> ModelParams:
    n_quantum = model.circuit.n_params if model.circuit is not None else 0
    theta = vec[:n_quantum].copy()
    net = model.net.with_vector(vec[n_quantum:]) if model.net is not None else None
    return ModelParams(theta, net)


def init_model_params(model: HybridModel, seed: int) -> ModelParams:
    """theta uniform in [0, 2pi) from ``seed``; network weights
    Xavier-initialized from ``seed + 1``."""
    rng = np.random.default_rng(seed)
    n_quantum = model.circuit.n_params if model.circuit is not None else 0
    theta = rng.uniform(0.0, 2.0 * math.pi, n_quantum)
    net = init_params(model.net, seed + 1) if model.net is not None else None
    return ModelParams(theta, net)


def param_counts(model: HybridModel) -> tuple[int, int]:
    """(classical, quantum) trainable parameter counts."""
    n_classical = model.net.n_params if model.net is not None else 0
    n_quantum = model.circuit.n_params if model.circuit is not None else 0
    return n_classical, n_quantum


def _clamp(p: float) -> float:
    return min(max(p, PROB_EPS), 1.0 - PROB_EPS)


def _check_input(model: HybridModel, x: np.ndarray) -> None:
    if x.shape != (model.n_features,):
        raise ValueError(f"expected {model.n_features} features, got {x.shape}")
    lo, hi = model.input_range
    if np.any(x < lo - INPUT_RANGE_TOL) or np.any(x > hi + INPUT_RANGE_TOL):
        raise ValueError(
            f"input outside the scaled range [{lo}, {hi}]; scale features first")


def predict(model: HybridModel, params: ModelParams, x) -> float:
    """Class-1 probability in [1e-7, 1 - 1e-7]."""
    x = np.asarray(x, dtype=float)
    _check_input(model, x)
    if model.kind == "classical_net":
        out, _ = forward(params.net, x)
        return _clamp(float(out[0]))
    state = run_circuit(model.circuit, x, params.theta)
    if model.kind in ("feature_var", "combined_qnn"):
        return _clamp(probability_odd_parity(state))
    out, _ = forward(params.net, expectation_z_all(state))
    return _clamp(float(out[0]))


def loss_bce(p: float, y: int) -> float:
    """Binary cross entropy -[y ln p + (1-y) ln(1-p)]."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie strictly in (0, 1), got {p}")
    if y not in (0, 1):
        raise ValueError(f"target must be 0 or 1, got {y}")
    return -(y * math.log(p) + (1 - y) * math.log(1.0 - p))


def _bce_dp(p: float, y: int) -> float:
    return (p - y) / (p * (1.0 - p))


def grad_all(model: HybridModel, params: ModelParams, x, y: int) -> ModelGrads:
    """Gradient of the cross-entropy loss over all trainable parameters,
    chaining head backpropagation into the circuit Jacobian."""
    x = np.asarray(x, dtype=float)
    _check_input(model, x)
    if model.kind == "classical_net":
        out, cache = forward(params.net, x)
        dp = _bce_dp(_clamp(float(out[0])), y)
        net_grads, _ = backward(params.net, cache, np.array([dp]))
        return ModelGrads(np.zeros(0), net_grads)
    if model.kind in ("feature_var", "combined_qnn"):
        state = run_circuit(model.circuit, x, params.theta)
        dp = _bce_dp(_clamp(probability_odd_parity(state)), y)
        jac = shift_rule_grad(model.circuit, x, params.theta, "parity")
        return ModelGrads(dp * jac[0], None)
    state = run_circuit(model.circuit, x, params.theta)
    out, cache = forward(params.net, expectation_z_all(state))
    dp = _bce_dp(_clamp(float(out[0])), y)
    net_grads, d_z = backward(params.net, cache, np.array([dp]))
    jac = shift_rule_grad(model.circuit, x, params.theta, "per_qubit_z")
    return ModelGrads(d_z @ jac, net_grads)


def evaluate(model: HybridModel, params: ModelParams, dataset: Dataset) -> tuple[float, float]:
    """(mean cross-entropy loss, accuracy) over a dataset; a tied p = 0.5
    counts as a class-1 prediction."""
    if len(dataset.targets) == 0:
        raise ValueError("cannot evaluate on an empty dataset")
    total_loss = 0.0
    hits = 0
    for row, y in zip(dataset.features, dataset.targets):
        p = predict(model, params, row)
        total_loss += loss_bce(p, int(y))
        hits += int((p >= 0.5) == bool(y))
    m = len(dataset.targets)
    return total_loss / m, hits / m
