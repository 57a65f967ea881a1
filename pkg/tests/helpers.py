"""Shared test utilities: random circuits over the full gate set."""

import math

import numpy as np

from qctandem.circuit import (GateOp, ParamCircuit, const_angle, feature_angle,
                              pair_feature_angle, param_angle,
                              param_feature_angle)

ROTATIONS = ("RX", "RY", "RZ")


def random_circuit(rng, n_qubits, depth, n_features=0, n_params=0):
    """Random gate list; every theta index ends up referenced at least once
    (appended RY gates fill any gaps), so generate with depth headroom."""
    gates = []
    used = set()
    for _ in range(depth):
        if n_qubits >= 2 and rng.random() < 0.25:
            a, b = rng.choice(n_qubits, size=2, replace=False)
            gates.append(GateOp("CNOT", (int(a), int(b))))
            continue
        kind = str(rng.choice(["H", "RX", "RY", "RZ", "PHASE"]))
        q = int(rng.integers(n_qubits))
        if kind == "H":
            gates.append(GateOp("H", (q,)))
            continue
        roll = rng.random()
        scale = float(rng.uniform(0.5, 2.0))
        if kind in ROTATIONS and n_params and roll < 0.5:
            j = int(rng.integers(n_params))
            used.add(j)
            if n_features and rng.random() < 0.5:
                expr = param_feature_angle(j, int(rng.integers(n_features)), scale)
            else:
                expr = param_angle(j, scale)
        elif n_features >= 2 and roll < 0.65:
            i, k = rng.choice(n_features, size=2, replace=False)
            expr = pair_feature_angle(int(i), int(k), scale, math.pi)
        elif n_features and roll < 0.8:
            expr = feature_angle(int(rng.integers(n_features)), scale)
        else:
            expr = const_angle(float(rng.uniform(-math.pi, math.pi)))
        gates.append(GateOp(kind, (q,), expr))
    for j in range(n_params):
        if j not in used:
            gates.append(GateOp("RY", (int(rng.integers(n_qubits)),), param_angle(j)))
    return ParamCircuit(n_qubits, n_features, n_params, tuple(gates))


def random_inputs(rng, circuit):
    x = rng.uniform(0.0, math.pi, circuit.n_features)
    theta = rng.uniform(0.0, 2.0 * math.pi, circuit.n_params)
    return x, theta
