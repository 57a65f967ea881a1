"""Exact gradients of circuit observables via the parameter-shift rule.

For a rotation gate with angle coeff * theta_j * f(x), the derivative of any
Z-basis observable expectation with respect to theta_j picks up
(coeff * f) / 2 * [<O>(angle + pi/2) - <O>(angle - pi/2)], with the shift
applied at that gate only; gates sharing theta_j contribute additively.
``finite_diff_grad`` provides the independent central-difference oracle.
"""

from __future__ import annotations

import math

import numpy as np

from .backend import ROTATION_KINDS
from .circuit import ParamCircuit
from .qsim import (Statevector, expectation_z_all, probability_odd_parity,
                   run_compiled)

OBSERVABLES = ("parity", "per_qubit_z")


def observable_values(state: Statevector, observable: str) -> np.ndarray:
    """Row vector of observable values for a state: the odd-parity
    probability, or one <Z_q> per qubit."""
    if observable == "parity":
        return np.array([probability_odd_parity(state)])
    if observable == "per_qubit_z":
        return expectation_z_all(state)
    raise ValueError(f"unknown observable {observable!r}")


def n_observable_rows(circuit: ParamCircuit, observable: str) -> int:
    return 1 if observable == "parity" else circuit.n_qubits


def _check_shiftable(circuit: ParamCircuit) -> None:
    for gate in circuit.gates:
        if (gate.angle is not None and gate.angle.param_index is not None
                and gate.kind not in ROTATION_KINDS):
            raise ValueError(
                f"parameter-shift rule needs trainable angles on RX/RY/RZ "
                f"only; theta_{gate.angle.param_index} sits on {gate.kind}")


def shift_rule_grad(circuit: ParamCircuit, x, theta,
                    observable: str = "parity") -> np.ndarray:
    """Jacobian d<observable>/d(theta), shape (rows, n_params), from two
    shifted circuit evaluations per parameterized gate."""
    _check_shiftable(circuit)
    x = np.asarray(x, dtype=float)
    theta = np.asarray(theta, dtype=float)
    comp = circuit.compiled
    base = comp.resolve_angles(x, theta)
    dphi = comp.dangle_dtheta(x)
    jac = np.zeros((n_observable_rows(circuit, observable), comp.n_params))
    buf = np.empty(1 << comp.n_qubits, dtype=np.complex128)
    angles = base.copy()
    for g in comp.param_gates:
        j = comp.param_idx[g]
        scale = 0.5 * dphi[g]
        if scale == 0.0:
            continue
        angles[g] = base[g] + 0.5 * math.pi
        plus = observable_values(run_compiled(comp, angles, buf), observable)
        angles[g] = base[g] - 0.5 * math.pi
        minus = observable_values(run_compiled(comp, angles, buf), observable)
        angles[g] = base[g]
        jac[:, j] += scale * (plus - minus)
    return jac


def finite_diff_grad(circuit: ParamCircuit, x, theta,
                     observable: str = "parity", h: float = 1e-5) -> np.ndarray:
    """Central-difference Jacobian over whole-parameter perturbations
    (test oracle; independent of the shift-rule path)."""
    if h <= 0:
        raise ValueError(f"step size must be positive, got {h}")
    x = np.asarray(x, dtype=float)
    theta = np.asarray(theta, dtype=float)
    comp = circuit.compiled
    jac = np.zeros((n_observable_rows(circuit, observable), comp.n_params))
    for j in range(comp.n_params):
        shifted = theta.copy()
        shifted[j] = theta[j] + h
        plus = observable_values(run_compiled(comp, comp.resolve_angles(x, shifted)),
                                 observable)
        shifted[j] = theta[j] - h
        minus = observable_values(run_compiled(comp, comp.resolve_angles(x, shifted)),
                                  observable)
        jac[:, j] = (plus - minus) / (2.0 * h)
    return jac
