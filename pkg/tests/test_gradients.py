"""Parameter-shift gradient tests against analytic values and the
finite-difference oracle."""

import math

import numpy as np
import pytest

from helpers import random_circuit, random_inputs
from qctandem.circuit import (GateOp, ParamCircuit, build_combined,
                              build_feature_var, param_angle,
                              param_feature_angle)
from qctandem.gradients import finite_diff_grad, shift_rule_grad
from qctandem.qsim import run_circuit


def single_ry():
    return ParamCircuit(1, 0, 1, (GateOp("RY", (0,), param_angle(0)),))


def test_shift_rule_analytic_ry():
    """<Z> = cos(theta), so the gradient at pi/2 is -1."""
    grad = shift_rule_grad(single_ry(), [], [math.pi / 2], "per_qubit_z")
    assert grad.shape == (1, 1)
    assert grad[0, 0] == pytest.approx(-1.0, abs=1e-12)


def test_shift_rule_feature_scaled_angle():
    """<Z> = cos(theta * x): d/dtheta at theta=pi/4, x=2 is -2 sin(pi/2)."""
    circ = ParamCircuit(1, 1, 1, (GateOp("RY", (0,), param_feature_angle(0, 0)),))
    grad = shift_rule_grad(circ, [2.0], [math.pi / 4], "per_qubit_z")
    assert grad[0, 0] == pytest.approx(-2.0, abs=1e-12)
    fd = finite_diff_grad(circ, [2.0], [math.pi / 4], "per_qubit_z")
    assert fd[0, 0] == pytest.approx(-2.0, abs=1e-8)


def test_shared_parameter_contributions_sum():
    """RY(theta) twice gives <Z> = cos(2 theta), gradient -2 sin(2 theta)."""
    circ = ParamCircuit(1, 0, 1, (GateOp("RY", (0,), param_angle(0)),
                                  GateOp("RY", (0,), param_angle(0))))
    theta = 0.3
    grad = shift_rule_grad(circ, [], [theta], "per_qubit_z")
    assert grad[0, 0] == pytest.approx(-2.0 * math.sin(2.0 * theta), abs=1e-12)


def test_finite_diff_analytic():
    fd = finite_diff_grad(single_ry(), [], [math.pi / 2], "per_qubit_z")
    assert fd[0, 0] == pytest.approx(-1.0, abs=1e-9)


def test_constant_circuit_has_empty_jacobian():
    circ = ParamCircuit(2, 0, 0, (GateOp("H", (0,)),))
    assert shift_rule_grad(circ, [], [], "parity").shape == (1, 0)
    assert finite_diff_grad(circ, [], [], "per_qubit_z").shape == (2, 0)


def test_rejects_parameter_on_phase_gate():
    circ = ParamCircuit(1, 0, 1, (GateOp("PHASE", (0,), param_angle(0)),))
    with pytest.raises(ValueError):
        shift_rule_grad(circ, [], [0.3], "parity")


def test_rejects_bad_step_and_observable():
    with pytest.raises(ValueError):
        finite_diff_grad(single_ry(), [], [0.2], "parity", h=0.0)
    with pytest.raises(ValueError):
        shift_rule_grad(single_ry(), [], [0.2], "bogus")


def test_jacobian_shapes():
    circ = build_combined(3)
    x = np.linspace(0.2, 2.8, 3)
    theta = np.linspace(0.1, 5.0, circ.n_params)
    assert shift_rule_grad(circ, x, theta, "parity").shape == (1, 9)
    assert shift_rule_grad(circ, x, theta, "per_qubit_z").shape == (3, 9)


def test_parity_gradient_from_total_z_correlator():
    """p_odd = (1 - <Z...Z>)/2, so its gradient is -1/2 the correlator's,
    with the correlator differentiated by central differences over
    1 - 2 * p_odd."""
    rng = np.random.default_rng(9)
    circ = build_combined(3)
    x, theta = random_inputs(rng, circ)
    parity_grad = shift_rule_grad(circ, x, theta, "parity")[0]
    h = 1e-5
    correlator_grad = np.zeros_like(theta)
    for j in range(len(theta)):
        up, down = theta.copy(), theta.copy()
        up[j] += h
        down[j] -= h
        from qctandem.qsim import probability_odd_parity
        corr = lambda th: 1.0 - 2.0 * probability_odd_parity(run_circuit(circ, x, th))
        correlator_grad[j] = (corr(up) - corr(down)) / (2 * h)
    assert np.allclose(parity_grad, -0.5 * correlator_grad, atol=1e-6)


@pytest.mark.parametrize("observable", ["parity", "per_qubit_z"])
def test_shift_matches_finite_diff_on_presets(observable):
    rng = np.random.default_rng(31)
    for n in (2, 3, 4):
        for builder in (build_feature_var, build_combined):
            circ = builder(n)
            for _ in range(3):
                x, theta = random_inputs(rng, circ)
                shift = shift_rule_grad(circ, x, theta, observable)
                fd = finite_diff_grad(circ, x, theta, observable)
                assert np.all(np.abs(shift - fd) <= 1e-6 * (1.0 + np.abs(shift)))


def test_shift_matches_finite_diff_on_random_circuits():
    """Shared parameters, mixed angle forms, and all rotation kinds."""
    rng = np.random.default_rng(77)
    for _ in range(20):
        n = int(rng.integers(2, 5))
        circ = random_circuit(rng, n, 14, n_features=n, n_params=3)
        x, theta = random_inputs(rng, circ)
        shift = shift_rule_grad(circ, x, theta, "per_qubit_z")
        fd = finite_diff_grad(circ, x, theta, "per_qubit_z")
        assert np.all(np.abs(shift - fd) <= 1e-6 * (1.0 + np.abs(shift)))
