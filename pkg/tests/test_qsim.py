"""Statevector simulator tests: known gates, observables, sampling, and the
dense-matrix oracle cross-check."""

import math

import numpy as np
import pytest

from helpers import random_circuit, random_inputs
from qctandem.circuit import GateOp, ParamCircuit, const_angle
from qctandem.qsim import (Statevector, apply_gate, bitstring,
                           dense_matrix_oracle, expectation_z,
                           expectation_z_all, gate_unitary, init_zero,
                           probability_even_parity, probability_odd_parity,
                           run_circuit, sample_measurements)

SQ2 = 1.0 / math.sqrt(2.0)


def basis_state(n, index):
    amps = np.zeros(1 << n, dtype=complex)
    amps[index] = 1.0
    return Statevector(n, amps)


def test_init_zero():
    assert np.array_equal(init_zero(1).amps, [1, 0])
    assert np.array_equal(init_zero(2).amps, [1, 0, 0, 0])


@pytest.mark.parametrize("n", [0, -1, 21])
def test_init_zero_rejects_bad_width(n):
    with pytest.raises(ValueError):
        init_zero(n)


def test_hadamard_on_zero():
    state = apply_gate(init_zero(1), GateOp("H", (0,)))
    assert np.allclose(state.amps, [SQ2, SQ2])


@pytest.mark.parametrize("inp,out", [(0b00, 0b00), (0b01, 0b11),
                                     (0b10, 0b10), (0b11, 0b01)])
def test_cnot_truth_table(inp, out):
    """Control is qubit 0 (bit 0 of the index), target qubit 1."""
    state = apply_gate(basis_state(2, inp), GateOp("CNOT", (0, 1)))
    assert np.array_equal(state.amps, basis_state(2, out).amps)


def test_ry_pi_flips_zero():
    state = apply_gate(init_zero(1), GateOp("RY", (0,)), math.pi)
    # RY(pi)|0> = |1> exactly (real rotation matrix, no global phase)
    assert abs(state.amps[1]) == pytest.approx(1.0, abs=1e-15)
    assert abs(state.amps[0]) < 1e-15


def test_apply_gate_value_semantics():
    state = init_zero(1)
    apply_gate(state, GateOp("H", (0,)))
    assert np.array_equal(state.amps, [1, 0])


def test_apply_gate_bad_qubit():
    with pytest.raises(IndexError):
        apply_gate(init_zero(1), GateOp("H", (1,)))


def test_gate_unitaries_are_unitary():
    for kind in ("H", "RX", "RY", "RZ", "PHASE"):
        u = gate_unitary(kind, 0.7)
        assert np.allclose(u @ u.conj().T, np.eye(2), atol=1e-15)


def test_run_circuit_empty_is_identity():
    state = run_circuit(ParamCircuit(2, 0, 0, ()), [], [])
    assert np.array_equal(state.amps, [1, 0, 0, 0])


def test_run_circuit_shape_errors():
    circ = ParamCircuit(2, 1, 0, (GateOp("H", (0,)),))
    with pytest.raises(ValueError):
        run_circuit(circ, [0.1, 0.2], [])
    with pytest.raises(ValueError):
        run_circuit(circ, [0.1], [0.3])


def test_expectation_z_known_states():
    assert expectation_z(init_zero(1), 0) == pytest.approx(1.0)
    plus = apply_gate(init_zero(1), GateOp("H", (0,)))
    assert expectation_z(plus, 0) == pytest.approx(0.0, abs=1e-15)
    assert expectation_z(basis_state(2, 0b11), 1) == pytest.approx(-1.0)
    with pytest.raises(IndexError):
        expectation_z(init_zero(1), 1)


def test_parity_known_states():
    assert probability_odd_parity(basis_state(2, 0b00)) == 0.0
    assert probability_odd_parity(basis_state(2, 0b01)) == 1.0
    both = apply_gate(apply_gate(init_zero(2), GateOp("H", (0,))),
                      GateOp("H", (1,)))
    assert probability_odd_parity(both) == pytest.approx(0.5, abs=1e-15)


def test_parity_partition_is_exact_on_dyadic_states():
    """Uniform and basis states have exactly representable probabilities, so
    the odd/even split must add up to exactly 1."""
    for n in (1, 2, 3):
        state = init_zero(n)
        for q in range(n):
            state = apply_gate(state, GateOp("H", (q,)))
        assert probability_odd_parity(state) + probability_even_parity(state) == 1.0
        assert probability_odd_parity(basis_state(n, 0)) \
            + probability_even_parity(basis_state(n, 0)) == 1.0


def test_parity_consistency_random_circuits():
    """<Z x ... x Z> from the bitstring probabilities must equal
    1 - 2 * P(odd parity)."""
    rng = np.random.default_rng(7)
    for _ in range(25):
        n = int(rng.integers(1, 5))
        circ = random_circuit(rng, n, 12, n_features=max(n, 2), n_params=2)
        state = run_circuit(circ, *random_inputs(rng, circ))
        probs = state.probabilities()
        signs = np.array([(-1.0) ** bin(b).count("1") for b in range(1 << n)])
        assert signs @ probs == pytest.approx(
            1.0 - 2.0 * probability_odd_parity(state), abs=1e-12)
        assert probability_odd_parity(state) + probability_even_parity(state) \
            == pytest.approx(1.0, abs=1e-12)


def test_expectation_z_all_matches_single():
    rng = np.random.default_rng(3)
    circ = random_circuit(rng, 3, 15, n_features=3, n_params=2)
    state = run_circuit(circ, *random_inputs(rng, circ))
    all_z = expectation_z_all(state)
    for q in range(3):
        assert all_z[q] == pytest.approx(expectation_z(state, q), abs=1e-15)


def test_norm_preserved_random_circuits():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(1, 6))
        circ = random_circuit(rng, n, 20, n_features=max(n, 2), n_params=3)
        state = run_circuit(circ, *random_inputs(rng, circ))
        assert abs(state.norm() - 1.0) < 1e-10


def test_bitstring_places_qubit0_first():
    assert bitstring(0b01, 2) == "10"   # qubit 0 is set
    assert bitstring(0b10, 2) == "01"


def test_sampling_deterministic_and_degenerate():
    assert sample_measurements(init_zero(1), 100, seed=0) == {"0": 100}
    assert sample_measurements(basis_state(1, 1), 5, seed=0) == {"1": 5}
    plus = apply_gate(init_zero(1), GateOp("H", (0,)))
    a = sample_measurements(plus, 1000, seed=42)
    b = sample_measurements(plus, 1000, seed=42)
    assert a == b
    with pytest.raises(ValueError):
        sample_measurements(init_zero(1), 0, seed=0)


def test_sampling_frequency_matches_probability():
    """H|0> sampled 1e5 times: the '1' fraction sits within a 3-sigma
    binomial band around 0.5."""
    plus = apply_gate(init_zero(1), GateOp("H", (0,)))
    counts = sample_measurements(plus, 100_000, seed=5)
    assert abs(counts["1"] / 100_000 - 0.5) < 0.01


def test_oracle_known_matrices():
    single_h = ParamCircuit(1, 0, 0, (GateOp("H", (0,)),))
    assert np.allclose(dense_matrix_oracle(single_h, [], []),
                       np.array([[1, 1], [1, -1]]) / math.sqrt(2))
    empty = ParamCircuit(2, 0, 0, ())
    assert np.array_equal(dense_matrix_oracle(empty, [], []), np.eye(4))
    with pytest.raises(ValueError):
        dense_matrix_oracle(ParamCircuit(5, 0, 0, ()), [], [])


def test_oracle_matches_run_circuit():
    """Stride-sweep kernels against the Kronecker-product unitary."""
    rng = np.random.default_rng(2024)
    for _ in range(60):
        n = int(rng.integers(1, 5))
        circ = random_circuit(rng, n, int(rng.integers(1, 18)),
                              n_features=max(n, 2), n_params=2)
        x, theta = random_inputs(rng, circ)
        state = run_circuit(circ, x, theta)
        reference = dense_matrix_oracle(circ, x, theta)[:, 0]
        assert np.abs(state.amps - reference).max() < 1e-12
