"""Exact statevector simulation with Z-basis observables and shot sampling.

Amplitude indexing is little-endian: bit q of a basis index is the state of
qubit q. All observables are phase-invariant; global phase is never
normalized away.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .backend import GATE_CODES, kernels
from .circuit import CompiledCircuit, GateOp, ParamCircuit

MAX_QUBITS = 20


@dataclass
class Statevector:
    n_qubits: int
    amps: np.ndarray  # complex128, length 2**n_qubits

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


def init_zero(n_qubits: int) -> Statevector:
    """The all-zeros computational basis state."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return Statevector(n_qubits, amps)


def apply_gate(state: Statevector, gate: GateOp, angle_value: float = 0.0) -> Statevector:
    """Apply one gate with an already-resolved numeric angle; returns a new
    state (value semantics)."""
    for q in gate.qubits:
        if not 0 <= q < state.n_qubits:
            raise IndexError(f"qubit {q} out of range for {state.n_qubits} qubits")
    if gate.kind == "CNOT" and gate.qubits[0] == gate.qubits[1]:
        raise ValueError("CNOT control equals target")
    out = state.amps.copy()
    q1 = gate.qubits[1] if len(gate.qubits) == 2 else -1
    kernels.apply_gate(out, state.n_qubits, GATE_CODES[gate.kind],
                       gate.qubits[0], q1, angle_value)
    return Statevector(state.n_qubits, out)


def run_compiled(comp: CompiledCircuit, angles: np.ndarray,
                 out: np.ndarray | None = None) -> Statevector:
    """Run a lowered circuit with pre-resolved angles. ``out`` may supply a
    reusable amplitude buffer (hot path of the gradient loops)."""
    if out is None:
        out = np.empty(1 << comp.n_qubits, dtype=np.complex128)
    out[:] = 0.0
    out[0] = 1.0
    kernels.run_gates(out, comp.n_qubits, comp.kinds, comp.q0, comp.q1, angles)
    return Statevector(comp.n_qubits, out)


def run_circuit(circuit: ParamCircuit, x, theta) -> Statevector:
    """Prepare |0...0>, resolve every gate angle from (x, theta), and apply
    the gates in declared order."""
    x = np.asarray(x, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if x.shape != (circuit.n_features,):
        raise ValueError(f"expected {circuit.n_features} features, got {x.shape}")
    if theta.shape != (circuit.n_params,):
        raise ValueError(f"expected {circuit.n_params} parameters, got {theta.shape}")
    comp = circuit.compiled
    return run_compiled(comp, comp.resolve_angles(x, theta))


@lru_cache(maxsize=None)
def _z_signs(n_qubits: int, qubit: int) -> np.ndarray:
    idx = np.arange(1 << n_qubits)
    return 1.0 - 2.0 * ((idx >> qubit) & 1)


@lru_cache(maxsize=None)
def _z_sign_matrix(n_qubits: int) -> np.ndarray:
    return np.stack([_z_signs(n_qubits, q) for q in range(n_qubits)])


@lru_cache(maxsize=None)
def _odd_parity_mask(n_qubits: int) -> np.ndarray:
    idx = np.arange(1 << n_qubits)
    parity = np.zeros(1 << n_qubits, dtype=bool)
    for q in range(n_qubits):
        parity ^= ((idx >> q) & 1).astype(bool)
    return parity


def expectation_z(state: Statevector, qubit: int) -> float:
    """<Z_qubit>: +1 weight where the qubit's bit is 0, -1 where it is 1."""
    if not 0 <= qubit < state.n_qubits:
        raise IndexError(f"qubit {qubit} out of range for {state.n_qubits} qubits")
    return float(_z_signs(state.n_qubits, qubit) @ state.probabilities())


def expectation_z_all(state: Statevector) -> np.ndarray:
    """Vector of <Z_q> for every qubit (the classical head's input)."""
    return _z_sign_matrix(state.n_qubits) @ state.probabilities()


def probability_odd_parity(state: Statevector) -> float:
    """Total probability of basis states with an odd number of 1 bits;
    equals (1 - <Z x ... x Z>) / 2."""
    return float(state.probabilities()[_odd_parity_mask(state.n_qubits)].sum())


def probability_even_parity(state: Statevector) -> float:
    """Complement share, summed from the same moduli."""
    return float(state.probabilities()[~_odd_parity_mask(state.n_qubits)].sum())


def bitstring(index: int, n_qubits: int) -> str:
    """Basis index as a bitstring with qubit q at character position q."""
    return format(index, f"0{n_qubits}b")[::-1]


def sample_measurements(state: Statevector, shots: int, seed: int) -> dict[str, int]:
    """Histogram of ``shots`` independent Z-basis measurement outcomes,
    deterministic for a given seed."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    probs = state.probabilities()
    probs = probs / probs.sum()
    counts = np.random.default_rng(seed).multinomial(shots, probs)
    return {bitstring(i, state.n_qubits): int(c)
            for i, c in enumerate(counts) if c > 0}


# --------------------------------------------------------------------------
# Dense-matrix oracle (tests only): the full circuit unitary via explicit
# Kronecker products, independent of the stride-sweep kernels.
# --------------------------------------------------------------------------

ORACLE_MAX_QUBITS = 4

_H_MATRIX = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
_X_MATRIX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_P0 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
_P1 = np.array([[0, 0], [0, 1]], dtype=np.complex128)


def gate_unitary(kind: str, angle: float = 0.0) -> np.ndarray:
    """2x2 matrix of a single-qubit gate; rotations follow
    R(phi) = exp(-i phi A / 2), PHASE(phi) = diag(1, e^{i phi})."""
    c, s = np.cos(angle / 2.0), np.sin(angle / 2.0)
    if kind == "H":
        return _H_MATRIX.copy()
    if kind == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if kind == "RY":
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    if kind == "RZ":
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]])
    if kind == "PHASE":
        return np.array([[1, 0], [0, np.exp(1j * angle)]])
    raise ValueError(f"no single-qubit matrix for kind {kind!r}")


def _embed_1q(u: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    # little-endian: higher qubits are the more significant kron factors
    return np.kron(np.eye(1 << (n_qubits - 1 - qubit)),
                   np.kron(u, np.eye(1 << qubit)))


def dense_matrix_oracle(circuit: ParamCircuit, x, theta) -> np.ndarray:
    """Full 2^n x 2^n unitary of the circuit, for cross-checking run_circuit."""
    if circuit.n_qubits > ORACLE_MAX_QUBITS:
        raise ValueError(
            f"dense oracle is limited to {ORACLE_MAX_QUBITS} qubits, "
            f"got {circuit.n_qubits}")
    x = np.asarray(x, dtype=float)
    theta = np.asarray(theta, dtype=float)
    comp = circuit.compiled
    angles = comp.resolve_angles(x, theta)
    n = circuit.n_qubits
    total = np.eye(1 << n, dtype=np.complex128)
    for gate, angle in zip(circuit.gates, angles):
        if gate.kind == "CNOT":
            control, target = gate.qubits
            full = (_embed_1q(_P0, control, n)
                    + _embed_1q(_P1, control, n) @ _embed_1q(_X_MATRIX, target, n))
        else:
            full = _embed_1q(gate_unitary(gate.kind, angle), gate.qubits[0], n)
        total = full @ total
    return total
