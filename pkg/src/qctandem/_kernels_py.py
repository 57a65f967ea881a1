"""Pure numpy gate kernels, interface-identical to the compiled extension.

Used as fallback when ``qctandem._kernels_cy`` is not built, or when forced
via ``QCTANDEM_BACKEND=python``. Qubit 0 is the least significant bit of the
basis index.
"""

import math

import numpy as np

BACKEND_NAME = "python"

K_H, K_RX, K_RY, K_RZ, K_PHASE, K_CNOT = range(6)

_SQRT1_2 = math.sqrt(0.5)


def _mix(amps, n_qubits, q, u00, u01, u10, u11):
    # bit q of the index is axis 1 of this view
    view = amps.reshape(1 << (n_qubits - 1 - q), 2, 1 << q)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = u00 * a0 + u01 * a1
    view[:, 1, :] = u10 * a0 + u11 * a1


def _diag(amps, n_qubits, q, d0, d1):
    view = amps.reshape(1 << (n_qubits - 1 - q), 2, 1 << q)
    view[:, 0, :] *= d0
    view[:, 1, :] *= d1


def _cnot(amps, n_qubits, control, target):
    idx = np.arange(1 << n_qubits)
    src = idx[(((idx >> control) & 1) == 1) & (((idx >> target) & 1) == 0)]
    dst = src | (1 << target)
    amps[src], amps[dst] = amps[dst], amps[src]


def apply_gate(amps, n_qubits, kind, q0, q1, angle):
    """Apply one gate in place. q1 is ignored except for CNOT."""
    if kind == K_H:
        _mix(amps, n_qubits, q0, _SQRT1_2, _SQRT1_2, _SQRT1_2, -_SQRT1_2)
    elif kind == K_RX:
        c, s = math.cos(0.5 * angle), math.sin(0.5 * angle)
        _mix(amps, n_qubits, q0, c, -1j * s, -1j * s, c)
    elif kind == K_RY:
        c, s = math.cos(0.5 * angle), math.sin(0.5 * angle)
        _mix(amps, n_qubits, q0, c, -s, s, c)
    elif kind == K_RZ:
        c, s = math.cos(0.5 * angle), math.sin(0.5 * angle)
        _diag(amps, n_qubits, q0, c - 1j * s, c + 1j * s)
    elif kind == K_PHASE:
        _diag(amps, n_qubits, q0, 1.0, complex(math.cos(angle), math.sin(angle)))
    elif kind == K_CNOT:
        _cnot(amps, n_qubits, q0, q1)
    else:
        raise ValueError(f"unknown gate kind code {kind}")


def run_gates(amps, n_qubits, kinds, q0, q1, angles):
    """Apply a whole gate list in place."""
    for g in range(len(kinds)):
        apply_gate(amps, n_qubits, int(kinds[g]), int(q0[g]), int(q1[g]),
                   float(angles[g]))
