# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled statevector gate kernels (the hot loop of circuit execution).

Same interface as ``_kernels_py``; ``qctandem.backend`` prefers this module
when the extension is built. Amplitude bit q encodes qubit q, i.e. qubit 0
is the least significant bit of the basis index.
"""

from libc.math cimport cos, sin

ctypedef double complex cplx

BACKEND_NAME = "compiled"

cdef enum:
    K_H = 0
    K_RX = 1
    K_RY = 2
    K_RZ = 3
    K_PHASE = 4
    K_CNOT = 5

cdef double SQRT1_2 = 0.7071067811865476


cdef void _mix(cplx* a, long size, int q,
               cplx u00, cplx u01, cplx u10, cplx u11) noexcept nogil:
    cdef long half = size >> 1
    cdef long step = 1L << q
    cdef long g, i0, i1
    cdef cplx a0, a1
    for g in range(half):
        i0 = ((g >> q) << (q + 1)) | (g & (step - 1))
        i1 = i0 | step
        a0 = a[i0]
        a1 = a[i1]
        a[i0] = u00 * a0 + u01 * a1
        a[i1] = u10 * a0 + u11 * a1


cdef void _diag(cplx* a, long size, int q, cplx d0, cplx d1) noexcept nogil:
    cdef long b
    for b in range(size):
        if (b >> q) & 1:
            a[b] = a[b] * d1
        else:
            a[b] = a[b] * d0


cdef void _cnot(cplx* a, long size, int control, int target) noexcept nogil:
    # swap |c=1,t=0> with |c=1,t=1>; each pair visited once
    cdef long b, partner
    cdef cplx tmp
    for b in range(size):
        if ((b >> control) & 1) == 1 and ((b >> target) & 1) == 0:
            partner = b | (1L << target)
            tmp = a[b]
            a[b] = a[partner]
            a[partner] = tmp


cdef void _apply(cplx* a, long size, int kind, int q0, int q1,
                 double angle) noexcept nogil:
    cdef double c, s
    if kind == K_H:
        _mix(a, size, q0, SQRT1_2, SQRT1_2, SQRT1_2, -SQRT1_2)
    elif kind == K_RX:
        c = cos(0.5 * angle)
        s = sin(0.5 * angle)
        _mix(a, size, q0, c, -1j * s, -1j * s, c)
    elif kind == K_RY:
        c = cos(0.5 * angle)
        s = sin(0.5 * angle)
        _mix(a, size, q0, c, -s, s, c)
    elif kind == K_RZ:
        c = cos(0.5 * angle)
        s = sin(0.5 * angle)
        _diag(a, size, q0, c - 1j * s, c + 1j * s)
    elif kind == K_PHASE:
        c = cos(angle)
        s = sin(angle)
        _diag(a, size, q0, 1.0, c + 1j * s)
    elif kind == K_CNOT:
        _cnot(a, size, q0, q1)


def apply_gate(cplx[::1] amps, int n_qubits, int kind, int q0, int q1,
               double angle):
    """Apply one gate in place. q1 is ignored except for CNOT."""
    _apply(&amps[0], 1L << n_qubits, kind, q0, q1, angle)


def run_gates(cplx[::1] amps, int n_qubits, const int[::1] kinds,
              const int[::1] q0, const int[::1] q1, const double[::1] angles):
    """Apply a whole gate list in place (fused hot path)."""
    cdef long size = 1L << n_qubits
    cdef Py_ssize_t g, ngates = kinds.shape[0]
    cdef cplx* a = &amps[0]
    with nogil:
        for g in range(ngates):
            _apply(a, size, kinds[g], q0[g], q1[g], angles[g])
