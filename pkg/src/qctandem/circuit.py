"""Circuit intermediate representation and the model circuit builders.

A gate angle is an ``AngleExpr``: coeff * theta_j * (a - x_i) * (b - x_k)
where every factor after coeff is optional. This covers all angle shapes the
builders need: constants, scaled features, trainable parameters, trainable
parameter times feature, and the pairwise (pi - x_i)(pi - x_j) encoding angle.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .backend import GATE_CODES, ROTATION_KINDS

GATE_KINDS = tuple(GATE_CODES)
TWO_QUBIT_KINDS = ("CNOT",)


@dataclass(frozen=True)
class AngleExpr:
    coeff: float = 0.0
    param_index: int | None = None
    feature_index: int | None = None
    feature_index2: int | None = None
    offsets: tuple[float, float] = (0.0, 0.0)


def const_angle(value: float) -> AngleExpr:
    return AngleExpr(coeff=value)


def param_angle(j: int, scale: float = 1.0) -> AngleExpr:
    """scale * theta_j"""
    return AngleExpr(coeff=scale, param_index=j)


def feature_angle(i: int, scale: float = 1.0) -> AngleExpr:
    """scale * x_i  (encoded as -scale * (0 - x_i))"""
    return AngleExpr(coeff=-scale, feature_index=i)


def param_feature_angle(j: int, i: int, scale: float = 1.0) -> AngleExpr:
    """scale * theta_j * x_i"""
    return AngleExpr(coeff=-scale, param_index=j, feature_index=i)


def pair_feature_angle(i: int, k: int, scale: float, offset: float) -> AngleExpr:
    """scale * (offset - x_i) * (offset - x_k)"""
    return AngleExpr(coeff=scale, feature_index=i, feature_index2=k,
                     offsets=(offset, offset))


def resolve_angle(expr: AngleExpr, x, theta) -> float:
    """Evaluate an angle expression to radians."""
    value = expr.coeff
    if expr.param_index is not None:
        if expr.param_index >= len(theta):
            raise ValueError(
                f"angle references theta_{expr.param_index} but only "
                f"{len(theta)} parameters were given")
        value *= theta[expr.param_index]
    if expr.feature_index is not None:
        if expr.feature_index >= len(x):
            raise ValueError(
                f"angle references x_{expr.feature_index} but only "
                f"{len(x)} features were given")
        value *= expr.offsets[0] - x[expr.feature_index]
    if expr.feature_index2 is not None:
        if expr.feature_index2 >= len(x):
            raise ValueError(
                f"angle references x_{expr.feature_index2} but only "
                f"{len(x)} features were given")
        value *= expr.offsets[1] - x[expr.feature_index2]
    return float(value)


@dataclass(frozen=True)
class GateOp:
    kind: str                      # H, RX, RY, RZ, PHASE, CNOT
    qubits: tuple[int, ...]        # (q,) or (control, target)
    angle: AngleExpr | None = None


@dataclass(eq=False)
class ParamCircuit:
    """Ordered gate list over n_qubits wires; immutable after construction."""

    n_qubits: int
    n_features: int
    n_params: int
    gates: tuple[GateOp, ...]

    @cached_property
    def compiled(self) -> "CompiledCircuit":
        return CompiledCircuit.from_circuit(self)


@dataclass(eq=False)
class CompiledCircuit:
    """Flat-array lowering of a ParamCircuit for the gate kernels."""

    n_qubits: int
    n_features: int
    n_params: int
    kinds: np.ndarray       # int32[G] gate kind codes
    q0: np.ndarray          # int32[G]
    q1: np.ndarray          # int32[G], -1 when absent
    coeff: np.ndarray       # float64[G]
    param_idx: np.ndarray   # int32[G], -1 when absent
    feat_idx: np.ndarray
    feat2_idx: np.ndarray
    off_a: np.ndarray
    off_b: np.ndarray
    param_gates: np.ndarray = field(init=False)  # gate positions carrying a theta

    def __post_init__(self):
        self.param_gates = np.flatnonzero(self.param_idx >= 0).astype(np.int32)
        self._has_param = self.param_idx >= 0
        self._has_f1 = self.feat_idx >= 0
        self._has_f2 = self.feat2_idx >= 0

    @classmethod
    def from_circuit(cls, circuit: ParamCircuit) -> "CompiledCircuit":
        gcount = len(circuit.gates)
        kinds = np.empty(gcount, dtype=np.int32)
        q0 = np.empty(gcount, dtype=np.int32)
        q1 = np.full(gcount, -1, dtype=np.int32)
        coeff = np.zeros(gcount)
        param_idx = np.full(gcount, -1, dtype=np.int32)
        feat_idx = np.full(gcount, -1, dtype=np.int32)
        feat2_idx = np.full(gcount, -1, dtype=np.int32)
        off_a = np.zeros(gcount)
        off_b = np.zeros(gcount)
        for g, gate in enumerate(circuit.gates):
            kinds[g] = GATE_CODES[gate.kind]
            q0[g] = gate.qubits[0]
            if len(gate.qubits) == 2:
                q1[g] = gate.qubits[1]
            expr = gate.angle
            if expr is not None:
                coeff[g] = expr.coeff
                if expr.param_index is not None:
                    param_idx[g] = expr.param_index
                if expr.feature_index is not None:
                    feat_idx[g] = expr.feature_index
                if expr.feature_index2 is not None:
                    feat2_idx[g] = expr.feature_index2
                off_a[g], off_b[g] = expr.offsets
        return cls(circuit.n_qubits, circuit.n_features, circuit.n_params,
                   kinds, q0, q1, coeff, param_idx, feat_idx, feat2_idx,
                   off_a, off_b)

    def resolve_angles(self, x: np.ndarray, theta: np.ndarray) -> np.ndarray:
        """Numeric angle per gate for the given features and parameters."""
        vals = self.coeff.copy()
        m = self._has_param
        vals[m] *= theta[self.param_idx[m]]
        m = self._has_f1
        vals[m] *= self.off_a[m] - x[self.feat_idx[m]]
        m = self._has_f2
        vals[m] *= self.off_b[m] - x[self.feat2_idx[m]]
        return vals

    def dangle_dtheta(self, x: np.ndarray) -> np.ndarray:
        """Per gate, d(angle)/d(its theta): coeff times feature factors.

        Zero for gates without a trainable parameter.
        """
        vals = np.where(self._has_param, self.coeff, 0.0)
        m = self._has_f1 & self._has_param
        vals[m] *= self.off_a[m] - x[self.feat_idx[m]]
        m = self._has_f2 & self._has_param
        vals[m] *= self.off_b[m] - x[self.feat2_idx[m]]
        return vals


# --------------------------------------------------------------------------
# Builders
# --------------------------------------------------------------------------

def _require_width(n_qubits: int) -> None:
    if n_qubits < 2:
        raise ValueError(f"circuit builders need n_qubits >= 2, got {n_qubits}")


def build_zz_feature_map(n_qubits: int, reps: int = 2) -> ParamCircuit:
    """Feature-encoding circuit: per repetition, H on every qubit, a
    single-feature phase 2*x_i on qubit i, then for every pair i<j a
    CNOT-conjugated phase 2*(pi - x_i)(pi - x_j) on qubit j.

    Carries no trainable parameters.
    """
    _require_width(n_qubits)
    gates: list[GateOp] = []
    for _ in range(reps):
        for q in range(n_qubits):
            gates.append(GateOp("H", (q,)))
        for q in range(n_qubits):
            gates.append(GateOp("PHASE", (q,), feature_angle(q, 2.0)))
        for i in range(n_qubits):
            for j in range(i + 1, n_qubits):
                gates.append(GateOp("CNOT", (i, j)))
                gates.append(GateOp("PHASE", (j,),
                                    pair_feature_angle(i, j, 2.0, math.pi)))
                gates.append(GateOp("CNOT", (i, j)))
    return ParamCircuit(n_qubits, n_qubits, 0, tuple(gates))


def build_real_amplitudes(n_qubits: int, reps: int = 1) -> ParamCircuit:
    """Trainable rotation layers RY(theta) alternating with full CNOT
    entanglement; (reps + 1) * n_qubits parameters, no feature dependence.
    """
    _require_width(n_qubits)
    gates: list[GateOp] = []
    p = 0
    for _ in range(reps):
        for q in range(n_qubits):
            gates.append(GateOp("RY", (q,), param_angle(p)))
            p += 1
        for i in range(n_qubits):
            for j in range(i + 1, n_qubits):
                gates.append(GateOp("CNOT", (i, j)))
    for q in range(n_qubits):
        gates.append(GateOp("RY", (q,), param_angle(p)))
        p += 1
    return ParamCircuit(n_qubits, 0, p, tuple(gates))


def _shift_params(expr: AngleExpr | None, offset: int) -> AngleExpr | None:
    if expr is None or expr.param_index is None or offset == 0:
        return expr
    return AngleExpr(expr.coeff, expr.param_index + offset,
                     expr.feature_index, expr.feature_index2, expr.offsets)


def concatenate(first: ParamCircuit, second: ParamCircuit) -> ParamCircuit:
    """Append second after first; second's parameter indices are shifted past
    first's so the combined parameter vector is their concatenation."""
    if first.n_qubits != second.n_qubits:
        raise ValueError("cannot concatenate circuits of different width")
    shifted = tuple(
        GateOp(g.kind, g.qubits, _shift_params(g.angle, first.n_params))
        for g in second.gates)
    return ParamCircuit(first.n_qubits,
                        max(first.n_features, second.n_features),
                        first.n_params + second.n_params,
                        first.gates + shifted)


def build_feature_var(n_qubits: int) -> ParamCircuit:
    """Feature encoding (2 repetitions) followed by the trainable rotation
    ansatz; 2 * n_qubits parameters in total."""
    return concatenate(build_zz_feature_map(n_qubits, reps=2),
                       build_real_amplitudes(n_qubits, reps=1))


# Layer vocabulary for the merged feature+trainable circuit. The layout
# interleaves six nearest-neighbor CNOT chains of alternating direction with
# three rotation layers; parameters total 2N + 3 and every one of them
# affects the Z-basis readout (no rotation layer sits after the last
# entangler on its qubit's light cone).
COMBINED_LAYOUT = (
    "ry_x",         # RY(x_i) on every qubit
    "chain_down",
    "chain_up",
    "ry_theta_x",   # RY(theta_i * x_i) on every qubit, N parameters
    "chain_down",
    "chain_up",
    "rz_theta",     # RZ(theta_{N+i}) on every qubit, N parameters
    "chain_down",
    "rot_block",    # RX, RY, RZ with own parameters on qubit 0
    "chain_up",
)


def build_combined(n_qubits: int, layout: tuple[str, ...] = COMBINED_LAYOUT) -> ParamCircuit:
    """Single circuit mixing feature-dependent, trainable, and product-angle
    rotations with nearest-neighbor entanglement; 2 * n_qubits + 3 parameters.
    """
    _require_width(n_qubits)
    n = n_qubits
    gates: list[GateOp] = []
    p = 0
    for layer in layout:
        if layer == "ry_x":
            for q in range(n):
                gates.append(GateOp("RY", (q,), feature_angle(q)))
        elif layer == "chain_down":
            for i in range(n - 1):
                gates.append(GateOp("CNOT", (i, i + 1)))
        elif layer == "chain_up":
            for i in range(n - 2, -1, -1):
                gates.append(GateOp("CNOT", (i + 1, i)))
        elif layer == "ry_theta_x":
            for q in range(n):
                gates.append(GateOp("RY", (q,), param_feature_angle(p, q)))
                p += 1
        elif layer == "rz_theta":
            for q in range(n):
                gates.append(GateOp("RZ", (q,), param_angle(p)))
                p += 1
        elif layer == "rot_block":
            for kind in ROTATION_KINDS:
                gates.append(GateOp(kind, (0,), param_angle(p)))
                p += 1
        else:
            raise ValueError(f"unknown combined-circuit layer {layer!r}")
    return ParamCircuit(n, n, p, tuple(gates))


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------

def validate_circuit(circuit: ParamCircuit) -> list[str]:
    """Check the circuit invariants; returns diagnostics (empty when ok)."""
    issues: list[str] = []
    used_params: set[int] = set()
    for g, gate in enumerate(circuit.gates):
        where = f"gate {g} ({gate.kind})"
        if gate.kind not in GATE_KINDS:
            issues.append(f"{where}: unknown kind")
            continue
        want = 2 if gate.kind in TWO_QUBIT_KINDS else 1
        if len(gate.qubits) != want:
            issues.append(f"{where}: expected {want} qubit(s), got {len(gate.qubits)}")
            continue
        for q in gate.qubits:
            if not 0 <= q < circuit.n_qubits:
                issues.append(f"{where}: qubit {q} out of range for width {circuit.n_qubits}")
        if gate.kind == "CNOT" and gate.qubits[0] == gate.qubits[1]:
            issues.append(f"{where}: control equals target")
        expr = gate.angle
        if expr is None:
            if gate.kind not in ("H", "CNOT"):
                issues.append(f"{where}: missing angle")
            continue
        if gate.kind in ("H", "CNOT"):
            issues.append(f"{where}: takes no angle")
        if expr.param_index is not None:
            if gate.kind not in ROTATION_KINDS:
                issues.append(f"{where}: trainable parameter on non-rotation gate")
            if not 0 <= expr.param_index < circuit.n_params:
                issues.append(f"{where}: theta_{expr.param_index} out of range "
                              f"for {circuit.n_params} parameters")
            else:
                used_params.add(expr.param_index)
        for fi in (expr.feature_index, expr.feature_index2):
            if fi is not None and not 0 <= fi < circuit.n_features:
                issues.append(f"{where}: x_{fi} out of range for "
                              f"{circuit.n_features} features")
    for j in range(circuit.n_params):
        if j not in used_params:
            issues.append(f"theta_{j} is never referenced by any gate")
    return issues


# --------------------------------------------------------------------------
# Text format: one gate per line, `KIND qubit[,qubit] [angle-expr]` with
# angle-expr grammar `c [* t<j>] [* (a - x<i>)] [* (b - x<k>)]`
# --------------------------------------------------------------------------

_FACTOR_THETA = re.compile(r"^t(\d+)$")
_FACTOR_FEATURE = re.compile(r"^\(\s*([^\s]+)\s*-\s*x(\d+)\s*\)$")


def _format_expr(expr: AngleExpr) -> str:
    parts = [repr(expr.coeff)]
    if expr.param_index is not None:
        parts.append(f"t{expr.param_index}")
    if expr.feature_index is not None:
        parts.append(f"({expr.offsets[0]!r} - x{expr.feature_index})")
    if expr.feature_index2 is not None:
        parts.append(f"({expr.offsets[1]!r} - x{expr.feature_index2})")
    return " * ".join(parts)


def serialize_circuit(circuit: ParamCircuit) -> str:
    lines = []
    for gate in circuit.gates:
        line = f"{gate.kind} {','.join(str(q) for q in gate.qubits)}"
        if gate.angle is not None:
            line += f" {_format_expr(gate.angle)}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def _parse_expr(text: str, lineno: int) -> AngleExpr:
    factors = [f.strip() for f in text.split("*")]
    try:
        coeff = float(factors[0])
    except ValueError:
        raise ValueError(f"line {lineno}: bad coefficient {factors[0]!r}") from None
    param_index = None
    features: list[tuple[float, int]] = []
    for factor in factors[1:]:
        m = _FACTOR_THETA.match(factor)
        if m:
            if param_index is not None:
                raise ValueError(f"line {lineno}: more than one theta factor")
            param_index = int(m.group(1))
            continue
        m = _FACTOR_FEATURE.match(factor)
        if m:
            if len(features) == 2:
                raise ValueError(f"line {lineno}: more than two feature factors")
            try:
                offset = float(m.group(1))
            except ValueError:
                raise ValueError(f"line {lineno}: bad offset in {factor!r}") from None
            features.append((offset, int(m.group(2))))
            continue
        raise ValueError(f"line {lineno}: cannot parse factor {factor!r}")
    f1 = features[0] if features else (0.0, None)
    f2 = features[1] if len(features) > 1 else (0.0, None)
    return AngleExpr(coeff, param_index, f1[1], f2[1], (f1[0], f2[0]))


def parse_circuit(text: str, n_qubits: int | None = None,
                  n_features: int | None = None,
                  n_params: int | None = None) -> ParamCircuit:
    """Parse the line-oriented gate format; counts not given are inferred
    from the largest index referenced."""
    gates: list[GateOp] = []
    max_q = max_f = max_p = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(None, 2)
        kind = fields[0].upper()
        if kind not in GATE_KINDS:
            raise ValueError(f"line {lineno}: unknown gate kind {fields[0]!r}")
        if len(fields) < 2:
            raise ValueError(f"line {lineno}: missing qubit list")
        try:
            qubits = tuple(int(q) for q in fields[1].split(","))
        except ValueError:
            raise ValueError(f"line {lineno}: bad qubit list {fields[1]!r}") from None
        expr = None
        if len(fields) == 3:
            expr = _parse_expr(fields[2], lineno)
        gates.append(GateOp(kind, qubits, expr))
        max_q = max(max_q, *qubits)
        if expr is not None:
            if expr.param_index is not None:
                max_p = max(max_p, expr.param_index)
            for fi in (expr.feature_index, expr.feature_index2):
                if fi is not None:
                    max_f = max(max_f, fi)
    if not gates:
        raise ValueError("circuit file contains no gates")
    return ParamCircuit(
        n_qubits if n_qubits is not None else max_q + 1,
        n_features if n_features is not None else max_f + 1,
        n_params if n_params is not None else max_p + 1,
        tuple(gates))
