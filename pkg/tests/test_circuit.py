"""Circuit builder tests: parameter-count laws, gate layouts, validation,
and the text round trip."""

import math

import numpy as np
import pytest

from qctandem.circuit import (AngleExpr, GateOp, ParamCircuit,
                              build_combined, build_feature_var,
                              build_real_amplitudes, build_zz_feature_map,
                              concatenate, const_angle, feature_angle,
                              pair_feature_angle, param_angle, parse_circuit,
                              resolve_angle, serialize_circuit,
                              validate_circuit)
from qctandem.qsim import run_circuit


def test_resolve_angle_shapes():
    assert resolve_angle(const_angle(1.5), [], []) == 1.5
    assert resolve_angle(feature_angle(0, 2.0), [0.7], []) == pytest.approx(1.4)
    pair = pair_feature_angle(0, 1, 2.0, math.pi)
    assert resolve_angle(pair, [math.pi, 0.0], []) == 0.0
    assert resolve_angle(param_angle(0, 3.0), [], [0.5]) == pytest.approx(1.5)


def test_resolve_angle_index_errors():
    with pytest.raises(ValueError):
        resolve_angle(param_angle(1), [], [0.5])
    with pytest.raises(ValueError):
        resolve_angle(feature_angle(2), [0.1, 0.2], [])


def test_zz_feature_map_structure():
    circ = build_zz_feature_map(3, reps=2)
    assert circ.n_params == 0
    assert circ.n_features == 3
    assert len(build_zz_feature_map(2, reps=2).gates) == 14
    referenced = {g.angle.feature_index for g in circ.gates if g.angle is not None}
    assert referenced == {0, 1, 2}


def test_real_amplitudes_param_counts():
    assert build_real_amplitudes(3, reps=1).n_params == 6
    assert build_real_amplitudes(2, reps=1).n_params == 4
    assert build_real_amplitudes(3, reps=2).n_params == 9


def test_feature_var_layout():
    circ = build_feature_var(3)
    assert (circ.n_params, circ.n_features) == (6, 3)
    assert build_feature_var(2).n_params == 4
    assert circ.gates[0].kind == "H"


def test_feature_var_identity_point():
    """All-zero rotation angles on the x = (pi, pi) encoding leave |00>."""
    state = run_circuit(build_feature_var(2), [math.pi, math.pi], np.zeros(4))
    assert abs(state.amps[0]) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", range(2, 9))
def test_parameter_count_laws(n):
    assert build_feature_var(n).n_params == 2 * n
    assert build_combined(n).n_params == 2 * n + 3


@pytest.mark.parametrize("n", range(2, 9))
def test_combined_entanglers(n):
    cnots = [g for g in build_combined(n).gates if g.kind == "CNOT"]
    assert len(cnots) == 6 * (n - 1)
    assert all(abs(g.qubits[0] - g.qubits[1]) == 1 for g in cnots)


def test_combined_angle_forms():
    """The merged circuit must mix plain-feature, plain-theta, and
    theta-times-feature rotation angles."""
    circ = build_combined(3)
    exprs = [g.angle for g in circ.gates if g.angle is not None]
    assert any(e.param_index is None and e.feature_index is not None for e in exprs)
    assert any(e.param_index is not None and e.feature_index is None for e in exprs)
    assert any(e.param_index is not None and e.feature_index is not None for e in exprs)


@pytest.mark.parametrize("builder", [build_zz_feature_map, build_real_amplitudes,
                                     build_feature_var, build_combined])
def test_builders_reject_single_qubit(builder):
    with pytest.raises(ValueError):
        builder(1)


def test_concatenate_shifts_parameters():
    ra = build_real_amplitudes(2)
    both = concatenate(ra, ra)
    assert both.n_params == 8
    indices = [g.angle.param_index for g in both.gates if g.angle is not None]
    assert sorted(set(indices)) == list(range(8))


def test_validate_accepts_builders():
    assert validate_circuit(build_combined(3)) == []
    assert validate_circuit(build_feature_var(4)) == []


def test_validate_flags_bad_param_reference():
    circ = ParamCircuit(2, 0, 3, (GateOp("RY", (0,), param_angle(5)),))
    issues = validate_circuit(circ)
    assert any("theta_5" in msg for msg in issues)


def test_validate_flags_unused_param():
    circ = ParamCircuit(2, 0, 1, (GateOp("H", (0,)),))
    assert any("theta_0" in msg for msg in validate_circuit(circ))


def test_validate_flags_structural_issues():
    bad = ParamCircuit(2, 1, 1, (
        GateOp("CNOT", (0, 0)),
        GateOp("PHASE", (1,), param_angle(0)),      # theta on a non-rotation
        GateOp("RY", (5,), const_angle(0.1)),       # qubit out of range
        GateOp("RZ", (0,), feature_angle(3)),       # feature out of range
    ))
    issues = validate_circuit(bad)
    assert len(issues) >= 4


def test_serialize_parse_round_trip():
    rng = np.random.default_rng(1)
    for circ in (build_combined(3), build_feature_var(2)):
        text = serialize_circuit(circ)
        parsed = parse_circuit(text)
        assert (parsed.n_qubits, parsed.n_features, parsed.n_params) == \
            (circ.n_qubits, circ.n_features, circ.n_params)
        x = rng.uniform(0, math.pi, circ.n_features)
        theta = rng.uniform(0, 2 * math.pi, circ.n_params)
        assert np.allclose(parsed.compiled.resolve_angles(x, theta),
                           circ.compiled.resolve_angles(x, theta))


def test_parse_skips_comments_and_blanks():
    circ = parse_circuit("# encoding layer\n\nH 0\nCNOT 0,1\nRY 1 1.0 * t0\n")
    assert len(circ.gates) == 3
    assert circ.n_qubits == 2
    assert circ.n_params == 1


@pytest.mark.parametrize("text", [
    "FOO 0",
    "H",
    "RY 0 nonsense",
    "RY 0 1.0 * t0 * t1",
    "RY zero 1.0",
    "",
])
def test_parse_rejects_malformed(text):
    with pytest.raises(ValueError):
        parse_circuit(text)
