import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from elmlab.circuit import (
    MS,
    SQR,
    CircuitFormatError,
    CircuitProgram,
    deserialize,
    emit_trotter_circuit,
    phase_aligned_distance,
    resource_estimate,
    serialize,
    simulate_circuit,
)
from elmlab.dynamics import trotter_propagator
from elmlab.hamiltonians import ModelParams, qubit_spin_ops
from elmlab.spin import pauli_string


@pytest.mark.parametrize("n_steps, sqr, ms", [(1, 36, 3), (2, 72, 6)])
def test_gate_counts(n_steps, sqr, ms):
    prog = emit_trotter_circuit(ModelParams(6, 0.4, 0.3), 1.0, n_steps)
    assert prog.counts() == (sqr, ms)


def test_example_equivalence():
    p = ModelParams(4, 0.3, 0.5)
    U = simulate_circuit(emit_trotter_circuit(p, 1.0, 2))
    assert phase_aligned_distance(U, trotter_propagator(p, 1.0, 2, "qubit")) <= 1e-8


@given(st.sampled_from([2, 4, 6]), st.floats(0, 1), st.floats(0, 1), st.floats(0.1, 3), st.sampled_from([1, 3]))
@settings(max_examples=12, deadline=None)
def test_equivalence_property(N, lam, alpha, t, n):
    p = ModelParams(N, lam, alpha)
    U = simulate_circuit(emit_trotter_circuit(p, t, n))
    assert phase_aligned_distance(U, trotter_propagator(p, t, n, "qubit")) <= 1e-8


def test_empty_program_identity():
    assert np.allclose(simulate_circuit(CircuitProgram(3)), np.eye(8))


def test_single_sqr():
    U = simulate_circuit(CircuitProgram(1, [SQR("x", 1, np.pi)]))
    assert np.allclose(U, 1j * pauli_string([1], "x", 1))


def test_ms_matches_expm():
    _, Sx = qubit_spin_ops(2)
    U = simulate_circuit(CircuitProgram(2, [MS(0.37)]))
    assert np.allclose(U, expm(-0.37j * Sx @ Sx))


@pytest.mark.parametrize("phi, sign", [(np.pi / 2, 1)])
def test_ry_conjugation_maps_sx2_to_sz2(phi, sign):
    n = 3
    Sz, Sx = qubit_spin_ops(n)
    gates = [SQR("y", q, -phi) for q in range(1, n + 1)] + [MS(0.8)] + [SQR("y", q, phi) for q in range(1, n + 1)]
    U = simulate_circuit(CircuitProgram(n, gates))
    assert np.max(np.abs(U - expm(-0.8j * Sz @ Sz))) <= 1e-10


def test_resource_estimates():
    prog = emit_trotter_circuit(ModelParams(6, 0.2, 0.5), 1.0, 1)
    assert resource_estimate(prog).fidelity == pytest.approx(0.996967, abs=1e-6)
    assert resource_estimate(CircuitProgram(6)).fidelity == 1
    four = emit_trotter_circuit(ModelParams(6, 0.2, 0.5), 1.0, 4)
    assert resource_estimate(four).fidelity == pytest.approx(resource_estimate(prog).fidelity ** 4, rel=1e-12)


def test_round_trip():
    prog = emit_trotter_circuit(ModelParams(6, 0.2, 1 / np.sqrt(2)), 1.0, 1)
    back = deserialize(serialize(prog))
    assert back.gates == prog.gates and back.n == prog.n and back.meta == prog.meta


def test_round_trip_bit_exact():
    theta = 0.1 + 1e-16 * 3
    prog = CircuitProgram(1, [SQR("z", 1, np.nextafter(theta, 1.0))])
    assert deserialize(serialize(prog)).gates[0].theta == prog.gates[0].theta


def test_missing_angle_names_gate():
    data = json.loads(serialize(emit_trotter_circuit(ModelParams(2, 0.5, 0.5), 1.0, 1)))
    del data["gates"][3]["theta"]
    with pytest.raises(CircuitFormatError, match="gate 3"):
        deserialize(json.dumps(data))


@pytest.mark.parametrize(
    "text",
    ["not json", '{"gates": []}', '{"n": 2, "gates": [{"g": "cz", "theta": 1}]}', '{"n": 2, "gates": [{"g": "sqr", "axis": "x", "q": 5, "theta": 1}]}'],
)
def test_malformed_programs(text):
    with pytest.raises(CircuitFormatError):
        deserialize(text)


def test_invalid_gates():
    with pytest.raises(ValueError):
        SQR("w", 1, 0.1)
    with pytest.raises(ValueError):
        CircuitProgram(2, [SQR("x", 3, 0.1)])
    with pytest.raises(ValueError):
        emit_trotter_circuit(ModelParams(2, 0.5, 0.5), 1.0, 0)
