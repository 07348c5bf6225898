import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from idblock.ansatz import IdentityBlockPlan, build_identity_block, build_random_ansatz, random_params
from idblock.circuit import CircuitTemplate, GateSpec, Observable
from idblock.linalg import is_unitary
from idblock.simulator import (
    apply_gate, basis_state, circuit_unitary_dense, expectation, fidelity, random_state,
    run_circuit, same_up_to_phase, zero_state,
)

from conftest import random_pauli_observable


def test_cz_fixes_00():
    out = apply_gate(basis_state("00"), GateSpec.cz(0, 1), [])
    np.testing.assert_array_equal(out, basis_state("00"))


def test_cz_phase_on_11():
    out = apply_gate(basis_state("11"), GateSpec.cz(0, 1), [])
    np.testing.assert_array_equal(out, -basis_state("11"))


def test_rotation_zero_angle_is_identity(rng):
    psi = random_state(3, rng)
    out = apply_gate(psi, GateSpec.rotation("X", 0, 0), [0.0])
    np.testing.assert_allclose(out, psi, atol=1e-15)


def test_rx_half_pi_on_zero():
    # exp(-i pi/2 X) = -i X
    out = apply_gate(zero_state(1), GateSpec.rotation("X", 0, 0), [np.pi / 2])
    np.testing.assert_allclose(out, [0, -1j], atol=1e-15)


@pytest.mark.parametrize("axis", "XYZ")
def test_rotation_matches_matrix_exponential(axis, rng):
    from scipy.linalg import expm
    from idblock.linalg import PAULI, kron_all

    theta = 0.731
    psi = random_state(3, rng)
    g = GateSpec.rotation(axis, 1, 0)
    u = kron_all(np.eye(2), expm(-1j * theta * PAULI[axis]), np.eye(2))
    np.testing.assert_allclose(apply_gate(psi, g, [theta]), u @ psi, atol=1e-13)


def test_apply_gate_errors():
    with pytest.raises(IndexError):
        apply_gate(zero_state(2), GateSpec.rotation("X", 2, 0), [0.1])
    with pytest.raises(IndexError):
        apply_gate(zero_state(2), GateSpec.rotation("X", 0, 3), [0.1])
    with pytest.raises(ValueError):
        GateSpec.cz(1, 1)


def test_run_circuit_empty_template(rng):
    psi = random_state(2, rng)
    t = CircuitTemplate(2, (), 0)
    np.testing.assert_array_equal(run_circuit(t, [], psi), psi)
    np.testing.assert_array_equal(circuit_unitary_dense(t, []), np.eye(4))


def test_run_circuit_matches_gate_by_gate(rng):
    t = build_random_ansatz(3, 2, rng)
    p = random_params(t, rng)
    psi = random_state(3, rng)
    ref = psi
    for g in t.gates:
        ref = apply_gate(ref, g, p)
    np.testing.assert_allclose(run_circuit(t, p, psi), ref, atol=1e-14)


def test_run_circuit_param_count_mismatch():
    t = build_random_ansatz(2, 1, 0)
    with pytest.raises(ValueError):
        run_circuit(t, [0.1], zero_state(2))


def test_identity_block_is_identity(rng):
    t, p = build_identity_block(4, IdentityBlockPlan(2, 3, seed=5))
    psi = random_state(4, rng)
    out = run_circuit(t, p, psi)
    assert np.max(np.abs(out - psi)) < 1e-9
    u = circuit_unitary_dense(t, p)
    assert np.max(np.abs(u - np.eye(16))) < 1e-9


def test_expectation_examples():
    zz = Observable.zz(0, 1)
    assert expectation(basis_state("00"), zz) == 1.0
    assert expectation(basis_state("01"), zz) == -1.0
    bell = (basis_state("00") + basis_state("11")) / np.sqrt(2)
    assert abs(expectation(bell, zz) - 1.0) < 1e-15


def test_expectation_matches_dense(rng):
    for n in (1, 3, 5):
        obs = random_pauli_observable(n, rng)
        psi = random_state(n, rng)
        dense = np.vdot(psi, obs.matrix(n) @ psi).real
        assert abs(expectation(psi, obs) - dense) < 1e-12


def test_expectation_within_spectrum(rng):
    obs = random_pauli_observable(3, rng, n_terms=6)
    w = np.linalg.eigvalsh(obs.matrix(3))
    for _ in range(50):
        e = expectation(random_state(3, rng), obs)
        assert w[0] - 1e-12 <= e <= w[-1] + 1e-12


def test_expectation_qubit_out_of_range():
    with pytest.raises(IndexError):
        expectation(zero_state(2), Observable.zz(0, 2))


def test_expectation_global_phase_and_linearity(rng):
    psi = random_state(4, rng)
    a, b = random_pauli_observable(4, rng), random_pauli_observable(4, rng)
    e = expectation(psi, a)
    assert abs(expectation(np.exp(1.234j) * psi, a) - e) < 1e-12
    combo = a.scaled(2.5) + b.scaled(-0.75)
    lin = 2.5 * e - 0.75 * expectation(psi, b)
    assert abs(expectation(psi, combo) - lin) < 1e-12


def test_dense_unitary_matches_run_circuit(rng):
    for n in range(1, 7):
        t = build_random_ansatz(max(n, 2), 3, rng) if n > 1 else CircuitTemplate(
            1, (GateSpec.rotation("Y", 0, 0),), 1)
        p = random_params(t, rng)
        u = circuit_unitary_dense(t, p)
        assert is_unitary(u, 1e-10)
        psi = random_state(t.n_qubits, rng)
        np.testing.assert_allclose(u @ psi, run_circuit(t, p, psi), atol=1e-10)


def test_dense_unitary_size_cap():
    t = build_random_ansatz(11, 1, 0)
    with pytest.raises(ValueError):
        circuit_unitary_dense(t, np.zeros(t.n_params))


def test_norm_preservation_many_circuits():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(2, 7))
        t = build_random_ansatz(n, int(rng.integers(1, 6)), rng)
        out = run_circuit(t, random_params(t, rng), random_state(n, rng))
        assert abs(np.linalg.norm(out) - 1) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 2 * np.pi))
def test_fidelity_phase_insensitive(seed, phase):
    psi = random_state(3, np.random.default_rng(seed))
    assert same_up_to_phase(psi, np.exp(1j * phase) * psi)
    assert fidelity(psi, psi) == pytest.approx(1.0, abs=1e-12)


def test_fixed_gate_and_text_round_trip(rng):
    from idblock.ansatz import SQRT_H

    t = build_random_ansatz(3, 2, rng)
    gates = t.gates + (GateSpec.fixed(SQRT_H, 2),)
    t2 = CircuitTemplate(3, gates, t.n_params)
    back = CircuitTemplate.from_text(t2.to_text())
    assert back.gates == t2.gates and back.n_params == t2.n_params
    p = random_params(t2, rng)
    psi = random_state(3, rng)
    np.testing.assert_allclose(run_circuit(back, p, psi), run_circuit(t2, p, psi), atol=1e-15)
    assert t.to_text().splitlines()[0] == "QUBITS 3 PARAMS 6"
