"""Statevector simulation of circuit templates.

States are plain ``complex128`` arrays of length ``2**n``; qubit 0 is the
most significant bit of the basis index.
"""

import numpy as np

from . import _kernels as K
from .circuit import CircuitTemplate, GateSpec

NORM_TOL = 1e-10
DENSE_MAX_QUBITS = 10


def n_qubits_of(state):
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise ValueError(f"state length {dim} is not a power of two >= 2")
    return n


def as_state(state, check_norm=True):
    psi = np.ascontiguousarray(state, dtype=complex)
    if psi.ndim != 1:
        raise ValueError("a state must be a 1-D amplitude vector")
    n_qubits_of(psi)
    if check_norm and abs(np.linalg.norm(psi) - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalised (norm {np.linalg.norm(psi)!r})")
    return psi


def zero_state(n_qubits):
    psi = np.zeros(2**n_qubits, dtype=complex)
    psi[0] = 1.0
    return psi


def basis_state(bits):
    """Computational basis state from a bit string such as ``"01"``."""
    psi = np.zeros(2 ** len(bits), dtype=complex)
    psi[int(bits, 2)] = 1.0
    return psi


def random_state(n_qubits, rng):
    v = rng.standard_normal(2**n_qubits) + 1j * rng.standard_normal(2**n_qubits)
    return v / np.linalg.norm(v)


def fidelity(a, b):
    """Phase-insensitive overlap ``|<a|b>|``."""
    return float(abs(np.vdot(a, b)))


def same_up_to_phase(a, b, tol=1e-12):
    return fidelity(a, b) > 1.0 - tol


def _check_fits(template, n):
    if template.n_qubits != n:
        raise ValueError(f"template has {template.n_qubits} qubits, state has {n}")


def apply_gate(state, gate: GateSpec, params, n_qubits=None):
    """Return ``U_gate |state>`` as a new array."""
    psi = as_state(state).copy()
    n = n_qubits_of(psi)
    for q in gate.qubits():
        if not 0 <= q < n:
            raise IndexError(f"qubit {q} out of range for {n} qubits")
    if gate.kind == "rot":
        params = np.asarray(params, dtype=float)
        if not 0 <= gate.slot < params.shape[0]:
            raise IndexError(f"parameter slot {gate.slot} missing")
        K.apply_rot(psi, n, gate.target, "XYZ".index(gate.axis), float(params[gate.slot]))
    elif gate.kind == "cz":
        K.apply_cz(psi, n, gate.control, gate.target)
    else:
        K.apply_mat(psi, n, gate.target, gate.unitary())
    return psi


def run_circuit(template: CircuitTemplate, params, state):
    """Apply every gate of ``template`` in order to ``state``."""
    params = template.check_params(params)
    psi = as_state(state).copy()
    _check_fits(template, n_qubits_of(psi))
    ops, mats = template.program
    K.run_program(psi, template.n_qubits, ops, mats, params)
    return psi


def run_circuit_inverse(template: CircuitTemplate, params, state):
    """Apply ``U(params)^dagger``."""
    params = template.check_params(params)
    psi = as_state(state).copy()
    _check_fits(template, n_qubits_of(psi))
    ops, mats = template.program
    K.unrun_program(psi, template.n_qubits, ops, mats, params)
    return psi


def expectation(state, obs):
    """``<psi|H|psi>`` evaluated term by term."""
    psi = as_state(state)
    coefs, xm, zm, ny = obs.compiled(n_qubits_of(psi))
    return float(K.expect_pauli_sum(psi, coefs, xm, zm, ny).real)


def apply_observable(state, obs):
    """``H |psi>`` (not normalised)."""
    psi = np.ascontiguousarray(state, dtype=complex)
    coefs, xm, zm, ny = obs.compiled(n_qubits_of(psi))
    out = np.empty_like(psi)
    K.apply_pauli_sum(psi, out, coefs, xm, zm, ny)
    return out


def energy(template, params, state, obs):
    return expectation(run_circuit(template, params, state), obs)


def circuit_unitary_dense(template: CircuitTemplate, params):
    """Full ``2**n x 2**n`` unitary, built column by column."""
    n = template.n_qubits
    if n > DENSE_MAX_QUBITS:
        raise ValueError(f"dense unitary limited to {DENSE_MAX_QUBITS} qubits, got {n}")
    params = template.check_params(params)
    ops, mats = template.program
    return _dense_from_ops(n, ops, mats, params)


def prefix_unitary_dense(template: CircuitTemplate, params, n_gates):
    """Dense unitary of the first ``n_gates`` gates of ``template``."""
    n = template.n_qubits
    if n > DENSE_MAX_QUBITS:
        raise ValueError(f"dense unitary limited to {DENSE_MAX_QUBITS} qubits, got {n}")
    params = template.check_params(params)
    ops, mats = template.program
    return _dense_from_ops(n, ops[:n_gates], mats, params)


def _dense_from_ops(n, ops, mats, params):
    dim = 2**n
    u = np.eye(dim, dtype=complex)
    for col in range(dim):
        psi = np.ascontiguousarray(u[:, col])
        K.run_program(psi, n, np.ascontiguousarray(ops), mats, params)
        u[:, col] = psi
    return u
