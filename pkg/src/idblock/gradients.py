"""Partial derivatives of ``E(theta) = <in|U^dag H U|in>``.

Three routes that check each other: an adjoint reverse sweep (all slots at
once), the two-point shift rule and central finite differences. The dense
commutator form ``i <psi0|[U^dag H U, M]|psi0>`` covers arbitrary tangent
directions ``dU = i U M``.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .linalg import PAULI, commutator, dagger, is_hermitian, is_unitary, kron_all
from .simulator import apply_observable, energy, prefix_unitary_dense, run_circuit

SHIFT = np.pi / 4
FD_STEP = 1e-5


@dataclass
class GradientResult:
    values: np.ndarray
    method: str

    def __len__(self):
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


def _shifted(params, k, delta):
    p = np.array(params, dtype=float)
    p[k] += delta
    return p


def grad_parameter_shift(template, params, state, obs, k):
    """``E(theta_k + pi/4) - E(theta_k - pi/4)``.

    Exact for ``exp(-i theta V)`` with ``V**2 = I``; the familiar pi/2 shift
    belongs to the half-angle convention and would be wrong here.
    """
    params = template.check_params(params)
    if not 0 <= k < template.n_params or template.slot_gates[k] is None:
        raise ValueError(f"slot {k} is not a rotation")
    return energy(template, _shifted(params, k, SHIFT), state, obs) - energy(
        template, _shifted(params, k, -SHIFT), state, obs
    )


def grad_finite_diff(template, params, state, obs, k, h=FD_STEP):
    if h <= 0:
        raise ValueError("finite-difference step must be positive")
    params = template.check_params(params)
    up = energy(template, _shifted(params, k, h), state, obs)
    down = energy(template, _shifted(params, k, -h), state, obs)
    return (up - down) / (2 * h)


def grad_adjoint_all(template, params, state, obs):
    """All partials from one forward pass and one reverse sweep.

    Keeps two working states (the circuit state and ``H`` applied to it)
    and un-applies gates from the end, so memory stays ``O(2**n)``.
    """
    params = template.check_params(params)
    psi = run_circuit(template, params, state)
    lam = apply_observable(psi, obs)
    grad = np.zeros(template.n_params)
    ops, mats = template.program
    K.adjoint_sweep(psi, lam, template.n_qubits, ops, mats, params, grad)
    return GradientResult(grad, "adjoint")


def energy_and_grad(template, params, state, obs):
    """``(E, dE/dtheta)`` sharing the forward pass."""
    params = template.check_params(params)
    psi = run_circuit(template, params, state)
    lam = apply_observable(psi, obs)
    e = float(np.vdot(psi, lam).real)
    grad = np.zeros(template.n_params)
    ops, mats = template.program
    K.adjoint_sweep(psi, lam, template.n_qubits, ops, mats, params, grad)
    return e, grad


def grad_direction_dense(U, M, obs_dense, psi0):
    """``i <psi0| [U^dag H U, M] |psi0>``, the derivative along ``dU = i U M``."""
    U = np.asarray(U, dtype=complex)
    M = np.asarray(M, dtype=complex)
    H = np.asarray(obs_dense, dtype=complex)
    psi0 = np.asarray(psi0, dtype=complex)
    if not (U.shape == M.shape == H.shape) or U.shape[0] != psi0.shape[0]:
        raise ValueError(
            f"dimension mismatch: U{U.shape} M{M.shape} H{H.shape} psi0{psi0.shape}"
        )
    if not is_hermitian(M, tol=1e-10):
        raise ValueError("direction generator M must be Hermitian")
    if not is_unitary(U, tol=1e-8):
        raise ValueError("U must be unitary")
    val = 1j * np.vdot(psi0, commutator(dagger(U) @ H @ U, M) @ psi0)
    return float(val.real)


def slot_generator_dense(template, params, k):
    """Hermitian ``M_k`` with ``dU/dtheta_k = i U M_k``.

    For ``U = U_+ U_-`` with gate ``k`` the first factor of ``U_+`` this is
    ``-U_-^dag V_k U_-``.
    """
    params = template.check_params(params)
    n = template.n_qubits
    idx = next(i for i, g in enumerate(template.gates) if g.kind == "rot" and g.slot == k)
    u_minus = prefix_unitary_dense(template, params, idx)
    g = template.gates[idx]
    V = kron_all(*(PAULI[g.axis] if q == g.target else PAULI["I"] for q in range(n)))
    return -dagger(u_minus) @ V @ u_minus



def _embed(gate, n, theta=0.0):
    """Full ``2**n`` matrix of one gate, built with Kronecker products."""
    if gate.kind == "cz":
        bits = (np.arange(2**n)[:, None] >> (n - 1 - np.array(gate.qubits()))) & 1
        return np.diag(np.where(bits.all(axis=1), -1.0, 1.0)).astype(complex)
    u = gate.unitary(theta)
    return kron_all(*(u if q == gate.target else PAULI["I"] for q in range(n)))


def slot_generators_dense(template, params):
    """Every slot's ``M_k`` (see :func:`slot_generator_dense`) in one sweep.

    Gate matrices are built explicitly rather than through the statevector
    kernels, so this doubles as an independent oracle for small circuits.
    """
    params = template.check_params(params)
    n = template.n_qubits
    u_minus = np.eye(2**n, dtype=complex)
    out = [None] * template.n_params
    for g in template.gates:
        theta = 0.0
        if g.kind == "rot":
            theta = params[g.slot]
            V = kron_all(*(PAULI[g.axis] if q == g.target else PAULI["I"] for q in range(n)))
            out[g.slot] = -dagger(u_minus) @ V @ u_minus
        u_minus = _embed(g, n, theta) @ u_minus
    return out
