# numba kernels for in-place statevector updates.
#
# Qubit q lives on bit (n - 1 - q) of the basis index, so qubit 0 is the most
# significant factor of a Kronecker product.
#
# Compiled gate program rows: (kind, arg, qa, qb)
#   kind 0  rotation   arg = axis (0 X, 1 Y, 2 Z), qa = target, qb = slot
#   kind 1  CZ         qa = control, qb = target
#   kind 2  fixed 2x2  arg = index into the matrix table, qa = target
import numpy as np
from numba import njit

ROT, CZ, FIXED = 0, 1, 2
AX_X, AX_Y, AX_Z = 0, 1, 2

_opts = dict(cache=True, nogil=True, fastmath=False)


@njit(**_opts)
def apply_rot(psi, n, q, axis, theta):
    c = np.cos(theta)
    s = np.sin(theta)
    stride = 1 << (n - 1 - q)
    dim = psi.shape[0]
    if axis == AX_Z:
        lo = complex(c, -s)
        hi = complex(c, s)
        for i in range(dim):
            if i & stride:
                psi[i] *= hi
            else:
                psi[i] *= lo
        return
    for i in range(dim):
        if i & stride:
            continue
        j = i | stride
        a = psi[i]
        b = psi[j]
        if axis == AX_X:
            psi[i] = c * a - 1j * s * b
            psi[j] = c * b - 1j * s * a
        else:
            psi[i] = c * a - s * b
            psi[j] = c * b + s * a


@njit(**_opts)
def apply_cz(psi, n, qa, qb):
    mask = (1 << (n - 1 - qa)) | (1 << (n - 1 - qb))
    for i in range(psi.shape[0]):
        if i & mask == mask:
            psi[i] = -psi[i]


@njit(**_opts)
def apply_mat(psi, n, q, m):
    stride = 1 << (n - 1 - q)
    for i in range(psi.shape[0]):
        if i & stride:
            continue
        j = i | stride
        a = psi[i]
        b = psi[j]
        psi[i] = m[0, 0] * a + m[0, 1] * b
        psi[j] = m[1, 0] * a + m[1, 1] * b


@njit(**_opts)
def apply_op(psi, n, op, mats, params, inverse):
    kind = op[0]
    if kind == ROT:
        th = params[op[3]]
        if inverse:
            th = -th
        apply_rot(psi, n, op[2], op[1], th)
    elif kind == CZ:
        apply_cz(psi, n, op[2], op[3])
    else:
        m = mats[op[1]]
        if inverse:
            m = np.conj(m.T).copy()
        apply_mat(psi, n, op[2], m)


@njit(**_opts)
def run_program(psi, n, ops, mats, params):
    for g in range(ops.shape[0]):
        apply_op(psi, n, ops[g], mats, params, False)


@njit(**_opts)
def unrun_program(psi, n, ops, mats, params):
    for g in range(ops.shape[0] - 1, -1, -1):
        apply_op(psi, n, ops[g], mats, params, True)


@njit(**_opts)
def _popcount_parity(x):
    p = 0
    while x:
        x &= x - 1
        p ^= 1
    return p


@njit(**_opts)
def _phase(n_y):
    r = n_y % 4
    if r == 0:
        return 1.0 + 0j
    if r == 1:
        return 1j
    if r == 2:
        return -1.0 + 0j
    return -1j


@njit(**_opts)
def apply_pauli_sum(psi, out, coefs, xmasks, zmasks, nys):
    """out <- sum_t c_t P_t psi."""
    out[:] = 0
    for t in range(coefs.shape[0]):
        c = coefs[t] * _phase(nys[t])
        xm = xmasks[t]
        zm = zmasks[t]
        for i in range(psi.shape[0]):
            if _popcount_parity(i & zm):
                out[i ^ xm] -= c * psi[i]
            else:
                out[i ^ xm] += c * psi[i]


@njit(**_opts)
def expect_pauli_sum(psi, coefs, xmasks, zmasks, nys):
    total = 0.0 + 0j
    for t in range(coefs.shape[0]):
        acc = 0.0 + 0j
        xm = xmasks[t]
        zm = zmasks[t]
        for i in range(psi.shape[0]):
            v = np.conj(psi[i ^ xm]) * psi[i]
            if _popcount_parity(i & zm):
                acc -= v
            else:
                acc += v
        total += coefs[t] * _phase(nys[t]) * acc
    return total


@njit(**_opts)
def im_inner_pauli(lam, psi, n, q, axis):
    """Im <lam| V_q |psi> for a single-qubit Pauli V on qubit q."""
    stride = 1 << (n - 1 - q)
    acc = 0.0 + 0j
    for i in range(psi.shape[0]):
        j = i ^ stride
        hi = (i & stride) != 0
        if axis == AX_X:
            acc += np.conj(lam[j]) * psi[i]
        elif axis == AX_Y:
            # Y|0> = i|1>, Y|1> = -i|0>
            if hi:
                acc += np.conj(lam[j]) * (-1j) * psi[i]
            else:
                acc += np.conj(lam[j]) * 1j * psi[i]
        else:
            if hi:
                acc -= np.conj(lam[i]) * psi[i]
            else:
                acc += np.conj(lam[i]) * psi[i]
    return acc.imag


@njit(**_opts)
def adjoint_sweep(psi, lam, n, ops, mats, params, grad):
    """Reverse-mode gradient of <psi|H|psi>.

    On entry ``psi`` is the circuit output and ``lam`` is ``H psi``; both are
    consumed. ``grad`` is accumulated into (slot-indexed).
    """
    for g in range(ops.shape[0] - 1, -1, -1):
        op = ops[g]
        if op[0] == ROT:
            grad[op[3]] += 2.0 * im_inner_pauli(lam, psi, n, op[2], op[1])
        apply_op(psi, n, op, mats, params, True)
        apply_op(lam, n, op, mats, params, True)
