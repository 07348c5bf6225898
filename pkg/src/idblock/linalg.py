"""Dense complex linear algebra used by the simulator, the Haar sampler and
the exact-diagonalisation oracle.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``.
"""

import numpy as np

# Largest dense operator dimension is 2**MAX_QUBITS.
MAX_QUBITS = 14
MAX_DIM = 2**MAX_QUBITS

UNITARY_TOL = 1e-10
HERMITIAN_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}


def _as_matrix(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    return a


def _square(a):
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def kron(a, b):
    """Kronecker product ``a ⊗ b``.

    Raises ``ValueError`` when either dimension of the result would exceed
    ``MAX_DIM``.
    """
    a = _as_matrix(a)
    b = _as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > MAX_DIM or cols > MAX_DIM:
        raise ValueError(f"kron result {rows}x{cols} exceeds the dense cap {MAX_DIM}")
    return np.kron(a, b)


def kron_all(*mats):
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = kron(out, m)
    return out


def commutator(a, b):
    """Return ``ab - ba``."""
    a = _square(a)
    b = _square(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def dagger(a):
    return np.conjugate(np.transpose(a))


def is_hermitian(a, tol=HERMITIAN_TOL):
    a = np.asarray(a)
    scale = max(1.0, float(np.max(np.abs(a))))
    return bool(np.max(np.abs(a - dagger(a))) < tol * scale)


def is_unitary(u, tol=UNITARY_TOL):
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))) < tol)


def hermitian_eig(a):
    """Eigen-decomposition of a Hermitian matrix.

    Returns
    -------
    eigenvalues : ndarray of float, ascending
    eigenvectors : ndarray, columns are the eigenvectors
    """
    a = _square(a)
    if not is_hermitian(a, tol=1e-10):
        raise ValueError("hermitian_eig requires a Hermitian matrix")
    # LinAlgError from LAPACK is the convergence-failure signal.
    w, v = np.linalg.eigh(a)
    return w, v


def qr_unitary_factor(a, rank_tol=1e-12):
    """Q factor of ``a = QR`` with R's diagonal made real and positive.

    The phase convention makes the factorisation unique, which is what turns
    a Ginibre matrix into a Haar-distributed unitary.
    """
    a = _square(a)
    q, r = np.linalg.qr(a)
    d = np.diagonal(r)
    absd = np.abs(d)
    if np.min(absd) <= rank_tol * max(1.0, float(np.max(np.abs(a)))):
        raise ValueError("qr_unitary_factor: input is rank deficient")
    return q * (d / absd)[np.newaxis, :]
