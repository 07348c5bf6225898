"""Haar-random unitaries and Monte Carlo checks of the gradient moments over
the unitary group."""

import itertools
from dataclasses import dataclass

import numpy as np

from .ansatz import as_rng
from .gradients import grad_direction_dense
from .linalg import commutator, is_hermitian, qr_unitary_factor

N_BATCHES = 20


@dataclass
class MomentEstimate:
    mean: float
    variance: float
    std_error_mean: float
    std_error_var: float
    n_samples: int


def ginibre(N, rng, size=None):
    shape = (N, N) if size is None else (int(size), N, N)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def sample_haar(N, rng=None):
    """Haar-distributed ``N x N`` unitary via phase-fixed QR of a Ginibre matrix."""
    if N < 2:
        raise ValueError("Haar sampling needs N >= 2")
    return qr_unitary_factor(ginibre(N, as_rng(rng)))


def sample_haar_batch(N, count, rng=None):
    """``count`` independent Haar unitaries, shape ``(count, N, N)``.

    Same phase convention as :func:`sample_haar`, vectorised over the batch.
    """
    if N < 2:
        raise ValueError("Haar sampling needs N >= 2")
    g = ginibre(N, as_rng(rng), size=count)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[:, np.newaxis, :]


def _batch_streams(rng, n_batches):
    # one child stream per batch keeps results independent of evaluation order
    return as_rng(rng).spawn(n_batches)


def _split(n_samples, n_batches):
    sizes = np.full(n_batches, n_samples // n_batches)
    sizes[: n_samples % n_batches] += 1
    return sizes


def _default_psi0(N, psi0):
    if psi0 is None:
        psi0 = np.zeros(N, dtype=complex)
        psi0[0] = 1.0
    return np.asarray(psi0, dtype=complex)


def _check_pair(M, obs, N=None):
    M = np.asarray(M, dtype=complex)
    obs = np.asarray(obs, dtype=complex)
    if M.shape != obs.shape or M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"dimension mismatch: M{M.shape} vs H{obs.shape}")
    if N is not None and M.shape[0] != N:
        raise ValueError(f"matrices are {M.shape[0]}-dimensional, expected {N}")
    if not (is_hermitian(M, 1e-10) and is_hermitian(obs, 1e-10)):
        raise ValueError("M and H must be Hermitian")
    return M, obs


def haar_gradients(U, M, obs, psi0):
    """``i <psi0|[U^dag H U, M]|psi0>`` for a stack of unitaries ``U``.

    Uses ``M psi0 - <M> psi0`` in place of ``M psi0``: the commutator is blind
    to the shift and a ``psi0`` eigen-direction then gives exactly zero.
    """
    m_psi = M @ psi0
    r = m_psi - np.vdot(psi0, m_psi) * psi0
    u = U @ psi0
    w = U @ r
    a = np.einsum("si,ij,sj->s", u.conj(), obs, w)
    return -2.0 * a.imag


def grad_moments_mc(N, M, obs, psi0=None, n_samples=10_000, rng=None, n_batches=N_BATCHES):
    """Mean and variance of the directional gradient over Haar ``U``.

    Standard errors come from ``n_batches`` batch means (and batch variances).
    """
    M, obs = _check_pair(M, obs, N)
    if n_samples < 100:
        raise ValueError("grad_moments_mc needs at least 100 samples")
    psi0 = _default_psi0(N, psi0)
    batches = []
    for stream, size in zip(_batch_streams(rng, n_batches), _split(n_samples, n_batches)):
        batches.append(haar_gradients(sample_haar_batch(N, size, stream), M, obs, psi0))
    g = np.concatenate(batches)
    bmeans = np.array([b.mean() for b in batches])
    bvars = np.array([b.var(ddof=1) for b in batches])
    return MomentEstimate(
        mean=float(g.mean()),
        variance=float(g.var(ddof=1)),
        std_error_mean=float(bmeans.std(ddof=1) / np.sqrt(n_batches)),
        std_error_var=float(bvars.std(ddof=1) / np.sqrt(n_batches)),
        n_samples=int(g.size),
    )


def variance_closed_form(M, obs, psi0=None):
    """``2 ((M^2)_00 - M_00^2) / (N^2 - 1) * (Tr H^2 - (Tr H)^2 / N)``."""
    M, obs = _check_pair(M, obs)
    N = M.shape[0]
    psi0 = _default_psi0(N, psi0)
    m_psi = M @ psi0
    m00 = np.vdot(psi0, m_psi).real
    m2_00 = np.vdot(m_psi, m_psi).real
    tr_h = np.trace(obs).real
    tr_h2 = np.trace(obs @ obs).real
    return float(2 * (m2_00 - m00**2) / (N**2 - 1) * (tr_h2 - tr_h**2 / N))


def identity_init_gradient(obs, M, psi0=None):
    """``i <psi0|[H, M]|psi0>``: the directional gradient at ``U = I``."""
    M, obs = _check_pair(M, obs)
    psi0 = _default_psi0(M.shape[0], psi0)
    return float((1j * np.vdot(psi0, commutator(obs, M) @ psi0)).real)


def second_moment_analytic(N, t):
    """Haar average of ``U_{i1j1} U_{i2j2} U*_{i1'j1'} U*_{i2'j2'}``.

    ``t = (i1, j1, i2, j2, i1', j1', i2', j2')``.
    """
    i1, j1, i2, j2, k1, l1, k2, l2 = t
    d = lambda a, b: 1.0 if a == b else 0.0
    direct = d(i1, k1) * d(i2, k2)
    cross = d(i1, k2) * d(i2, k1)
    plus = direct * d(j1, l1) * d(j2, l2) + cross * d(j1, l2) * d(j2, l1)
    minus = direct * d(j1, l2) * d(j2, l1) + cross * d(j1, l1) * d(j2, l2)
    return plus / (N**2 - 1) - minus / (N * (N**2 - 1))


@dataclass
class SecondMomentTable:
    tuples: np.ndarray
    empirical: np.ndarray
    analytic: np.ndarray
    std_error: np.ndarray
    n_samples: int

    @property
    def residual(self):
        return np.abs(self.empirical - self.analytic)


def moment_tuples(N, rng=None, n_random=200):
    """All index tuples for ``N = 2``; ``n_random`` random ones otherwise."""
    if N == 2:
        return np.array(list(itertools.product(range(N), repeat=8)))
    return as_rng(rng).integers(0, N, size=(n_random, 8))


def second_moment_table(N, n_samples, rng=None, tuples=None, n_batches=N_BATCHES):
    rng = as_rng(rng)
    if tuples is None:
        tuples = moment_tuples(N, rng)
    tuples = np.asarray(tuples)
    sums = []
    sizes = _split(n_samples, n_batches)
    for stream, size in zip(_batch_streams(rng, n_batches), sizes):
        U = sample_haar_batch(N, size, stream)
        i1, j1, i2, j2, k1, l1, k2, l2 = tuples.T
        prod = U[:, i1, j1] * U[:, i2, j2] * U[:, k1, l1].conj() * U[:, k2, l2].conj()
        sums.append(prod.mean(axis=0))
    bmeans = np.array(sums)
    emp = (bmeans * sizes[:, None]).sum(axis=0) / sizes.sum()
    se = np.sqrt(bmeans.real.var(axis=0, ddof=1) + bmeans.imag.var(axis=0, ddof=1))
    se /= np.sqrt(n_batches)
    analytic = np.array([second_moment_analytic(N, t) for t in tuples])
    return SecondMomentTable(tuples, emp, analytic, se, int(n_samples))


def second_moment_residual(N, n_samples, rng=None):
    """Largest ``|empirical - analytic|`` over the covering tuple set."""
    if N not in (2, 4):
        raise ValueError("second-moment check is defined for N in {2, 4}")
    return float(second_moment_table(N, n_samples, rng).residual.max())
