import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from idblock.linalg import (
    I2, X, Y, Z, MAX_DIM, commutator, hermitian_eig, is_unitary, kron, qr_unitary_factor,
)

from conftest import random_hermitian


def test_kron_identity():
    np.testing.assert_array_equal(kron(I2, I2), np.eye(4))


def test_kron_zz_diagonal():
    np.testing.assert_array_equal(np.diag(kron(Z, Z)).real, [1, -1, -1, 1])


def test_kron_x_first_factor_flips_msb():
    e0 = np.zeros(4)
    e0[0] = 1
    np.testing.assert_array_equal(kron(X, I2) @ e0, [0, 0, 1, 0])


def test_kron_rejects_empty_and_oversize():
    with pytest.raises(ValueError):
        kron(np.zeros((0, 0)), I2)
    big = np.ones((MAX_DIM, 1))
    with pytest.raises(ValueError):
        kron(big, np.ones((2, 1)))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_kron_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3)) for _ in range(3))
    np.testing.assert_allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12)


def test_commutator_examples():
    np.testing.assert_array_equal(commutator(Z, Z), np.zeros((2, 2)))
    # XZ = -iY and ZX = iY
    np.testing.assert_allclose(commutator(X, Z), -2j * Y)
    m = np.arange(4).reshape(2, 2) + 1j
    np.testing.assert_array_equal(commutator(I2, m), np.zeros((2, 2)))


def test_commutator_dimension_mismatch():
    with pytest.raises(ValueError):
        commutator(I2, np.eye(4))


def test_hermitian_eig_examples(rng):
    w, _ = hermitian_eig(Z)
    np.testing.assert_allclose(w, [-1, 1])
    w, _ = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_allclose(w, [1, 2, 3])
    a = random_hermitian(6, rng)
    w, v = hermitian_eig(a)
    np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, a, atol=1e-9)
    norm = np.linalg.norm(a, 2)
    for i in range(6):
        assert np.linalg.norm(a @ v[:, i] - w[i] * v[:, i]) < 1e-9 * norm
    assert abs(w.sum() - np.trace(a).real) < 1e-9 * max(1, abs(np.trace(a)))
    assert np.all(np.diff(w) >= 0)


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_qr_unitary_factor_examples():
    np.testing.assert_allclose(qr_unitary_factor(np.eye(3)), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(qr_unitary_factor(2 * np.eye(3)), np.eye(3), atol=1e-15)


def test_qr_unitary_factor_positive_r(rng):
    for _ in range(100):
        n = int(rng.integers(2, 65))
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        q = qr_unitary_factor(g)
        assert is_unitary(q, 1e-10)
        r = q.conj().T @ g
        d = np.diag(r)
        assert np.all(d.real > 0) and np.max(np.abs(d.imag)) < 1e-10
        np.testing.assert_allclose(np.tril(r, -1), 0, atol=1e-10)


def test_qr_unitary_factor_rank_deficient():
    with pytest.raises(ValueError):
        qr_unitary_factor(np.array([[1.0, 2.0], [2.0, 4.0]]))
