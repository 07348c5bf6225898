import itertools

import numpy as np
import pytest

from idblock.gradients import grad_direction_dense
from idblock.haar import (
    grad_moments_mc, haar_gradients, identity_init_gradient, moment_tuples,
    sample_haar, sample_haar_batch, second_moment_analytic, second_moment_residual,
    second_moment_table, variance_closed_form,
)
from idblock.linalg import X, Y, Z, is_unitary

from conftest import random_hermitian


def test_sample_haar_unitary(rng):
    for N in (2, 3, 8, 17):
        assert is_unitary(sample_haar(N, rng), 1e-10)
    batch = sample_haar_batch(5, 50, rng)
    for u in batch:
        assert is_unitary(u, 1e-10)
    with pytest.raises(ValueError):
        sample_haar(1, rng)


def test_haar_first_moment():
    rng = np.random.default_rng(1)
    N = 4
    O = np.diag([1.0, 0, 0, 0])
    U = sample_haar_batch(N, 5000, rng)
    conj = U @ O @ U.conj().transpose(0, 2, 1)
    mean = conj.mean(axis=0)
    se = np.sqrt(conj.real.var(axis=0) + conj.imag.var(axis=0)) / np.sqrt(5000)
    target = np.trace(O) / N * np.eye(N)
    assert np.all(np.abs(mean - target) < 3 * se + 1e-15)
    u00 = np.abs(U[:, 0, 0]) ** 2
    assert abs(u00.mean() - 1 / N) < 3 * u00.std() / np.sqrt(5000)


def test_first_moment_small_dims():
    rng = np.random.default_rng(2)
    for N in (2, 4, 8):
        O = random_hermitian(N, rng)
        U = sample_haar_batch(N, 4000, rng)
        conj = U @ O @ U.conj().transpose(0, 2, 1)
        se = np.sqrt(conj.real.var(axis=0) + conj.imag.var(axis=0)) / np.sqrt(4000)
        err = np.abs(conj.mean(axis=0) - np.trace(O) / N * np.eye(N))
        assert np.max(err / np.maximum(se, 1e-12)) < 5


def test_haar_gradients_match_dense(rng):
    M, H = random_hermitian(4, rng), random_hermitian(4, rng)
    psi0 = np.eye(4)[0]
    U = sample_haar_batch(4, 10, rng)
    fast = haar_gradients(U, M, H, psi0)
    slow = [grad_direction_dense(u, M, H, psi0) for u in U]
    np.testing.assert_allclose(fast, slow, atol=1e-12)


def test_variance_closed_form_examples():
    # N = 2, M = X, H = Z, |0>: 2 * (1 - 0) / 3 * (2 - 0)
    assert variance_closed_form(X, Z) == pytest.approx(4 / 3, abs=1e-15)
    assert variance_closed_form(Z, Z) == 0.0
    assert variance_closed_form(X, np.eye(2)) == 0.0


def test_variance_closed_form_invariances(rng):
    M, H = random_hermitian(8, rng), random_hermitian(8, rng)
    v = variance_closed_form(M, H)
    assert variance_closed_form(M + 3.7 * np.eye(8), H) == pytest.approx(v, rel=1e-12)
    assert variance_closed_form(-2.5 * M, H) == pytest.approx(6.25 * v, rel=1e-12)


def test_grad_moments_zero_direction(rng):
    est = grad_moments_mc(4, np.eye(4), random_hermitian(4, rng), n_samples=200, rng=rng)
    assert est.mean == 0.0 and est.variance == 0.0


def test_grad_moments_mc_checks(rng):
    with pytest.raises(ValueError):
        grad_moments_mc(4, np.eye(4), np.eye(4), n_samples=10, rng=rng)
    with pytest.raises(ValueError):
        grad_moments_mc(4, np.eye(2), np.eye(4), rng=rng)


def test_grad_moments_n2_cross_check():
    est = grad_moments_mc(2, X, Z, n_samples=20000, rng=np.random.default_rng(3))
    assert abs(est.mean) < 3 * est.std_error_mean
    assert abs(est.variance - 4 / 3) < 3 * est.std_error_var


def test_grad_moments_schedule_independent():
    a = grad_moments_mc(4, X.repeat(2, 0).repeat(2, 1) / 2 + np.eye(4), np.diag([1., 2, 3, 4]),
                        n_samples=400, rng=np.random.default_rng(9))
    b = grad_moments_mc(4, X.repeat(2, 0).repeat(2, 1) / 2 + np.eye(4), np.diag([1., 2, 3, 4]),
                        n_samples=400, rng=np.random.default_rng(9))
    assert a == b


def test_identity_init_gradient_examples():
    assert identity_init_gradient(Z, Z) == 0.0
    assert identity_init_gradient(Z, Y) == 0.0
    plus = np.array([1, 1]) / np.sqrt(2)
    # [Z, Y] = -2iX, so i<+|-2iX|+> = 2
    assert identity_init_gradient(Z, Y, plus) == pytest.approx(2.0, abs=1e-14)
    assert grad_direction_dense(np.eye(2), Y, Z, plus) == pytest.approx(2.0, abs=1e-14)


def test_identity_init_gradient_matches_dense(rng):
    for _ in range(5):
        M, H = random_hermitian(4, rng), random_hermitian(4, rng)
        assert identity_init_gradient(H, M) == pytest.approx(
            grad_direction_dense(np.eye(4), M, H, np.eye(4)[0]), abs=1e-12)


def test_second_moment_analytic_values():
    N = 4
    # i1=i1', j1=j1', i2=i2', j2=j2' with distinct pairs
    assert second_moment_analytic(N, (0, 1, 2, 3, 0, 1, 2, 3)) == pytest.approx(1 / 15)
    assert second_moment_analytic(N, (0, 1, 2, 3, 1, 1, 2, 3)) == 0.0
    # E|U_00|^4 = 2 / (N (N + 1))
    assert second_moment_analytic(N, (0,) * 8) == pytest.approx(2 / (N * (N + 1)))


def test_second_moment_analytic_from_weingarten_integrals():
    # E|U_00|^2 |U_01|^2 = 1 / (N (N + 1)) for Haar U(N)
    N = 3
    assert second_moment_analytic(N, (0, 0, 0, 1, 0, 0, 0, 1)) == pytest.approx(1 / (N * (N + 1)))


def test_second_moment_tuples():
    assert len(moment_tuples(2)) == 2**8
    assert moment_tuples(4, np.random.default_rng(0)).shape == (200, 8)


def test_second_moment_small_sample_table():
    tab = second_moment_table(2, 4000, np.random.default_rng(4))
    assert np.all(tab.residual < 5 * tab.std_error)
    assert second_moment_residual(2, 4000, np.random.default_rng(4)) == pytest.approx(
        tab.residual.max())
    with pytest.raises(ValueError):
        second_moment_residual(3, 100)
