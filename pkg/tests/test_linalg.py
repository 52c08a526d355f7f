import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adec import _core
from adec.errors import NotHermitian, RankDeficient
from adec.linalg import col_norm_sum, herm_eig, inf2_norm_lower_estimate, pinv, sigma_min_sq, spectral_norm


def random_hermitian(rng, k):
    Z = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    return (Z + Z.conj().T) / 2


def test_eig_identity():
    e = herm_eig(np.eye(2))
    assert np.allclose(e.eigenvalues, [1, 1])
    assert np.allclose(e.eigenvectors.conj().T @ e.eigenvectors, np.eye(2))


def test_eig_diagonal_is_sorted():
    e = herm_eig(np.diag([3.0, -1.0]))
    assert np.allclose(e.eigenvalues, [-1, 3])
    assert np.allclose(np.abs(e.eigenvectors), [[0, 1], [1, 0]])


def test_eig_swap_matrix():
    # characteristic polynomial lambda^2 - 1
    e = herm_eig([[0, 1], [1, 0]])
    assert np.allclose(e.eigenvalues, [-1, 1], atol=1e-14)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        herm_eig([[0, 1], [2, 0]])


@settings(max_examples=40, deadline=None)
@given(k=st.integers(1, 8), seed=st.integers(0, 10_000))
def test_eig_reconstructs(k, seed):
    M = random_hermitian(np.random.default_rng(seed), k)
    e = herm_eig(M)
    V = e.eigenvectors
    assert np.linalg.norm(e.reconstruct() - M) <= 1e-10 * max(1.0, np.linalg.norm(M))
    assert np.linalg.norm(V.conj().T @ V - np.eye(k)) <= 1e-10 * np.sqrt(k)
    assert np.all(np.diff(e.eigenvalues) >= 0)
    assert np.allclose(e.eigenvalues, np.linalg.eigvalsh(M), atol=1e-10)


def test_pinv_examples():
    assert np.allclose(pinv(np.eye(3)), np.eye(3))
    assert np.allclose(pinv(np.array([[1.0], [1.0]])), [[0.5, 0.5]])
    with pytest.raises(RankDeficient):
        pinv(np.zeros((2, 1)))


def test_pinv_is_left_inverse(rng):
    M = rng.standard_normal((9, 3)) + 1j * rng.standard_normal((9, 3))
    P = pinv(M)
    assert np.allclose(P @ M, np.eye(3), atol=1e-12)
    assert np.allclose(P, np.linalg.pinv(M), atol=1e-12)


def test_pinv_ill_conditioned_route():
    # condition number ~1e5 puts M*M at ~1e10, past the Cholesky switch
    M = np.diag([1.0, 1e-5]).astype(complex)
    assert np.allclose(pinv(M) @ M, np.eye(2), atol=1e-9)


def test_norms():
    assert spectral_norm(np.diag([3.0, 4.0])) == pytest.approx(4)
    assert sigma_min_sq(np.diag([3.0, 4.0])) == pytest.approx(9)
    U = np.array([[1, 1j], [1j, 1]]) / np.sqrt(2)
    assert spectral_norm(U) == pytest.approx(1)
    assert sigma_min_sq(U) == pytest.approx(1)
    assert spectral_norm([[1, 1], [0, 1]]) == pytest.approx((1 + np.sqrt(5)) / 2, abs=1e-12)


def test_col_norm_sum():
    assert col_norm_sum(np.eye(3)) == pytest.approx(3)
    assert col_norm_sum(np.zeros((2, 2))) == 0
    assert col_norm_sum([[1, 0], [1, 0]]) == pytest.approx(np.sqrt(2))


def test_inf2_estimate_is_dominated_by_col_norm_sum(rng):
    M = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
    assert inf2_norm_lower_estimate(M) <= col_norm_sum(M) + 1e-12


def test_jacobi_reports_non_convergence():
    M = random_hermitian(np.random.default_rng(0), 6)
    _, _, sweeps = _core.jacobi_eigh(np.ascontiguousarray(M), 1, 0.0)
    assert sweeps == -1
