import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cdare.errors import DimensionError, NotHermitianError, SingularMatrixError, StabilityError
from cdare.hermitian import (
    conjugate,
    hermitian,
    is_positive_definite,
    operator_two_norm,
    solve_conjugate_stein,
    solve_linear,
    solve_stein,
    spectral_radius,
)

from conftest import rand_c, rand_herm


def test_conjugate_examples(rng):
    assert conjugate(np.array([[1 + 2j]]))[0, 0] == 1 - 2j
    M = rng.standard_normal((3, 4)).astype(complex)
    np.testing.assert_array_equal(conjugate(M), M)
    Z = rand_c(rng, 4, 4)
    np.testing.assert_array_equal(conjugate(conjugate(Z)), Z)
    np.testing.assert_array_equal(Z.conj().T.conj().T, Z)


def test_hermitian_constructor(rng):
    M = rand_herm(rng, 5)
    H = hermitian(M + 1e-15 * rand_c(rng, 5, 5))
    assert np.array_equal(H, H.conj().T)
    assert np.all(np.diag(H).imag == 0.0)
    with pytest.raises(NotHermitianError):
        hermitian(M + 1e-3 * rand_c(rng, 5, 5))
    with pytest.raises(DimensionError):
        hermitian(np.ones((2, 3)))


@pytest.mark.parametrize(
    "M, expected",
    [
        (np.eye(3), 1.0),
        (np.diag([0.5, -2.0]), 2.0),
        # companion matrix of z^2 - z - 1: largest root is the golden ratio
        (np.array([[1.0, 1.0], [1.0, 0.0]]), 1.6180339887498948482),
    ],
)
def test_spectral_radius(M, expected):
    assert spectral_radius(M) == pytest.approx(expected, rel=1e-14)


def test_spectral_radius_nonsquare():
    with pytest.raises(DimensionError):
        spectral_radius(np.ones((2, 3)))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), alpha=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_spectral_radius_homogeneous(seed, alpha):
    M = rand_c(np.random.default_rng(seed), 5, 5)
    assert spectral_radius(alpha * M) == pytest.approx(abs(alpha) * spectral_radius(M), rel=1e-12, abs=1e-300)


def test_positive_definite_examples():
    assert is_positive_definite(np.eye(4), 1e-12)
    assert not is_positive_definite(np.diag([1.0, 0.0]), 1e-12)
    assert is_positive_definite(np.diag([1e-9, 1.0]), 1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), eps=st.floats(1e-6, 10.0))
def test_positive_definite_monotone_in_shift(seed, eps):
    M = rand_herm(np.random.default_rng(seed), 4)
    if is_positive_definite(M):
        assert is_positive_definite(M + eps * np.eye(4))


def test_two_norm_examples():
    assert operator_two_norm(np.zeros((3, 3))) == 0.0
    assert operator_two_norm(np.diag([3.0, -4.0])) == pytest.approx(4.0)
    # nilpotent block: M^H M = diag(0, 4)
    assert operator_two_norm(np.array([[0.0, 2.0], [0.0, 0.0]])) == pytest.approx(2.0)


def test_solve_linear_examples(rng):
    B = rand_c(rng, 3, 2)
    np.testing.assert_allclose(solve_linear(np.eye(3), B), B)
    np.testing.assert_allclose(solve_linear(2 * np.eye(3), np.eye(3)), 0.5 * np.eye(3))
    np.testing.assert_allclose(solve_linear(np.array([[1.0, 1.0], [0.0, 1.0]]), np.array([[2.0], [1.0]])), [[1.0], [1.0]])


def test_solve_linear_singular_carries_rcond():
    with pytest.raises(SingularMatrixError) as info:
        solve_linear(np.array([[1.0, 2.0], [2.0, 4.0]]), np.ones((2, 1)))
    assert info.value.rcond < 1e-13
    with pytest.raises(DimensionError):
        solve_linear(np.eye(2), np.ones((3, 1)))


def stein_series(C, Q, terms=2000):
    X = np.zeros_like(Q, dtype=complex)
    Ck = np.eye(C.shape[0], dtype=complex)
    for _ in range(terms):
        X = X + Ck.conj().T @ Q @ Ck
        Ck = Ck @ C
    return X


def test_stein_examples(rng):
    Q = rand_herm(rng, 3)
    np.testing.assert_allclose(solve_stein(np.zeros((3, 3)), Q), Q, atol=1e-15)
    assert solve_stein([[0.5]], [[3.0]])[0, 0] == pytest.approx(4.0)
    X = solve_stein(np.diag([0.5, 0.2]), np.eye(2))
    np.testing.assert_allclose(X, np.diag([4 / 3, 25 / 24]), atol=1e-14)
    np.testing.assert_allclose(X, stein_series(np.diag([0.5, 0.2]), np.eye(2)), atol=1e-14)


def test_stein_rejects_unstable():
    with pytest.raises(StabilityError):
        solve_stein(np.diag([1.0, 0.2]), np.eye(2))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 8), rho=st.floats(0.05, 0.95))
def test_stein_residual(seed, n, rho):
    g = np.random.default_rng(seed)
    C = rand_c(g, n, n)
    C *= rho / spectral_radius(C)
    Q = rand_herm(g, n)
    X = solve_stein(C, Q)
    res = np.linalg.norm(X - C.conj().T @ X @ C - Q, 2)
    assert res <= 1e-10 * max(1.0, np.linalg.norm(Q, 2))


def test_stein_large_order_path(rng):
    n = 30
    C = rand_c(rng, n, n)
    C *= 0.9 / spectral_radius(C)
    Q = rand_herm(rng, n)
    X = solve_stein(C, Q)
    assert np.linalg.norm(X - C.conj().T @ X @ C - Q, 2) <= 1e-10 * max(1.0, np.linalg.norm(Q, 2))


def test_conjugate_stein_examples(rng):
    Q = rand_herm(rng, 3)
    np.testing.assert_allclose(solve_conjugate_stein(np.zeros((3, 3)), Q), Q, atol=1e-15)
    assert solve_conjugate_stein([[0.5]], [[3.0]])[0, 0] == pytest.approx(4.0)
    assert solve_conjugate_stein([[0.6]], [[1.0]])[0, 0] == pytest.approx(1.5625, rel=1e-14)
    with pytest.raises(StabilityError):
        solve_conjugate_stein([[1.2]], [[1.0]])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 8), rho=st.floats(0.05, 0.9))
def test_conjugate_stein_residual_and_series(seed, n, rho):
    g = np.random.default_rng(seed)
    A = rand_c(g, n, n)
    A *= np.sqrt(rho / spectral_radius(A.conj() @ A))
    Q = rand_herm(g, n)
    X = solve_conjugate_stein(A, Q)
    scale = max(1.0, np.linalg.norm(Q, 2))
    assert np.linalg.norm(X - A.conj().T @ X.conj() @ A - Q, 2) <= 1e-10 * scale
    S = stein_series(A.conj() @ A, Q + A.conj().T @ Q.conj() @ A, terms=400)
    assert np.linalg.norm(X - S, 2) <= 1e-8 * scale
