"""Dense complex-matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  A Hermitian
matrix is one that went through :func:`hermitian` (validated, then stored as
``(M + M^H) / 2`` so that ``M == M^H`` holds bit for bit).
"""

import warnings

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from .errors import (
    DimensionError,
    NotHermitianError,
    NumericalError,
    SingularMatrixError,
    StabilityError,
)

HERMITIAN_TOL = 1e-12
PD_TOL = 1e-12
RCOND_MIN = 1e-13
STAB_MARGIN = 1e-8
# Largest order solved by explicit Kronecker vectorization.
KRON_MAX_ORDER = 16

__all__ = [
    "as_matrix",
    "hermitian",
    "symmetrize",
    "ctranspose",
    "conjugate",
    "spectral_radius",
    "min_eigenvalue",
    "is_positive_definite",
    "operator_two_norm",
    "rcond",
    "solve_linear",
    "stein_apply",
    "conjugate_stein_apply",
    "solve_stein",
    "solve_conjugate_stein",
]


def as_matrix(M, name="matrix"):
    """Return `M` as a finite 2-D complex128 array."""
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NumericalError(f"{name} has non-finite entries")
    return M


def symmetrize(M):
    return 0.5 * (M + M.conj().T)


def hermitian(M, tol=HERMITIAN_TOL, name="matrix"):
    """Validate `M` as Hermitian and return its symmetrized form.

    Inputs with ``||M - M^H|| > tol * max(1, ||M||)`` are rejected rather
    than silently symmetrized.
    """
    M = as_matrix(M, name)
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    skew = operator_two_norm(M - M.conj().T)
    if skew > tol * max(1.0, operator_two_norm(M)):
        raise NotHermitianError(f"{name} is not Hermitian (||M - M^H|| = {skew:.3e})")
    return symmetrize(M)


def ctranspose(M):
    return M.conj().T


def conjugate(M):
    """Entrywise complex conjugate."""
    return np.conj(M)


def _require_square(M, name="matrix"):
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")


def spectral_radius(M):
    M = np.asarray(M)
    _require_square(M)
    if M.shape[0] == 0:
        return 0.0
    try:
        ev = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue solver failed: {exc}") from exc
    return float(np.max(np.abs(ev)))


def min_eigenvalue(M):
    """Smallest eigenvalue of a Hermitian matrix (``inf`` for an empty one)."""
    if M.shape[0] == 0:
        return float("inf")
    return float(np.linalg.eigvalsh(M)[0])


def is_positive_definite(M, tol=PD_TOL):
    """True iff ``lambda_min(M) > tol * max(1, ||M||_2)``."""
    if M.shape[0] == 0:
        return True
    ev = np.linalg.eigvalsh(M)
    scale = max(1.0, float(np.max(np.abs(ev))))
    return bool(ev[0] > tol * scale)


def operator_two_norm(M):
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    if M.shape == (1, 1):
        return float(abs(M[0, 0]))
    return float(np.linalg.norm(M, 2))


def _lu(M):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(M, check_finite=False)
    anorm = np.linalg.norm(M, 1)
    if anorm == 0.0:
        return lu, piv, 0.0
    rc, info = lapack.zgecon(lu, anorm, norm="1")
    return lu, piv, float(rc)


def rcond(M):
    """Reciprocal 1-norm condition estimate from a pivoted LU factorization."""
    M = as_matrix(M)
    _require_square(M)
    if M.shape[0] == 0:
        return 1.0
    return _lu(M)[2]


def solve_linear(M, RHS, rcond_min=RCOND_MIN):
    """Solve ``M Z = RHS`` by pivoted LU.

    Raises
    ------
    SingularMatrixError
        If the reciprocal condition estimate of `M` is below `rcond_min`.
    """
    M = np.asarray(M, dtype=np.complex128)
    RHS = np.asarray(RHS, dtype=np.complex128)
    _require_square(M)
    if RHS.shape[0] != M.shape[0]:
        raise DimensionError(f"RHS has {RHS.shape[0]} rows, matrix has order {M.shape[0]}")
    if M.shape[0] == 0:
        return np.zeros(RHS.shape, dtype=np.complex128)
    lu, piv, rc = _lu(M)
    if not rc >= rcond_min:
        raise SingularMatrixError(f"matrix is singular to working precision (rcond = {rc:.3e})", rc)
    return sla.lu_solve((lu, piv), RHS, check_finite=False)


def stein_apply(C, X):
    """``S_C(X) = X - C^H X C``."""
    return X - C.conj().T @ X @ C


def conjugate_stein_apply(A, X):
    """``C_A(X) = X - A^H conj(X) A``."""
    return X - A.conj().T @ X.conj() @ A


def _check_stable(C, stab_margin, what):
    rho = spectral_radius(C)
    if rho >= 1.0 - stab_margin:
        raise StabilityError(f"{what} has spectral radius {rho:.6g} >= 1 - {stab_margin:g}", rho)
    return rho


def solve_stein(C, Q, stab_margin=STAB_MARGIN):
    """Solve the Stein equation ``X - C^H X C = Q`` for Hermitian `Q`.

    Orders up to ``KRON_MAX_ORDER`` are solved through the ``n^2 x n^2``
    Kronecker system; larger ones go through scipy's discrete Lyapunov
    solver followed by one step of residual correction.
    """
    C = as_matrix(C, "C")
    Q = as_matrix(Q, "Q")
    _require_square(C, "C")
    n = C.shape[0]
    if Q.shape != (n, n):
        raise DimensionError(f"Q has shape {Q.shape}, expected {(n, n)}")
    _check_stable(C, stab_margin, "C")
    if n <= KRON_MAX_ORDER:
        K = np.eye(n * n, dtype=np.complex128) - np.kron(C.T, C.conj().T)
        try:
            vec = solve_linear(K, Q.reshape(-1, order="F"))
        except SingularMatrixError as exc:
            raise NumericalError(f"Kronecker Stein system is singular: {exc}") from exc
        X = vec.reshape(n, n, order="F")
    else:
        Ch = C.conj().T
        X = sla.solve_discrete_lyapunov(Ch, Q, method="bilinear")
        X = X + sla.solve_discrete_lyapunov(Ch, Q - stein_apply(C, X), method="bilinear")
    return symmetrize(X)


def solve_conjugate_stein(A, Q, stab_margin=STAB_MARGIN):
    """Solve ``X - A^H conj(X) A = Q``.

    Substituting the conjugated equation back in gives the standard Stein
    equation ``X - (conj(A) A)^H X (conj(A) A) = Q + A^H conj(Q) A``.
    """
    A = as_matrix(A, "A")
    Q = as_matrix(Q, "Q")
    _require_square(A, "A")
    C = A.conj() @ A
    _check_stable(C, stab_margin, "conj(A) A")
    return solve_stein(C, Q + A.conj().T @ Q.conj() @ A, stab_margin)
