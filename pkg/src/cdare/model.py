"""The conjugate discrete-time algebraic Riccati equation

    X = A^H conj(X) A - A^H conj(X) B (R + B^H conj(X) B)^{-1} B^H conj(X) A + H

together with its feedback/closed-loop matrices, solution-set predicates and
the normalized residual used as stopping criterion.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError, SingularMatrixError
from .hermitian import (
    PD_TOL,
    RCOND_MIN,
    as_matrix,
    conjugate_stein_apply,
    hermitian,
    is_positive_definite,
    min_eigenvalue,
    operator_two_norm,
    rcond,
    solve_linear,
    spectral_radius,
    symmetrize,
)

__all__ = [
    "CdareProblem",
    "EvalCache",
    "r_x",
    "riccati_apply",
    "riccati_apply_compact",
    "eval_cache",
    "in_domain",
    "in_P",
    "in_T",
    "in_S_geq",
    "normalized_residual",
    "stein_identity_residual",
]


@dataclass(frozen=True, eq=False)
class CdareProblem:
    """Coefficients ``(A, B, R, H)`` of a CDARE; ``G = B R^{-1} B^H`` is cached.

    ``m = 0`` (no input) is allowed: pass ``B`` of shape ``(n, 0)`` and an
    empty ``R``.
    """

    A: np.ndarray
    B: np.ndarray
    R: np.ndarray
    H: np.ndarray
    G: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        n = A.shape[0]
        if A.shape != (n, n):
            raise DimensionError(f"A must be square, got {A.shape}")
        B = np.asarray(self.B, dtype=np.complex128)
        if B.ndim == 1:
            B = B.reshape(n, -1)
        if B.shape[0] != n:
            raise DimensionError(f"B has {B.shape[0]} rows, A has order {n}")
        m = B.shape[1]
        if m:
            B = as_matrix(B, "B")
        R = np.asarray(self.R, dtype=np.complex128).reshape(m, m)
        if m:
            R = hermitian(R, name="R")
            rc = rcond(R)
            if rc < RCOND_MIN:
                raise SingularMatrixError(f"R is singular (rcond = {rc:.3e})", rc)
        H = hermitian(self.H, name="H")
        if H.shape != (n, n):
            raise DimensionError(f"H has shape {H.shape}, expected {(n, n)}")
        G = symmetrize(B @ solve_linear(R, B.conj().T)) if m else np.zeros((n, n), np.complex128)
        for name, value in (("A", A), ("B", B), ("R", R), ("H", H), ("G", G)):
            object.__setattr__(self, name, value)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.B.shape[1]


@dataclass(frozen=True, eq=False)
class EvalCache:
    X: np.ndarray
    R_X: np.ndarray
    F_X: np.ndarray
    T_X: np.ndarray
    That_X: np.ndarray

    @property
    def rho_that(self):
        return spectral_radius(self.That_X)


def r_x(P, X):
    """``R_X = R + B^H conj(X) B``."""
    return symmetrize(P.R + P.B.conj().T @ X.conj() @ P.B)


def _feedback(P, X):
    # returns (R_X, conj(X) A, F_X = R_X^{-1} B^H conj(X) A)
    RX = r_x(P, X)
    XA = X.conj() @ P.A
    try:
        F = solve_linear(RX, P.B.conj().T @ XA)
    except SingularMatrixError as exc:
        raise DomainError(f"X is outside dom(R): det(R_X) ~ 0 (rcond = {exc.rcond:.3e})") from exc
    return RX, XA, F


def _riccati_raw(P, X, XA, F):
    # A^H conj(X) A - (B^H conj(X) A)^H R_X^{-1} B^H conj(X) A + H, unsymmetrized
    return P.A.conj().T @ XA - (P.B.conj().T @ XA).conj().T @ F + P.H


def riccati_apply(P, X):
    """Evaluate ``R(X)`` through the quotient form (needs only ``R_X`` nonsingular)."""
    _, XA, F = _feedback(P, X)
    return symmetrize(_riccati_raw(P, X, XA, F))


def riccati_apply_compact(P, X):
    """Evaluate ``A^H conj(X) (I + G conj(X))^{-1} A + H``."""
    Xb = X.conj()
    try:
        Z = solve_linear(np.eye(P.n) + P.G @ Xb, P.A)
    except SingularMatrixError as exc:
        raise DomainError("I + G conj(X) is singular") from exc
    return symmetrize(P.A.conj().T @ Xb @ Z + P.H)


def eval_cache(P, X):
    RX, _, F = _feedback(P, X)
    T = P.A - P.B @ F
    return EvalCache(X=X, R_X=RX, F_X=F, T_X=T, That_X=T.conj() @ T)


def in_domain(P, X):
    try:
        return rcond(r_x(P, X)) >= RCOND_MIN
    except Exception:
        return False


def in_P(P, X, tol=PD_TOL):
    return in_domain(P, X) and is_positive_definite(r_x(P, X), tol)


def in_T(P, X):
    if not in_domain(P, X):
        return False
    try:
        return eval_cache(P, X).rho_that < 1.0
    except Exception:
        return False


def in_S_geq(P, X, tol=1e-10):
    """Sufficient test for membership of the monotone starting set.

    ``X`` qualifies (with witness ``W = X``) when ``X`` is in the stabilizing
    set and ``X - R(X) >= 0`` up to ``tol * max(1, ||X||)``.
    """
    if not in_T(P, X):
        return False
    gap = min_eigenvalue(X - riccati_apply(P, X))
    return gap >= -tol * max(1.0, operator_two_norm(X))


def _nres_parts(P, Z, RZ, XA, F):
    num = operator_two_norm(Z - RZ)
    den = (
        operator_two_norm(Z)
        + operator_two_norm(P.A.conj().T @ XA)
        + operator_two_norm((P.B.conj().T @ XA).conj().T @ F)
        + operator_two_norm(P.H)
    )
    return num / den if den > 0.0 else 0.0


def normalized_residual(P, Z):
    """Normalized residual of a candidate solution `Z`.

    ``||Z - R(Z)||`` divided by ``||Z|| + ||A^H Zb A|| + ||A^H Zb B R_Z^{-1} B^H Zb A|| + ||H||``
    with ``Zb = conj(Z)``; all norms are spectral norms.  Returns 0 when the
    denominator vanishes.
    """
    _, XA, F = _feedback(P, Z)
    RZ = symmetrize(_riccati_raw(P, Z, XA, F))
    return _nres_parts(P, Z, RZ, XA, F)


def stein_identity_residual(P, X, F):
    """Residual of ``X - R(X) = C_{A_F}(X) - H_F + K_F(X)`` for any feedback `F`."""
    F = np.asarray(F, dtype=np.complex128).reshape(P.m, P.n)
    c = eval_cache(P, X)
    AF = P.A - P.B @ F
    HF = P.H + F.conj().T @ P.R @ F
    D = F - c.F_X
    KF = D.conj().T @ c.R_X @ D
    lhs = X - riccati_apply(P, X)
    rhs = conjugate_stein_apply(AF, X) - HF + KF
    return operator_two_norm(lhs - rhs)
