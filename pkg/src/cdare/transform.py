"""Transformed standard DARE ``X = Ahat^H X (I + Ghat X)^{-1} Ahat + Hhat``.

Its operator equals two applications of the conjugate Riccati operator, and
it shares the maximal solution of the CDARE it was built from.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import AssumptionError, DomainError, SingularMatrixError, TransformError
from .hermitian import as_matrix, hermitian, operator_two_norm, solve_linear, symmetrize
from .model import eval_cache, r_x, riccati_apply

__all__ = [
    "DareProblem",
    "DareEvalCache",
    "transform",
    "ghat_from_blocks",
    "dare_apply",
    "dare_normalized_residual",
    "double_riccati_apply",
    "rhat_x_block",
    "rhat_x_schur_complement",
    "schur_identity_residual",
    "dare_eval_cache",
    "closed_loop_identity_residual",
]


@dataclass(frozen=True, eq=False)
class DareProblem:
    Ahat: np.ndarray
    Bhat: np.ndarray
    Rhat: np.ndarray
    Ghat: np.ndarray
    Hhat: np.ndarray

    @property
    def n(self):
        return self.Ahat.shape[0]

    @classmethod
    def from_arrays(cls, Ahat, Bhat, Rhat, Ghat, Hhat):
        Ahat = as_matrix(Ahat, "Ahat")
        n = Ahat.shape[0]
        Bhat = np.asarray(Bhat, dtype=np.complex128).reshape(n, -1)
        k = Bhat.shape[1]
        Rhat = np.asarray(Rhat, dtype=np.complex128).reshape(k, k)
        if k:
            Rhat = hermitian(Rhat, name="Rhat")
        return cls(Ahat, Bhat, Rhat, hermitian(Ghat, name="Ghat"), hermitian(Hhat, name="Hhat"))


@dataclass(frozen=True, eq=False)
class DareEvalCache:
    X: np.ndarray
    Rhat_X: np.ndarray
    Fhat_X: np.ndarray
    That_D_X: np.ndarray


def transform(P):
    """Build the transformed DARE of the CDARE `P`.

    Raises
    ------
    AssumptionError
        ``R_H = R + B^H conj(H) B`` is singular, i.e. ``det(R_H) != 0`` fails.
    TransformError
        ``I + G conj(H)`` is singular.
    """
    A, B, R, H, G = P.A, P.B, P.R, P.H, P.G
    n, m = P.n, P.m
    Ab, Hb = A.conj(), H.conj()
    RH = r_x(P, H)
    try:
        corr = solve_linear(RH, B.conj().T @ Hb @ A)
    except SingularMatrixError as exc:
        raise AssumptionError(
            f"assumption det(R_H) ≠ 0 violated: R + B^H conj(H) B is singular (rcond = {exc.rcond:.3e})"
        ) from exc
    Ahat = Ab @ A - Ab @ B @ corr
    Bhat = np.hstack([B.conj(), Ab @ B])
    Rhat = sla.block_diag(R.conj(), RH) if m else np.zeros((0, 0), np.complex128)
    try:
        K = np.eye(n) + G @ Hb
        Ghat = G.conj() + Ab @ solve_linear(K, G) @ Ab.conj().T
        Hhat = H + A.conj().T @ Hb @ solve_linear(K, A)
    except SingularMatrixError as exc:
        raise TransformError(f"I + G conj(H) is singular (rcond = {exc.rcond:.3e})") from exc
    return DareProblem(Ahat, Bhat, Rhat, symmetrize(Ghat), symmetrize(Hhat))


def ghat_from_blocks(D):
    """``Bhat Rhat^{-1} Bhat^H``, the block form of ``Ghat``."""
    if D.Bhat.shape[1] == 0:
        return np.zeros((D.n, D.n), np.complex128)
    return symmetrize(D.Bhat @ solve_linear(D.Rhat, D.Bhat.conj().T))


def _dare_raw(D, X):
    try:
        Z = solve_linear(np.eye(D.n) + D.Ghat @ X, D.Ahat)
    except SingularMatrixError as exc:
        raise DomainError("I + Ghat X is singular") from exc
    return D.Ahat.conj().T @ X @ Z + D.Hhat


def dare_apply(D, X):
    return symmetrize(_dare_raw(D, X))


def dare_normalized_residual(D, Z):
    """Normalized residual of `Z` for the transformed DARE in its quotient form."""
    RZ = D.Rhat + D.Bhat.conj().T @ Z @ D.Bhat
    ZA = Z @ D.Ahat
    BZA = D.Bhat.conj().T @ ZA
    try:
        quad = BZA.conj().T @ solve_linear(RZ, BZA)
    except SingularMatrixError as exc:
        raise DomainError("Rhat + Bhat^H Z Bhat is singular") from exc
    image = symmetrize(D.Ahat.conj().T @ ZA - quad + D.Hhat)
    den = (
        operator_two_norm(Z)
        + operator_two_norm(D.Ahat.conj().T @ ZA)
        + operator_two_norm(quad)
        + operator_two_norm(D.Hhat)
    )
    return operator_two_norm(Z - image) / den if den > 0.0 else 0.0


def double_riccati_apply(P, X):
    try:
        Y = riccati_apply(P, X)
    except DomainError as exc:
        raise DomainError(f"inner application failed: {exc}") from exc
    try:
        return riccati_apply(P, Y)
    except DomainError as exc:
        raise DomainError(f"outer application failed: {exc}") from exc


def rhat_x_block(P, X):
    """Assemble ``Rhat + Bhat^H X Bhat`` block by block from the CDARE data.

    The leading block is ``conj(R_X)``; the trailing one is
    ``R + B^H (conj(H) + conj(A)^H X conj(A)) B``.
    """
    A, B, R, H = P.A, P.B, P.R, P.H
    Ab, Bb = A.conj(), B.conj()
    X11 = r_x(P, X).conj()
    X12 = Bb.conj().T @ X @ Ab @ B
    X22 = R + B.conj().T @ (H.conj() + Ab.conj().T @ X @ Ab) @ B
    return symmetrize(np.block([[X11, X12], [X12.conj().T, X22]]))


def rhat_x_schur_complement(P, X):
    """Schur complement of the leading block of :func:`rhat_x_block`."""
    m = P.m
    M = rhat_x_block(P, X)
    return symmetrize(M[m:, m:] - M[m:, :m] @ solve_linear(M[:m, :m], M[:m, m:]))


def schur_identity_residual(P, X):
    """``||Rhat_X / conj(R_X) - R_{R(X)}||``.

    For every ``X`` in ``dom(R)`` the Schur complement equals
    ``R + B^H conj(R(X)) B``; at a solution of the CDARE this is ``R_X``.
    """
    S = rhat_x_schur_complement(P, X)
    return operator_two_norm(S - r_x(P, riccati_apply(P, X)))


def dare_eval_cache(D, X):
    Bh = D.Bhat.conj().T
    RX = symmetrize(D.Rhat + Bh @ X @ D.Bhat)
    try:
        F = solve_linear(RX, Bh @ X @ D.Ahat)
    except SingularMatrixError as exc:
        raise DomainError(f"Rhat_X is singular (rcond = {exc.rcond:.3e})") from exc
    return DareEvalCache(X=X, Rhat_X=RX, Fhat_X=F, That_D_X=D.Ahat - D.Bhat @ F)


def closed_loop_identity_residual(P, D, X):
    """``||That^D_X - conj(T_X) T_{R(X)}||``; zero for every ``X`` in ``dom(R)``."""
    TD = dare_eval_cache(D, X).That_D_X
    T = eval_cache(P, X).T_X
    T_next = eval_cache(P, riccati_apply(P, X)).T_X
    return operator_two_norm(TD - T.conj() @ T_next)
