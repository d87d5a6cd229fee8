"""Fixed-point solvers for the maximal solution.

``fpi_solve`` iterates ``X_{k+1} = R(X_k)``; ``fpi_hat_solve`` steps by
``R(R(.))``; ``afpi_solve`` runs the accelerated iteration of order ``r`` on
the transformed DARE, whose k-th iterate equals ``r**k`` plain DARE steps.
"""

import enum
import logging
import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError, FlowBreakdownError, ParameterError, SingularMatrixError, StabilityError
from .hermitian import min_eigenvalue, operator_two_norm, solve_conjugate_stein, solve_linear, spectral_radius, symmetrize
from .model import _feedback, _nres_parts, _riccati_raw, eval_cache, in_S_geq, normalized_residual
from .transform import dare_eval_cache, dare_normalized_residual

log = logging.getLogger(__name__)

__all__ = [
    "Status",
    "SolverConfig",
    "IterateRecord",
    "SolveReport",
    "FlowTriple",
    "fpi_solve",
    "fpi_hat_solve",
    "flow_step",
    "flow_compose_r",
    "flow_recover",
    "afpi_solve",
    "make_initial",
]


class Status(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITERS = "max-iters"
    STAGNATED = "stagnated"
    DOMAIN_FAILURE = "domain-failure"
    FLOW_BREAKDOWN = "flow-breakdown"
    RECOVERY_FAILURE = "recovery-failure"


@dataclass(frozen=True)
class SolverConfig:
    nres_tol: float = 1e-15
    max_iters: int = 1000
    r: int = 2
    monotonicity_check: bool = True
    stagnation_window: int = 5
    mono_tol: float = 1e-10
    divergence_factor: float = 1e12

    def __post_init__(self):
        if not self.nres_tol > 0:
            raise ParameterError("nres_tol must be positive")
        if self.max_iters < 1:
            raise ParameterError("max_iters must be >= 1")
        if int(self.r) != self.r or self.r < 2:
            raise ParameterError("acceleration order r must be an integer >= 2")
        if self.stagnation_window < 1:
            raise ParameterError("stagnation_window must be >= 1")


class IterateRecord(NamedTuple):
    k: int
    nres: float
    rho_that: float
    min_eig_step_diff: float
    elapsed_s: float


@dataclass(frozen=True)
class SolveReport:
    method: str
    status: Status
    solution: np.ndarray
    iterates: tuple
    wall_time: float
    message: str = ""
    failed_at: object = None
    monotonicity_violations: tuple = field(default_factory=tuple)

    @property
    def converged(self):
        return self.status is Status.CONVERGED

    @property
    def iterations(self):
        return self.iterates[-1].k if self.iterates else 0

    @property
    def final_nres(self):
        return self.iterates[-1].nres if self.iterates else float("nan")


class FlowTriple(NamedTuple):
    A: np.ndarray
    G: np.ndarray
    H: np.ndarray


class _Tracker:
    """Per-iterate bookkeeping shared by all solvers: diagnostics and stopping."""

    def __init__(self, cfg, X0, check_monotone):
        self.cfg = cfg
        self.t0 = time.perf_counter()
        self.records = []
        self.violations = []
        self.prev = None
        self.best = np.inf
        self.stall = 0
        self.check_monotone = check_monotone
        self.blowup = cfg.divergence_factor * (1.0 + operator_two_norm(X0))

    def observe(self, k, X, nres, rho):
        cfg = self.cfg
        step = float("nan")
        if self.prev is not None:
            step = min_eigenvalue(self.prev - X)
            if self.check_monotone and step < -cfg.mono_tol * max(1.0, operator_two_norm(self.prev)):
                log.warning("monotonicity violated at k=%d: lambda_min(X_{k-1} - X_k) = %.3e", k, step)
                self.violations.append(k)
        self.records.append(IterateRecord(k, nres, rho, step, time.perf_counter() - self.t0))
        self.prev = X
        log.debug("k=%d nres=%.3e rho=%.6g", k, nres, rho)

        if nres <= cfg.nres_tol:
            return Status.CONVERGED, ""
        if operator_two_norm(X) > self.blowup:
            return Status.DOMAIN_FAILURE, f"iterate norm exceeded {self.blowup:.3e} at k={k}"
        if nres < 0.99 * self.best:
            self.best, self.stall = nres, 0
        else:
            self.stall += 1
            if self.stall >= cfg.stagnation_window:
                return Status.STAGNATED, f"no 1% improvement over {cfg.stagnation_window} checks"
        if k >= cfg.max_iters:
            return Status.MAX_ITERS, ""
        return None, ""

    def report(self, method, status, X, message="", failed_at=None):
        return SolveReport(
            method=method,
            status=status,
            solution=X,
            iterates=tuple(self.records),
            wall_time=time.perf_counter() - self.t0,
            message=message,
            failed_at=failed_at,
            monotonicity_violations=tuple(self.violations),
        )


def _wants_monotone(P, X0, cfg):
    return cfg.monotonicity_check and P is not None and in_S_geq(P, X0)


def _probe(P, X):
    # One Riccati evaluation giving R(X), NRes(X) and rho(That_X).
    _, XA, F = _feedback(P, X)
    RX = symmetrize(_riccati_raw(P, X, XA, F))
    nres = _nres_parts(P, X, RX, XA, F)
    T = P.A - P.B @ F
    return RX, nres, spectral_radius(T.conj() @ T)


def fpi_solve(P, X0, cfg=SolverConfig()):
    """Plain fixed-point iteration ``X_{k+1} = R(X_k)``.

    Leaving ``dom(R)`` ends the run with status ``domain-failure`` rather than
    raising; ``failed_at`` holds the offending index.
    """
    X = symmetrize(np.asarray(X0, dtype=np.complex128))
    tr = _Tracker(cfg, X, _wants_monotone(P, X, cfg))
    k = 0
    while True:
        try:
            nxt, nres, rho = _probe(P, X)
        except DomainError as exc:
            return tr.report("fpi", Status.DOMAIN_FAILURE, X, str(exc), k)
        status, msg = tr.observe(k, X, nres, rho)
        if status is not None:
            return tr.report("fpi", status, X, msg)
        X = nxt
        k += 1


def fpi_hat_solve(P, Y0, cfg=SolverConfig()):
    """Fixed-point iteration on ``R(R(.))``; ``Y_k`` equals ``X_{2k}`` of :func:`fpi_solve`."""
    Y = symmetrize(np.asarray(Y0, dtype=np.complex128))
    tr = _Tracker(cfg, Y, _wants_monotone(P, Y, cfg))
    k = 0
    while True:
        try:
            half, nres, rho = _probe(P, Y)
        except DomainError as exc:
            return tr.report("fpi-hat", Status.DOMAIN_FAILURE, Y, str(exc), k)
        status, msg = tr.observe(k, Y, nres, rho)
        if status is not None:
            return tr.report("fpi-hat", status, Y, msg)
        try:
            Y = _probe(P, half)[0]
        except DomainError as exc:
            return tr.report("fpi-hat", Status.DOMAIN_FAILURE, Y, f"outer application failed: {exc}", k + 1)
        k += 1


def flow_step(Xk, X0, k=None):
    """Binary flow operator ``F(Xk, X0)``.

    With ``Delta = (I + G_k H_0)^{-1}`` the result is
    ``(A_0 Delta A_k, G_0 + A_0 Delta G_k A_0^H, H_k + A_k^H H_0 Delta A_k)``.
    """
    n = Xk.A.shape[0]
    try:
        # Delta @ [A_k, G_k] with one factorization
        W = solve_linear(np.eye(n) + Xk.G @ X0.H, np.hstack([Xk.A, Xk.G]))
    except SingularMatrixError as exc:
        raise FlowBreakdownError(f"I + G_k H_0 is singular (k={k})", k=k) from exc
    DA, DG = W[:, :n], W[:, n:]
    A = X0.A @ DA
    G = X0.G + X0.A @ DG @ X0.A.conj().T
    H = Xk.H + Xk.A.conj().T @ X0.H @ DA
    return FlowTriple(A, symmetrize(G), symmetrize(H))


def flow_compose_r(X, r):
    """r-fold composition: ``F_1(X) = X`` and ``F_{l+1}(X) = F(X, F_l(X))``."""
    if r < 1:
        raise ParameterError("r must be >= 1")
    out = X
    for ell in range(1, r):
        try:
            out = flow_step(X, out)
        except FlowBreakdownError as exc:
            raise FlowBreakdownError(f"flow breakdown at inner index l={ell}", inner=ell) from exc
    return out


def flow_recover(X, Y0):
    """``H + A^H Y0 (I + G Y0)^{-1} A``: the DARE iterate encoded by a flow triple."""
    n = Y0.shape[0]
    return symmetrize(X.A.conj().T @ Y0 @ solve_linear(np.eye(n) + X.G @ Y0, X.A) + X.H)


def afpi_solve(D, Y0, cfg=SolverConfig(), problem=None):
    """Accelerated fixed-point iteration AFPI(r) on the transformed DARE `D`.

    Parameters
    ----------
    D : DareProblem
    Y0 : ndarray
        Hermitian starting matrix.
    cfg : SolverConfig
        ``cfg.r`` is the acceleration order.
    problem : CdareProblem, optional
        When given, NRes and ``rho(That)`` are measured against this CDARE;
        otherwise against `D` itself.

    Returns
    -------
    SolveReport
        Iterate ``k`` equals ``r**k`` applications of the DARE operator to `Y0`.
    """
    r = int(cfg.r)
    n = D.n
    Y0 = symmetrize(np.asarray(Y0, dtype=np.complex128))
    I = np.eye(n)

    def measure(Y):
        if problem is not None:
            return normalized_residual(problem, Y), eval_cache(problem, Y).rho_that
        return dare_normalized_residual(D, Y), spectral_radius(dare_eval_cache(D, Y).That_D_X)

    tr = _Tracker(cfg, Y0, _wants_monotone(problem, Y0, cfg))
    bA, bG, bH = D.Ahat, D.Ghat, D.Hhat
    Y = Y0
    k = 0
    while True:
        try:
            nres, rho = measure(Y)
        except DomainError as exc:
            return tr.report("afpi", Status.DOMAIN_FAILURE, Y, str(exc), k)
        status, msg = tr.observe(k, Y, nres, rho)
        if status is not None:
            return tr.report("afpi", status, Y, msg)

        Al, Gl, Hl = bA, bG, bH
        # l = 1 .. r-2 build the inner triples, l = r-1 produces the next bold triple
        for ell in range(1, r):
            try:
                W = solve_linear(I + bG @ Hl, np.hstack([bA, bG]))
            except SingularMatrixError:
                return tr.report(
                    "afpi", Status.FLOW_BREAKDOWN, Y, f"I + G_k H_k^(l) singular at k={k}, l={ell}", (k, ell)
                )
            DA, DG = W[:, :n], W[:, n:]
            Al, Gl, Hl = Al @ DA, symmetrize(Gl + Al @ DG @ Al.conj().T), symmetrize(bH + bA.conj().T @ Hl @ DA)
        bA, bG, bH = Al, Gl, Hl

        try:
            Y = symmetrize(bA.conj().T @ Y0 @ solve_linear(I + bG @ Y0, bA) + bH)
        except SingularMatrixError:
            return tr.report("afpi", Status.RECOVERY_FAILURE, Y, f"I + G_{k + 1} Y_0 singular", k + 1)
        k += 1


def make_initial(P, F=None, shift=0.0, fallback=None):
    """Starting matrix in the monotone set, by a conjugate Stein solve.

    Returns ``X0`` with ``X0 - A_F^H conj(X0) A_F = H + F^H R F + shift * I``
    where ``A_F = A - B F``.  `F` defaults to zero; when ``conj(A_F) A_F`` is
    not stable and `fallback` is given, the fallback feedback is tried next.

    Raises
    ------
    StabilityError
        No candidate feedback makes ``conj(A_F) A_F`` stable.
    """
    if shift < 0:
        raise ParameterError("shift must be nonnegative")
    candidates = [np.zeros((P.m, P.n), np.complex128) if F is None else F]
    if fallback is not None:
        candidates.append(fallback)
    err = None
    for Fc in candidates:
        Fc = np.asarray(Fc, dtype=np.complex128).reshape(P.m, P.n)
        AF = P.A - P.B @ Fc
        Q = P.H + Fc.conj().T @ P.R @ Fc + shift * np.eye(P.n)
        try:
            return solve_conjugate_stein(AF, symmetrize(Q))
        except StabilityError as exc:
            err = exc
            log.info("feedback candidate rejected: %s", exc)
    raise StabilityError(
        f"conj(A - B F)(A - B F) is not stable for the given feedback ({err}); supply a stabilizing F",
        err.rho,
    )
