"""Seeded problem generators with analytic reference solutions.

The scalar family ``x = |a|^2 x / (1 + g x) + h`` (``g = |b|^2 / r0``) is
embedded in the (1,1) entry of an ``n x n`` CDARE whose remaining entries of
``H`` pass through unchanged, so the extremal solutions are known in closed
form.  Hermitian solutions of the scalar equation are real, hence the
oracles work over the reals and ``a``, ``b`` only enter through ``|a|``,
``|b|``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoSolutionError, ParameterError
from .model import CdareProblem
from .rng import SplitMix64

__all__ = [
    "ScalarFamilyParams",
    "ScalarOracle",
    "scalar_oracle",
    "params_for_rho",
    "make_example1",
    "make_example2",
    "random_problem",
]


@dataclass(frozen=True)
class ScalarFamilyParams:
    a: complex
    b: complex
    r0: float
    h: float

    def __post_init__(self):
        if not abs(self.a) > 0:
            raise ParameterError("|a| must be positive")
        if not self.r0 > 0:
            raise ParameterError("r0 must be positive")
        if not self.g > 0:
            raise ParameterError("g = |b|^2 / r0 must be positive")

    @property
    def g(self):
        return abs(self.b) ** 2 / self.r0

    @property
    def h_M(self):
        return -((1.0 - abs(self.a)) ** 2) / self.g

    @property
    def h_m(self):
        return -((1.0 + abs(self.a)) ** 2) / self.g


@dataclass(frozen=True)
class ScalarOracle:
    D: float
    h_M: float
    h_m: float
    x_M: float
    x_m: float
    rho_that: float


def scalar_oracle(p):
    """Closed-form extremal solutions of the scalar family.

    The two roots of ``g x^2 + c x - h = 0`` with ``c = 1 - |a|^2 - g h`` are
    formed without cancellation (the smaller-magnitude root comes from the
    product ``x_M x_m = -h / g``).  A discriminant within rounding level of
    zero is snapped to zero, so ``h = h_M`` gives the exact double root.
    """
    a2, g, h = abs(p.a) ** 2, p.g, p.h
    c = 1.0 - a2 - g * h
    D = c * c + 4.0 * g * h
    if abs(D) <= 1e-14 * (1.0 + a2 + g * abs(h)) ** 2:
        D = 0.0
    if D < 0.0:
        raise NoSolutionError(
            f"no real solution: h = {h!r} lies in the open window (h_m, h_M) = ({p.h_m!r}, {p.h_M!r})",
            p.h_m,
            p.h_M,
        )
    s = math.sqrt(D)
    if c > 0.0:
        x_m = (-c - s) / (2.0 * g)
        x_M = -h / (g * x_m)
    elif c < 0.0 or s > 0.0:
        x_M = (-c + s) / (2.0 * g)
        x_m = -h / (g * x_M) if x_M != 0.0 else (-c - s) / (2.0 * g)
    else:
        x_M = x_m = 0.0
    rho = a2 / (1.0 + g * x_M) ** 2
    return ScalarOracle(D=D, h_M=p.h_M, h_m=p.h_m, x_M=x_M, x_m=x_m, rho_that=rho)


def params_for_rho(a, b, r0, rho):
    """Family parameters whose maximal solution has ``rho(That_{X_M}) = rho``."""
    if not 0.0 < rho < 1.0:
        raise ParameterError("rho must lie in (0, 1)")
    g = abs(b) ** 2 / r0
    x = (abs(a) / math.sqrt(rho) - 1.0) / g
    h = x - abs(a) ** 2 * x / (1.0 + g * x)
    return ScalarFamilyParams(a=a, b=b, r0=r0, h=h)


def _family_H(n, h, rng):
    # (1,1) = h; first row ~ CN(0, 1/n); trailing block strictly diagonally
    # dominant with Gershgorin discs inside [0.1, 2].
    H = np.zeros((n, n), dtype=np.complex128)
    H[0, 0] = h
    scale = 1.0 / math.sqrt(n)
    for j in range(1, n):
        H[0, j] = scale * rng.complex_normal()
        H[j, 0] = H[0, j].conjugate()
    if n > 1:
        k = n - 1
        W = np.zeros((k, k), dtype=np.complex128)
        for i in range(k):
            for j in range(i + 1, k):
                W[i, j] = rng.complex_normal()
                W[j, i] = W[i, j].conjugate()
        rowsum = np.abs(W).sum(axis=1).max() if k > 1 else 0.0
        if rowsum > 0:
            W *= 0.45 / rowsum
        for i in range(k):
            W[i, i] = rng.uniform(0.55, 1.55)
        H[1:, 1:] = W
    return H


def _embedded(n, p, seed):
    if n < 1:
        raise ParameterError("n must be >= 1")
    rng = SplitMix64(seed)
    A = np.zeros((n, n), dtype=np.complex128)
    A[0, 0] = p.a
    B = np.zeros((n, 1), dtype=np.complex128)
    B[0, 0] = p.b
    H = _family_H(n, p.h, rng)
    return CdareProblem(A, B, np.array([[p.r0]]), H), H


def make_example1(n, p, seed=0):
    """Embedded scalar CDARE with ``h > h_M``.

    Returns the problem and its maximal solution, which is ``H`` with the
    (1,1) entry replaced by ``x_M``.
    """
    if not p.h > p.h_M:
        raise ParameterError(
            f"example1 needs h > h_M; got h = {p.h!r} with (h_m, h_M) = ({p.h_m!r}, {p.h_M!r})"
        )
    P, H = _embedded(n, p, seed)
    X = H.copy()
    X[0, 0] = scalar_oracle(p).x_M
    return P, X


def make_example2(n, a, b, r0, seed=0):
    """Critical case ``h = h_M``: the double root ``x_M = x_m = (|a| - 1) / g``."""
    g = abs(b) ** 2 / r0
    p = ScalarFamilyParams(a=a, b=b, r0=r0, h=-((1.0 - abs(a)) ** 2) / g)
    P, H = _embedded(n, p, seed)
    X = H.copy()
    X[0, 0] = (abs(a) - 1.0) / g
    return P, X


def random_problem(n, m, seed=0, regime="pd"):
    """Random dense CDARE.

    ``A`` is complex Gaussian rescaled to ``||A||_F^2 = 0.8`` when larger, so
    ``rho(conj(A) A) <= 0.8`` and the zero feedback yields a starting matrix.
    ``regime="pd"`` uses ``R = I`` and a positive semidefinite Gram ``H``;
    ``regime="indefinite"`` uses a diagonal ``R`` with at least one negative
    entry and an indefinite Hermitian ``H``.
    """
    if n < 1 or m < 1:
        raise ParameterError("n and m must be >= 1")
    if regime not in ("pd", "indefinite"):
        raise ParameterError(f"unknown regime {regime!r}")
    rng = SplitMix64(seed)

    def cmat(rows, cols):
        return np.array([[rng.complex_normal() for _ in range(cols)] for _ in range(rows)])

    A = cmat(n, n)
    fro2 = float(np.sum(A.real**2 + A.imag**2))
    if fro2 > 0.8:
        A *= math.sqrt(0.8 / fro2)
    B = cmat(n, m)
    W = cmat(n, n)
    if regime == "pd":
        R = np.eye(m)
        H = W.conj().T @ W / n
    else:
        d = [rng.uniform(0.5, 2.0) for _ in range(m)]
        signs = [-1.0] + [1.0 if rng.uniform() < 0.5 else -1.0 for _ in range(m - 1)]
        R = np.diag([s * v for s, v in zip(signs, d)])
        H = 0.5 * (W + W.conj().T)
    return CdareProblem(A, B, R, 0.5 * (H + H.conj().T))
