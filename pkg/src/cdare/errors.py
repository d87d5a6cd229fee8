"""Exception hierarchy shared by every module of the package."""


class CdareError(Exception):
    """Base class for all errors raised by :mod:`cdare`."""


class DimensionError(CdareError, ValueError):
    pass


class NotHermitianError(CdareError, ValueError):
    pass


class NumericalError(CdareError, ArithmeticError):
    pass


class SingularMatrixError(NumericalError):
    """Raised when a linear system is singular to working precision.

    The reciprocal condition estimate is kept on ``rcond``.
    """

    def __init__(self, message, rcond=0.0):
        super().__init__(message)
        self.rcond = rcond


class StabilityError(CdareError, ValueError):
    """A spectral-radius precondition (rho < 1) does not hold."""

    def __init__(self, message, rho=float("nan")):
        super().__init__(message)
        self.rho = rho


class DomainError(CdareError, ValueError):
    """The argument lies outside the domain of a Riccati operator."""


class AssumptionError(CdareError, ValueError):
    """A standing assumption of the transformed equation is violated."""


class TransformError(CdareError, ValueError):
    pass


class FlowBreakdownError(NumericalError):
    """``I + G_k H_j`` became singular while advancing the flow."""

    def __init__(self, message, k=None, inner=None):
        super().__init__(message)
        self.k = k
        self.inner = inner


class NoSolutionError(CdareError, ValueError):
    """The scalar family has no real Hermitian solution for these parameters."""

    def __init__(self, message, h_m=float("nan"), h_M=float("nan")):
        super().__init__(message)
        self.h_m = h_m
        self.h_M = h_M


class ParameterError(CdareError, ValueError):
    pass
