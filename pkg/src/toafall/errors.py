"""Exception types shared across the package."""


class DegenerateKinematicsError(ValueError):
    """The classical motion never reaches the detector (g = 0 and v0 = 0,
    or an operation that needs g > 0 was called with g = 0)."""


class NonFiniteEvaluationError(ArithmeticError):
    """An integrand returned NaN or infinity."""


class NotConvergedError(RuntimeError):
    """A quadrature-based quantity did not meet its error tolerance.

    Carries the best-effort result (when available) as ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class BracketFailureError(RuntimeError):
    """Root bracketing exhausted its expansion budget although a crossing is
    analytically guaranteed; indicates a pathological configuration."""


class InsufficientSamplesError(ValueError):
    """A statistic was requested from fewer samples than it needs."""


class InvalidForNonzeroV0Error(ValueError):
    """A dropped-particle formula (valid only for v0 = 0) was called with a
    nonzero initial velocity."""


class NearFieldWarning(UserWarning):
    """Detector closer than a few packet widths: the arrival-time density no
    longer integrates to ~1 on t > 0 and reported moments are conditional."""
