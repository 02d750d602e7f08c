"""Exception types shared across the library."""


class InvalidDimensionError(ValueError):
    """Group dimension outside the supported range (n >= 2)."""


class InvalidElementError(ValueError):
    """Matrix is not a valid algebra element (not Hermitian and traceless)."""


class DimensionCapError(ValueError):
    """Requested representation dimension exceeds the configured cap."""


class NotIrreducibleError(RuntimeError):
    """Collective quadratic operator is not proportional to the identity."""


class InvalidStateError(ValueError):
    """State vector or density matrix violates its defining constraints."""


class ConstraintError(ValueError):
    """Probe parameters violate an integer or occupation constraint."""


class SingularInformationError(RuntimeError):
    """Information matrix is numerically singular.

    Carries the numerical ``rank`` and ``condition_number`` so callers can
    report which directions are lost.
    """

    def __init__(self, message, rank=None, condition_number=None):
        super().__init__(message)
        self.rank = rank
        self.condition_number = condition_number


class SingularCovarianceError(SingularInformationError):
    """Generator covariance is singular: not every parameter is estimable."""


class OptimizationFailedError(RuntimeError):
    """No optimizer restart produced a usable candidate."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
