"""Exception hierarchy shared by all secrecap modules."""


class SecrecapError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(SecrecapError):
    """Matrix arguments have inconsistent or invalid dimensions."""


class ValidationError(SecrecapError):
    """A scenario file or scenario value failed validation.

    ``line`` is set when the failure can be attributed to an input line.
    """

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class NotPositiveDefiniteError(SecrecapError):
    """Cholesky pivot failure; ``pivot_index`` names the failing pivot."""

    def __init__(self, message, pivot_index=None):
        super().__init__(message)
        self.pivot_index = pivot_index


class NotPsdError(SecrecapError):
    """Matrix is not positive semidefinite; carries the offending eigenvalue."""

    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class NumericalError(SecrecapError):
    """An iterative kernel failed to converge; carries its final residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConstraintViolationError(SecrecapError):
    """A covariance left the feasible order interval; ``side`` says which bound."""

    def __init__(self, message, side=None):
        super().__init__(message)
        self.side = side


class UnsupportedDimensionError(SecrecapError):
    """The requested operation does not support this problem size."""
