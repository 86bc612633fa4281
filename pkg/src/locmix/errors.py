"""Exception types shared across the package."""


class InvalidDimensionError(ValueError):
    """A dimension argument is zero, negative, or inconsistent with its peers."""


class InvalidInputError(ValueError):
    """An input value (file, array, grid) is malformed or empty."""


class ZeroVectorError(ValueError):
    """A weight vector that must be nonzero is identically zero."""


class RegimeError(ValueError):
    """The (p, n, c) regime does not admit the requested operation."""


class UnsupportedMixingError(ValueError):
    """The mixing distribution is outside what the operation supports."""


class NotPositiveDefiniteError(ValueError):
    """A matrix that must be positive definite is not.

    Attributes
    ----------
    lambda_min : float
        Smallest eigenvalue found, for diagnostics.
    """

    def __init__(self, message: str, lambda_min: float):
        super().__init__(message)
        self.lambda_min = lambda_min


class AccuracyNotMetError(RuntimeError):
    """An adaptive routine exhausted its budget before reaching the target error.

    Attributes
    ----------
    achieved : float
        Error estimate actually achieved.
    """

    def __init__(self, message: str, achieved: float):
        super().__init__(message)
        self.achieved = achieved
