"""Exception types shared across the package."""


class PerovError(Exception):
    """Base class for failures of a fixed-point hypothesis or iteration."""


class NotConvergent(PerovError):
    """A matrix that should converge to zero has spectral radius >= 1."""

    def __init__(self, message, radius=None):
        super().__init__(message)
        self.radius = radius


class NotConvergentMatrix(NotConvergent):
    """A contraction certificate was rejected before iterating."""


class DimensionMismatch(ValueError):
    pass


class GridMismatch(ValueError):
    pass


class DomainError(ValueError):
    pass


class DegenerateSamples(ValueError):
    pass


class MaxIterationsExceeded(PerovError):
    """Iteration budget exhausted; ``result`` holds the best iterate found."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class DivergenceDetected(MaxIterationsExceeded):
    """Step norms grew by more than the allowed factor over a short window."""


class RegularityViolation(PerovError):
    """An iterate made some |A_i| fall below the regularity floor."""

    def __init__(self, message, minimum=None):
        super().__init__(message)
        self.minimum = minimum


class NoConvergence(PerovError):
    """Outer iteration failed for every damping factor tried."""

    def __init__(self, message, best_residual=None, result=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.result = result


class ConditionViolated(PerovError):
    pass


class RadiusExceeded(UserWarning):
    """An outer iterate left the working ball; reported, never fatal."""
