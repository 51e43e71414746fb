"""Exception and warning types shared across the package."""


class PeachSimError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(PeachSimError, ValueError):
    """A vector or matrix has dimensions incompatible with the model."""


class EmptyDimension(PeachSimError, ValueError):
    """A dimension that must be a positive integer is zero or negative."""


class InvalidCorrelation(PeachSimError, ValueError):
    """Correlation coefficient magnitude is not strictly below one."""


class PilotShapeMismatch(PeachSimError, ValueError):
    """Identity pilots require the pilot length to equal the transmit-antenna count."""


class NotPositiveSemiDefinite(PeachSimError, ValueError):
    """A covariance-role matrix is not Hermitian positive semi-definite."""


class NotPositiveDefinite(PeachSimError, ValueError):
    """A matrix that must be Hermitian positive definite is not."""


class SingularCovariance(PeachSimError, ValueError):
    """The observation covariance cannot be solved against."""


class RankDeficientPilot(PeachSimError, ValueError):
    """The pilot-weighted Gram matrix is singular, so no unbiased estimate exists."""


class UnsupportedPilot(PeachSimError, ValueError):
    """The operation requires a scaled-identity pilot matrix."""


class IllConditionedWeights(PeachSimError, ValueError):
    """The weight system is singular even after regularization."""


class InvalidRegularization(PeachSimError, ValueError):
    """The regularization factor must be strictly positive."""


class WindowSizeError(PeachSimError, ValueError):
    """Warmup sample count does not match the sliding-window length."""


class InsufficientSamples(PeachSimError, ValueError):
    """Too few samples to form the requested covariance estimate."""


class SingularLimit(PeachSimError, ValueError):
    """The high-power limit matrix is singular, so the floor is undefined."""


class UnsupportedEstimator(PeachSimError, ValueError):
    """Unknown estimator kind."""


class ZeroTraceError(PeachSimError, ValueError):
    """Normalization by the channel energy requires a nonzero trace."""


class ConfigError(PeachSimError, ValueError):
    """An experiment configuration failed validation."""


class DivergentExpansionWarning(UserWarning):
    """Scaling factor violates the polynomial-expansion convergence bound."""


class IllConditionedWeightsWarning(UserWarning):
    """Weight system was solved with Tikhonov regularization."""
