"""Exception hierarchy shared across the package."""


class LfsmError(Exception):
    """Base class for all package errors."""


class ParameterError(LfsmError, ValueError):
    """A parameter lies outside its admissible range."""


class InsufficientDataError(LfsmError):
    """The sample is too short for the requested increment order."""


class DegenerateIncrementsError(LfsmError):
    """An increment is exactly zero where a negative power is required.

    For genuine heavy-tailed data this is a probability-zero event; seeing
    it almost always means the input contains constant segments.
    """


class LogDomainError(LfsmError):
    """A characteristic-function value left (0, 1), so log(-log(.)) fails."""


class EstimationFailedError(LfsmError):
    """The estimator on the original sample did not produce a usable fit."""


class UnreliableRegionError(LfsmError):
    """Too many resampled fits failed to trust the confidence region."""


class ConfigurationError(LfsmError, ValueError):
    """Inconsistent run configuration (e.g. group count not dividing n)."""


class ResourceLimitError(LfsmError):
    """A simulation request exceeds the configured size cap."""
