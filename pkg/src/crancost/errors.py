"""Exception types shared across the package."""


class CrancostError(Exception):
    """Base class for all package errors."""

    category = "internal"


class ParameterError(CrancostError, ValueError):
    """A numeric argument violates its domain (negative intensity, p outside [0,1], ...)."""

    category = "parameter"


class ConfigError(CrancostError, ValueError):
    """A configuration file failed to parse or violates a scenario invariant.

    ``key`` names the offending entry when known.
    """

    category = "config"

    def __init__(self, message: str, key: str | None = None):
        self.key = key
        if key is not None:
            message = f"config key '{key}': {message}"
        super().__init__(message)


class AssignmentError(CrancostError, RuntimeError):
    """Nearest-point assignment requested against an empty upper layer."""

    category = "assignment"


class QuadratureError(CrancostError, RuntimeError):
    """A numerical integral did not converge within the allowed subdivisions.

    ``achieved_error`` carries the error estimate reached before giving up.
    """

    category = "numerical"

    def __init__(self, message: str, achieved_error: float | None = None):
        self.achieved_error = achieved_error
        if achieved_error is not None:
            message = f"{message} (achieved error estimate {achieved_error:.3e})"
        super().__init__(message)


class SamplerDomainError(CrancostError, ValueError):
    """An SNR sampler produced values inconsistent with the MCS thresholds."""

    category = "sampler"


class EstimationError(CrancostError, RuntimeError):
    """A Monte Carlo estimate could not be formed (e.g. every realization discarded)."""

    category = "estimation"
