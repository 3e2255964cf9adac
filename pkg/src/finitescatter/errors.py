"""Exception types shared across the package.

Domain violations (bad arguments, unsupported orders) derive from ValueError;
runtime numerical failures (divergent sums, degenerate flux directions,
unstable traces) derive from RuntimeError so callers can tell misuse apart
from a computation that legitimately cannot proceed.
"""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class OrderTooLargeError(DomainError):
    """Angular momentum order beyond the overflow-guarded range."""


class ConfigError(ValueError):
    """Scenario configuration failed to parse or validate."""


class SeriesDivergenceError(RuntimeError):
    """Partial-wave term magnitudes grow instead of decaying."""


class UndefinedAngleError(RuntimeError):
    """Scattered flux is too small to define a direction."""


class SingularObliquityError(RuntimeError):
    """Radial scattered flux vanishes; the obliquity factor is singular."""


class StepInstabilityError(RuntimeError):
    """Near-tangential flux encountered while tracing the wave front."""


class ConvergenceError(RuntimeError):
    """A numerical self-check failed (step too coarse, bad match point)."""
