"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific class that applies.
"""


class CapabilityError(Exception):
    """An operation was asked for outside its supported domain
    (e.g. a closed form requested for a frequency law that has none)."""


class DeltaLimitError(CapabilityError):
    """A propagator kernel was evaluated at (or too close to) its caustic,
    where it degenerates into a delta function.  Callers should switch to
    the point-map representation instead of integrating the kernel."""


class DivergenceError(Exception):
    """The numerical state became non-finite during integration."""

    def __init__(self, t, message=None):
        self.t = t
        super().__init__(message or f"non-finite state at t={t!r}")


class ResolutionError(Exception):
    """A grid cannot resolve the position or momentum content of a state."""


class ValidationError(ValueError):
    """Input data violates a structural invariant (inconsistent moments,
    non-symplectic matrix, malformed grids, ...)."""


class GridMismatchError(ValidationError):
    """Two gridded states that must share a grid do not."""


class ConfigError(ValueError):
    """A scenario configuration could not be parsed or validated."""
