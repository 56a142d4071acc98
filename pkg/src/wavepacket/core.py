"""Physical constants, system specification, and shared value types.

Natural units hbar = mass = 1 are the defaults; both can be overridden.
A system is a one-dimensional quadratic Hamiltonian H = p^2/2m + m w(t)^2 x^2 / 2,
fixed entirely by the constants and the frequency law w(t) (w = 0 for free
motion).  Initial states are minimum-uncertainty Gaussians parametrized by
their mean position x0, mean momentum p0 and the dimensionless width
parameter alpha0, with alpha0^2 = 2 m <x~^2>_0 / hbar.
"""

import math
from dataclasses import dataclass, field
from typing import Union

from .errors import ValidationError


def _require_finite(name, value):
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class Constants:
    """hbar and particle mass, both strictly positive."""

    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass"):
            value = getattr(self, name)
            _require_finite(name, value)
            if value <= 0.0:
                raise ValidationError(f"{name} must be positive, got {value!r}")


# ---------------------------------------------------------------------------
# Frequency laws
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Free:
    """Free motion, w(t) = 0."""

    def omega(self, t):
        return 0.0


@dataclass(frozen=True)
class ConstantOmega:
    """Harmonic oscillator with constant frequency w >= 0."""

    omega0: float

    def __post_init__(self):
        _require_finite("omega0", self.omega0)
        if self.omega0 < 0.0:
            raise ValidationError(f"omega0 must be >= 0, got {self.omega0!r}")

    def omega(self, t):
        return self.omega0


@dataclass(frozen=True)
class RampOmega:
    """Linearly ramped frequency w(t) = omega0 + slope * t."""

    omega0: float
    slope: float

    def __post_init__(self):
        _require_finite("omega0", self.omega0)
        _require_finite("slope", self.slope)

    def omega(self, t):
        return self.omega0 + self.slope * t


@dataclass(frozen=True)
class ModulatedOmega:
    """Periodically modulated frequency w(t) = omega0 * (1 + epsilon*cos(gamma*t))."""

    omega0: float
    epsilon: float
    gamma: float

    def __post_init__(self):
        for name in ("omega0", "epsilon", "gamma"):
            _require_finite(name, getattr(self, name))

    def omega(self, t):
        return self.omega0 * (1.0 + self.epsilon * math.cos(self.gamma * t))


@dataclass(frozen=True)
class TabulatedOmega:
    """Piecewise-linear w(t) through the given (t, w) pairs.

    Times must be strictly increasing and evaluation outside the table
    range is an error (no extrapolation).
    """

    times: tuple = field(default=())
    omegas: tuple = field(default=())

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        omegas = tuple(float(w) for w in self.omegas)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "omegas", omegas)
        if len(times) != len(omegas):
            raise ValidationError("times and omegas must have equal length")
        if len(times) < 2:
            raise ValidationError("tabulated law needs at least two points")
        for i, (t, w) in enumerate(zip(times, omegas)):
            _require_finite(f"times[{i}]", t)
            _require_finite(f"omegas[{i}]", w)
        if any(t1 >= t2 for t1, t2 in zip(times, times[1:])):
            raise ValidationError("tabulated times must be strictly increasing")

    def omega(self, t):
        times, omegas = self.times, self.omegas
        if t < times[0] or t > times[-1]:
            raise ValidationError(
                f"t={t!r} outside tabulated range [{times[0]}, {times[-1]}]"
            )
        # linear interpolation; bisect would be overkill for the table sizes used
        for i in range(len(times) - 1):
            if t <= times[i + 1]:
                span = times[i + 1] - times[i]
                frac = (t - times[i]) / span
                return omegas[i] + frac * (omegas[i + 1] - omegas[i])
        return omegas[-1]  # pragma: no cover


FrequencyLaw = Union[Free, ConstantOmega, RampOmega, ModulatedOmega, TabulatedOmega]


@dataclass(frozen=True)
class SystemSpec:
    """A quadratic Hamiltonian: constants plus the frequency law w(t)."""

    constants: Constants = field(default_factory=Constants)
    frequency_law: FrequencyLaw = field(default_factory=Free)


def omega_at(system: SystemSpec, t: float) -> float:
    """Evaluate w(t) for the system's frequency law.

    Tabulated laws interpolate linearly and reject t outside their range.
    """
    _require_finite("t", t)
    return system.frequency_law.omega(t)


def omega_squared_at(system: SystemSpec, t: float) -> float:
    """w(t)^2, the coefficient appearing in the equations of motion."""
    w = omega_at(system, t)
    return w * w


# ---------------------------------------------------------------------------
# Initial packet
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InitialPacket:
    """Minimum-uncertainty Gaussian packet at t = 0.

    alpha0 is dimensionless: alpha0^2 = 2 m <x~^2>_0 / hbar, so 1/alpha0
    plays the same role for the momentum spread.  Zero initial
    position-momentum correlation is implied.
    """

    x0: float = 0.0
    p0: float = 0.0
    alpha0: float = 1.0

    def __post_init__(self):
        _require_finite("x0", self.x0)
        _require_finite("p0", self.p0)
        _require_finite("alpha0", self.alpha0)
        if self.alpha0 <= 0.0:
            raise ValidationError(f"alpha0 must be positive, got {self.alpha0!r}")


def validate_packet(packet: InitialPacket, constants: Constants):
    """Return the initial second moments (<x~^2>_0, <p~^2>_0).

    <x~^2>_0 = hbar*alpha0^2/(2m) and <p~^2>_0 = hbar*m/(2*alpha0^2); their
    product is hbar^2/4 (minimum uncertainty) to machine precision.
    """
    hbar, m = constants.hbar, constants.mass
    a2 = packet.alpha0 * packet.alpha0
    var_x0 = hbar * a2 / (2.0 * m)
    var_p0 = hbar * m / (2.0 * a2)
    return var_x0, var_p0
