"""Evolution of the complex width variable and the classical trajectory.

Both obey the same linear equation of motion,

    lambda'' + w(t)^2 lambda = 0,      eta'' + w(t)^2 eta = 0,

with lambda = u_hat + i*z_hat complex and eta real.  The initial conditions

    lambda(0) = alpha0,   lambda'(0) = i/alpha0,
    eta(0)    = x0,       eta'(0)    = p0/m,

pin the Wronskian z_hat'*u_hat - u_hat'*z_hat to exactly 1 and make the
t = 0 state the minimum-uncertainty packet.  The polar decomposition
lambda = alpha*exp(i*phi) gives the width alpha = |lambda| and a phase that
obeys phi' = 1/alpha^2; phi is integrated alongside the trajectory rather
than recovered from principal-value angles, so it stays continuous across
wraps.
"""

import math
from dataclasses import dataclass

from .core import InitialPacket, SystemSpec, ConstantOmega, Free, omega_squared_at
from .errors import CapabilityError, DivergenceError, ValidationError


@dataclass(frozen=True)
class LambdaState:
    """lambda, its derivative, and the polar quantities at one instant.

    phi is the continuously unwrapped phase; phi_dot is the dynamical phase
    velocity Im(lambda'*conj(lambda))/alpha^2, which equals 1/alpha^2 as long
    as the Wronskian stays at 1.
    """

    t: float
    lam: complex
    lam_dot: complex
    alpha: float
    alpha_dot: float
    phi: float
    phi_dot: float

    @property
    def u_hat(self):
        return self.lam.real

    @property
    def z_hat(self):
        return self.lam.imag

    @property
    def u_hat_dot(self):
        return self.lam_dot.real

    @property
    def z_hat_dot(self):
        return self.lam_dot.imag

    @property
    def wronskian(self):
        return self.z_hat_dot * self.u_hat - self.u_hat_dot * self.z_hat


@dataclass(frozen=True)
class ClassicalState:
    """Classical trajectory point (eta, eta_dot)."""

    t: float
    eta: float
    eta_dot: float


@dataclass(frozen=True)
class Trajectory:
    """Sampled joint evolution of (LambdaState, ClassicalState)."""

    system: SystemSpec
    packet: InitialPacket
    samples: tuple

    def __len__(self):
        return len(self.samples)

    def __getitem__(self, index):
        return self.samples[index]

    def times(self):
        return [s.t for s, _ in self.samples]

    def lambda_states(self):
        return [s for s, _ in self.samples]

    def classical_states(self):
        return [c for _, c in self.samples]


def _make_state(t, lam, lam_dot, phi):
    alpha = abs(lam)
    cross = lam_dot * lam.conjugate()
    alpha_dot = cross.real / alpha
    phi_dot = cross.imag / (alpha * alpha)
    return LambdaState(t=t, lam=lam, lam_dot=lam_dot,
                       alpha=alpha, alpha_dot=alpha_dot,
                       phi=phi, phi_dot=phi_dot)


def initial_state(packet: InitialPacket):
    """The t = 0 LambdaState implied by the normalization convention."""
    a0 = packet.alpha0
    return _make_state(0.0, complex(a0, 0.0), complex(0.0, 1.0 / a0), 0.0)


def _rhs(system, t, y):
    # y = (u, u', z, z', eta, eta', phi)
    w2 = omega_squared_at(system, t)
    u, ud, z, zd, e, ed, _ = y
    return (ud, -w2 * u, zd, -w2 * z, ed, -w2 * e, 1.0 / (u * u + z * z))


def _rk4_step(system, t, y, h):
    k1 = _rhs(system, t, y)
    y2 = tuple(yi + 0.5 * h * ki for yi, ki in zip(y, k1))
    k2 = _rhs(system, t + 0.5 * h, y2)
    y3 = tuple(yi + 0.5 * h * ki for yi, ki in zip(y, k2))
    k3 = _rhs(system, t + 0.5 * h, y3)
    y4 = tuple(yi + h * ki for yi, ki in zip(y, k3))
    k4 = _rhs(system, t + h, y4)
    return tuple(
        yi + (h / 6.0) * (a + 2.0 * (b + c) + d)
        for yi, a, b, c, d in zip(y, k1, k2, k3, k4)
    )


def solve_lambda(system: SystemSpec, packet: InitialPacket, t_grid, dt=1e-3) -> Trajectory:
    """Integrate lambda, eta and phi over t_grid with classic fixed-step RK4.

    t_grid must start at 0 and increase strictly.  Each sample interval is
    covered by uniform substeps of size <= dt, so sample times are hit
    exactly.  Raises DivergenceError if the state goes non-finite.
    """
    t_grid = [float(t) for t in t_grid]
    if not t_grid or t_grid[0] != 0.0:
        raise ValidationError("t_grid must start at 0")
    if any(t1 >= t2 for t1, t2 in zip(t_grid, t_grid[1:])):
        raise ValidationError("t_grid must be strictly increasing")
    if dt <= 0.0:
        raise ValidationError("dt must be positive")

    m = system.constants.mass
    a0 = packet.alpha0
    y = (a0, 0.0, 0.0, 1.0 / a0, packet.x0, packet.p0 / m, 0.0)

    samples = [(initial_state(packet),
                ClassicalState(t=0.0, eta=packet.x0, eta_dot=packet.p0 / m))]
    t = 0.0
    for t_next in t_grid[1:]:
        span = t_next - t
        n_sub = max(1, math.ceil(span / dt - 1e-12))
        h = span / n_sub
        for k in range(n_sub):
            y = _rk4_step(system, t + k * h, y, h)
        t = t_next
        if not all(math.isfinite(v) for v in y):
            raise DivergenceError(t)
        u, ud, z, zd, e, ed, phi = y
        samples.append((_make_state(t, complex(u, z), complex(ud, zd), phi),
                        ClassicalState(t=t, eta=e, eta_dot=ed)))
    return Trajectory(system=system, packet=packet, samples=tuple(samples))


# ---------------------------------------------------------------------------
# Closed forms (free motion and constant frequency only)
# ---------------------------------------------------------------------------

def _closed_form_basis(system, t):
    """Fundamental solutions (C, S) with C(0)=1, C'(0)=0, S(0)=0, S'(0)=1."""
    law = system.frequency_law
    if isinstance(law, Free) or (isinstance(law, ConstantOmega) and law.omega0 == 0.0):
        return 1.0, 0.0, t, 1.0
    if isinstance(law, ConstantOmega):
        w = law.omega0
        return math.cos(w * t), -w * math.sin(w * t), math.sin(w * t) / w, math.cos(w * t)
    raise CapabilityError(
        f"no closed form for frequency law {type(law).__name__}"
    )


def _closed_form_phi(system, packet, t):
    """Unwrapped phase of lambda(t) for the closed-form laws.

    Free motion never wraps; for constant w the phase gains exactly pi per
    half period, and within each half period lambda stays in one half plane,
    so the principal angle can be re-based on k*pi.
    """
    a0 = packet.alpha0
    law = system.frequency_law
    if isinstance(law, ConstantOmega) and law.omega0 > 0.0:
        w = law.omega0
        k = math.floor(w * t / math.pi)
        r = w * t - k * math.pi
        return k * math.pi + math.atan2(math.sin(r) / (a0 * w), a0 * math.cos(r))
    return math.atan(t / (a0 * a0))


def closed_form_lambda(system: SystemSpec, packet: InitialPacket, t: float) -> LambdaState:
    """Exact lambda(t) for Free or ConstantOmega systems.

    lambda = alpha0*cos(wt) + i*sin(wt)/(alpha0*w) for w > 0, and
    alpha0 + i*t/alpha0 for free motion.
    """
    C, Cd, S, Sd = _closed_form_basis(system, t)
    a0 = packet.alpha0
    lam = complex(a0 * C, S / a0)
    lam_dot = complex(a0 * Cd, Sd / a0)
    phi = _closed_form_phi(system, packet, t)
    state = _make_state(t, lam, lam_dot, 0.0)
    return LambdaState(t=t, lam=lam, lam_dot=lam_dot, alpha=state.alpha,
                       alpha_dot=state.alpha_dot, phi=phi, phi_dot=state.phi_dot)


def closed_form_classical(system: SystemSpec, packet: InitialPacket, t: float) -> ClassicalState:
    """Exact classical trajectory for Free or ConstantOmega systems."""
    C, Cd, S, Sd = _closed_form_basis(system, t)
    m = system.constants.mass
    v0 = packet.p0 / m
    return ClassicalState(t=t, eta=C * packet.x0 + S * v0,
                          eta_dot=Cd * packet.x0 + Sd * v0)


def closed_form_trajectory(system: SystemSpec, packet: InitialPacket, t_grid) -> Trajectory:
    """Trajectory built from the closed forms on the given grid."""
    samples = tuple(
        (closed_form_lambda(system, packet, float(t)),
         closed_form_classical(system, packet, float(t)))
        for t in t_grid
    )
    return Trajectory(system=system, packet=packet, samples=samples)


def ermakov_residual(state: LambdaState, omega: float) -> float:
    """|alpha'' + w^2*alpha - 1/alpha^3| with alpha'' evaluated from lambda.

    lambda'' = -w^2*lambda along solutions, so
    alpha'' = (|lambda'|^2 + Re(lambda''*conj(lambda)))/alpha - alpha'^2/alpha.
    Vanishes identically on true solutions of the equation of motion.
    """
    lam, lam_dot = state.lam, state.lam_dot
    alpha, alpha_dot = state.alpha, state.alpha_dot
    lam_ddot = -(omega * omega) * lam
    speed2 = (lam_dot * lam_dot.conjugate()).real
    alpha_ddot = (speed2 + (lam_ddot * lam.conjugate()).real) / alpha \
        - alpha_dot * alpha_dot / alpha
    return abs(alpha_ddot + omega * omega * alpha - 1.0 / alpha ** 3)
