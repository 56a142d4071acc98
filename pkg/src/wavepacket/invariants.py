"""Conserved quantities of the time-dependent transformation.

The 2x2 matrix M = ((zd, -z), (-ud, u)) built from lambda = u + i*z maps a
phase point at time t back to its scaled initial values; det M equals the
Wronskian zd*u - ud*z = 1 for every solution.  Written in terms of the
classical trajectory eta and the width alpha, the same determinant is
(m/(alpha0*p0))^2 * [(eta'*alpha - alpha'*eta)^2 + (eta/alpha)^2], i.e.
2*(m/(alpha0*p0))^2 times the Ermakov invariant.  The frozen-width variant
(alpha pinned at alpha0 for free motion) has determinant 1 + (t/alpha0^2)^2
instead, which is exactly the packet-spreading factor: suppressing the
width dynamics breaks canonicity.

The width dynamics itself derives from a Lagrangian in (alpha, phi); its
canonical momenta are p_alpha = (hbar/2)*alpha' and
p_phi = (hbar/2)*alpha^2*phi' = hbar/2, and the uncertainty product is
<x~^2><p~^2> = p_phi^2 + (alpha*p_alpha)^2.
"""

from dataclasses import dataclass

from .core import Constants, Free, ConstantOmega, SystemSpec, omega_at
from .evolution import ClassicalState, LambdaState, Trajectory
from .packet import Moments
from .errors import CapabilityError, ValidationError


@dataclass(frozen=True)
class TransformMatrix:
    """Rows ((zd, -z), (-ud, u)), plus the alpha0 that scales the column
    vectors it acts on.  canonical=False tags the frozen-width diagnostic,
    whose determinant deliberately differs from 1."""

    m11: float
    m12: float
    m21: float
    m22: float
    alpha0: float
    t: float
    canonical: bool = True

    def __post_init__(self):
        if self.alpha0 <= 0.0:
            raise ValidationError(f"alpha0 must be positive, got {self.alpha0!r}")
        if self.canonical and abs(self.det - 1.0) > 1e-9:
            raise ValidationError(
                f"canonical matrix must have det 1, got {self.det!r}"
            )

    @property
    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    def entries(self):
        return ((self.m11, self.m12), (self.m21, self.m22))


@dataclass(frozen=True)
class UncertaintyCanonical:
    """Canonical coordinates and momenta of the width dynamics."""

    alpha: float
    p_alpha: float
    phi: float
    p_phi: float


def matrix_from_state(state: LambdaState, alpha0: float) -> TransformMatrix:
    """M = ((zd, -z), (-ud, u)) from a LambdaState; det is asserted."""
    return TransformMatrix(
        m11=state.z_hat_dot, m12=-state.z_hat,
        m21=-state.u_hat_dot, m22=state.u_hat,
        alpha0=alpha0, t=state.t,
    )


def matrix_from_classical(eta, eta_dot, alpha, alpha_dot, alpha0, p0, mass=1.0,
                          t=0.0, canonical=True) -> TransformMatrix:
    """The matrix written via (eta, eta', alpha, alpha'):

        M = (m/(alpha0*p0)) * ((eta', -eta),
                               (-eta'*alpha'*alpha + eta*(alpha'^2 + 1/alpha^2),
                                eta'*alpha^2 - eta*alpha'*alpha)).

    Valid for trajectories released from eta(0) = 0 with p0 != 0, where
    z = (m/(alpha0*p0))*eta.
    """
    if p0 == 0.0:
        raise ValidationError("classical parametrization requires p0 != 0")
    s = mass / (alpha0 * p0)
    return TransformMatrix(
        m11=s * eta_dot,
        m12=-s * eta,
        m21=s * (-eta_dot * alpha_dot * alpha
                 + eta * (alpha_dot * alpha_dot + 1.0 / (alpha * alpha))),
        m22=s * (eta_dot * alpha * alpha - eta * alpha_dot * alpha),
        alpha0=alpha0, t=t, canonical=canonical,
    )


def frozen_width_matrix(system: SystemSpec, alpha0: float, t: float) -> TransformMatrix:
    """The would-be free-motion matrix with the width frozen at alpha0.

    det = 1 + (t/alpha0^2)^2, not 1; the matrix is tagged non-canonical and
    is rejected by the Wigner point map.
    """
    law = system.frequency_law
    if not (isinstance(law, Free)
            or (isinstance(law, ConstantOmega) and law.omega0 == 0.0)):
        raise CapabilityError("frozen-width matrix is defined for free motion only")
    a0 = alpha0
    return TransformMatrix(
        m11=1.0 / a0, m12=-t / a0,
        m21=t / a0 ** 3, m22=a0,
        alpha0=a0, t=t, canonical=False,
    )


def ermakov_invariant(eta, eta_dot, alpha, alpha_dot) -> float:
    """I_L = (1/2)*[(eta'*alpha - eta*alpha')^2 + (eta/alpha)^2]."""
    return 0.5 * ((eta_dot * alpha - eta * alpha_dot) ** 2 + (eta / alpha) ** 2)


def det_as_ermakov(eta, eta_dot, alpha, alpha_dot, alpha0, p0, mass=1.0) -> float:
    """The determinant of the classically parametrized matrix,

        (m/(alpha0*p0))^2 * [(eta'*alpha - alpha'*eta)^2 + (eta/alpha)^2],

    which is 2*(m/(alpha0*p0))^2 * I_L by construction."""
    if p0 == 0.0:
        raise ValidationError("classical parametrization requires p0 != 0")
    s = mass / (alpha0 * p0)
    return s * s * ((eta_dot * alpha - alpha_dot * eta) ** 2
                    + (eta / alpha) ** 2)


def invariant_uncertainty_product(moments: Moments, constants: Constants) -> float:
    """<x~^2><p~^2> - (1/4)<[x~,p~]_+>^2; equals hbar^2/4 at all times."""
    return moments.uncertainty_determinant()


def energy_partition(classical: ClassicalState, state: LambdaState,
                     system: SystemSpec):
    """(E_cl, E_tilde): the classical energy of the mean trajectory and the
    fluctuation energy

        E_tilde = (hbar/4)*(alpha'^2 + alpha^2*phi'^2 + w^2*alpha^2).

    Their sum is the mean of the Hamiltonian; it is conserved only for
    time-independent w.
    """
    c = system.constants
    w = omega_at(system, state.t)
    e_cl = 0.5 * c.mass * classical.eta_dot ** 2 \
        + 0.5 * c.mass * w * w * classical.eta ** 2
    a, ad, pd = state.alpha, state.alpha_dot, state.phi_dot
    e_tilde = 0.25 * c.hbar * (ad * ad + a * a * pd * pd + w * w * a * a)
    return e_cl, e_tilde


def canonical_coordinates(state: LambdaState, constants: Constants) -> UncertaintyCanonical:
    """(alpha, p_alpha, phi, p_phi) with p_alpha = (hbar/2)*alpha' and
    p_phi = (hbar/2)*alpha^2*phi'."""
    hbar = constants.hbar
    return UncertaintyCanonical(
        alpha=state.alpha,
        p_alpha=0.5 * hbar * state.alpha_dot,
        phi=state.phi,
        p_phi=0.5 * hbar * state.alpha * state.alpha * state.phi_dot,
    )


def uncertainty_hamiltonian(uc: UncertaintyCanonical, omega: float,
                            constants: Constants) -> float:
    """H~ = p_alpha^2/hbar + p_phi^2/(hbar*alpha^2) + (hbar/4)*w^2*alpha^2.

    Numerically equal to the fluctuation energy E_tilde.
    """
    hbar = constants.hbar
    return (uc.p_alpha ** 2 / hbar
            + uc.p_phi ** 2 / (hbar * uc.alpha ** 2)
            + 0.25 * hbar * omega * omega * uc.alpha ** 2)


def uncertainty_dynamics_residuals(traj: Trajectory, index: int):
    """Euler-Lagrange residuals of the width dynamics at an interior sample,
    by centered differences at the trajectory's own sample spacing:

        d/dt [(hbar/2)*alpha^2*phi'] = 0,
        alpha'' + w^2*alpha - phi'^2*alpha = 0.

    Returns (res_phi, res_alpha, p_phi).  Accuracy is O(h^2) in the local
    sample spacing h, which must be uniform around the index.
    """
    if not 0 < index < len(traj) - 1:
        raise ValidationError("index must be interior for centered differences")
    c = traj.system.constants
    prev, _ = traj[index - 1]
    here, _ = traj[index]
    nxt, _ = traj[index + 1]
    h1 = here.t - prev.t
    h2 = nxt.t - here.t
    if abs(h1 - h2) > 1e-12 * max(h1, h2):
        raise ValidationError("centered differences need uniform sample spacing")
    h = 0.5 * (h1 + h2)

    p_phi = canonical_coordinates(here, c).p_phi
    p_phi_prev = canonical_coordinates(prev, c).p_phi
    p_phi_next = canonical_coordinates(nxt, c).p_phi
    res_phi = abs((p_phi_next - p_phi_prev) / (2.0 * h))

    alpha_ddot = (nxt.alpha - 2.0 * here.alpha + prev.alpha) / (h * h)
    w = omega_at(traj.system, here.t)
    res_alpha = abs(alpha_ddot + w * w * here.alpha
                    - here.phi_dot ** 2 * here.alpha)
    return res_phi, res_alpha, p_phi
