"""Configuration-space propagator kernels and their quadrature application.

Two families:

* the time-independent kernel of a symplectic matrix ((a, b), (c, d)),

      K(x, x') = (1/(2*pi*i*hbar*b))^(1/2)
                 * exp(-(i/(2*hbar*b)) * (a*x^2 - 2*x*x' + d*x'^2)),

  with hbar inserted so the kernel is unitary (the bare form quoted in the
  literature omits it);

* the time-dependent kernel parametrized by (z_hat, z_hat', u_hat, u_hat'),

      K(x, x', t, 0) = (m/(2*pi*i*hbar*alpha0*z_hat))^(1/2)
                       * exp((i*m/(2*hbar*z_hat))
                             * (z_hat'*x^2 - 2*x*(x'/alpha0) + u_hat*(x'/alpha0)^2)).

Both are singular where the quadratic-phase denominator (b or z_hat)
vanishes; there the kernel concentrates into a delta function and callers
must use the point map instead, which is signalled by DeltaLimitError.

The inverse time-dependent kernel is implemented as the adjoint
K_inv(x, x') = conj(K(x', x)), which is the exact functional inverse of the
unitary forward transform for every alpha0.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import Constants
from .errors import DeltaLimitError, ValidationError

DEFAULT_B_MIN = 1e-8
DEFAULT_Z_MIN = 1e-8


@dataclass(frozen=True)
class ComplexGrid:
    """Uniformly sampled complex function of position.

    warnings carries non-fatal quality flags (e.g. coverage of the
    probability mass) attached by the operations that produced the grid.
    """

    x_min: float
    dx: float
    values: np.ndarray
    warnings: tuple = ()

    def __post_init__(self):
        if self.dx <= 0.0:
            raise ValidationError(f"dx must be positive, got {self.dx!r}")
        values = np.asarray(self.values, dtype=complex)
        if not np.all(np.isfinite(values)):
            raise ValidationError("grid values must be finite")
        object.__setattr__(self, "values", values)

    @property
    def n(self):
        return len(self.values)

    def x(self):
        return self.x_min + self.dx * np.arange(self.n)

    def norm(self):
        """L2 norm via trapezoid quadrature."""
        return math.sqrt(float(np.trapezoid(np.abs(self.values) ** 2, dx=self.dx)))

    def with_warning(self, message):
        return ComplexGrid(self.x_min, self.dx, self.values,
                           self.warnings + (message,))


def trapezoid_weights(n, dx):
    w = np.full(n, dx)
    w[0] = w[-1] = 0.5 * dx
    return w


@dataclass(frozen=True)
class SymplecticParams:
    """Entries of a real 2x2 canonical transformation matrix.

    Construction does not hard-fail on det != 1 (diagnostic paths probe
    deliberately broken inputs); use require_symplectic() where unit
    determinant is a precondition.
    """

    a: float
    b: float
    c: float
    d: float

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def require_symplectic(self, tol=1e-12):
        if abs(self.det - 1.0) > tol:
            raise ValidationError(
                f"matrix is not symplectic: det={self.det!r} (tol {tol})"
            )

    def matmul(self, other):
        return SymplecticParams(
            a=self.a * other.a + self.b * other.c,
            b=self.a * other.b + self.b * other.d,
            c=self.c * other.a + self.d * other.c,
            d=self.c * other.b + self.d * other.d,
        )


@dataclass(frozen=True)
class TDKernelParams:
    """Time-dependent kernel data: (z_hat, z_hat_dot, u_hat, u_hat_dot, alpha0).

    The Wronskian z_hat_dot*u_hat - u_hat_dot*z_hat must equal 1; this is what
    makes the forward/inverse pair mutually inverse and the kernel unitary.
    direction selects which of the two the kernel evaluates.
    """

    z_hat: float
    z_hat_dot: float
    u_hat: float
    u_hat_dot: float
    alpha0: float
    direction: str = "forward"

    def __post_init__(self):
        if self.alpha0 <= 0.0:
            raise ValidationError(f"alpha0 must be positive, got {self.alpha0!r}")
        if self.direction not in ("forward", "inverse"):
            raise ValidationError(f"unknown direction {self.direction!r}")
        w = self.wronskian
        if abs(w - 1.0) > 1e-9:
            raise ValidationError(
                f"z_hat_dot*u_hat - u_hat_dot*z_hat = {w!r}, must be 1 within 1e-9"
            )

    @property
    def wronskian(self):
        return self.z_hat_dot * self.u_hat - self.u_hat_dot * self.z_hat

    @classmethod
    def from_lambda_state(cls, state, alpha0, direction="forward"):
        return cls(z_hat=state.z_hat, z_hat_dot=state.z_hat_dot,
                   u_hat=state.u_hat, u_hat_dot=state.u_hat_dot,
                   alpha0=alpha0, direction=direction)

    def reversed(self):
        other = "inverse" if self.direction == "forward" else "forward"
        return TDKernelParams(self.z_hat, self.z_hat_dot, self.u_hat,
                              self.u_hat_dot, self.alpha0, other)


# ---------------------------------------------------------------------------
# Time-independent kernel
# ---------------------------------------------------------------------------

def kernel_ti(params: SymplecticParams, x, x_prime, constants: Constants,
              b_min=DEFAULT_B_MIN):
    """Evaluate the symplectic-matrix kernel at (x, x').  Vectorizes over
    numpy array arguments.

    Raises DeltaLimitError for |b| <= b_min: in that limit the kernel is the
    delta-function point map x' = a*x and cannot be integrated numerically.
    """
    b = params.b
    if abs(b) <= b_min:
        raise DeltaLimitError(
            f"|b|={abs(b)!r} <= {b_min}: kernel is a delta function; "
            "apply the point map x' = a*x instead"
        )
    hbar = constants.hbar
    prefactor = cmath.sqrt(1.0 / (2.0j * math.pi * hbar * b))
    phase = (-1.0 / (2.0 * hbar * b)) * (
        params.a * np.asarray(x) ** 2
        - 2.0 * np.asarray(x) * np.asarray(x_prime)
        + params.d * np.asarray(x_prime) ** 2
    )
    return prefactor * np.exp(1j * phase)


def satisfies_kernel_odes(params: SymplecticParams, constants: Constants,
                          x_probe=None, xp_probe=None, step=1e-5):
    """Residuals of the two defining differential equations of the kernel,

        (a*x + b*(hbar/i)*d/dx) K = x' K,
        (c*x + d*(hbar/i)*d/dx) K = -(hbar/i) dK/dx',

    evaluated by central finite differences on a probe grid.  Returns the
    two maximum absolute residuals, normalized by the kernel magnitude.
    """
    if x_probe is None:
        x_probe = np.linspace(-1.0, 1.0, 5)
    if xp_probe is None:
        xp_probe = np.linspace(-1.0, 1.0, 5)
    x = np.asarray(x_probe, dtype=float)[:, None]
    xp = np.asarray(xp_probe, dtype=float)[None, :]
    hbar = constants.hbar
    h = step

    k0 = kernel_ti(params, x, xp, constants)
    dk_dx = (kernel_ti(params, x + h, xp, constants)
             - kernel_ti(params, x - h, xp, constants)) / (2.0 * h)
    dk_dxp = (kernel_ti(params, x, xp + h, constants)
              - kernel_ti(params, x, xp - h, constants)) / (2.0 * h)

    scale = np.abs(k0)
    res1 = np.abs(params.a * x * k0 + params.b * (hbar / 1j) * dk_dx - xp * k0)
    res2 = np.abs(params.c * x * k0 + params.d * (hbar / 1j) * dk_dx
                  + (hbar / 1j) * dk_dxp)
    return float(np.max(res1 / scale)), float(np.max(res2 / scale))


# ---------------------------------------------------------------------------
# Time-dependent kernel
# ---------------------------------------------------------------------------

def _kernel_td_forward(params, x, x_prime, constants):
    z, zd, u = params.z_hat, params.z_hat_dot, params.u_hat
    a0 = params.alpha0
    hbar, m = constants.hbar, constants.mass
    prefactor = cmath.sqrt(m / (2.0j * math.pi * hbar * a0 * z))
    xs = np.asarray(x_prime) / a0
    phase = (m / (2.0 * hbar * z)) * (
        zd * np.asarray(x) ** 2 - 2.0 * np.asarray(x) * xs + u * xs ** 2
    )
    return prefactor * np.exp(1j * phase)


def kernel_td(params: TDKernelParams, x, x_prime, constants: Constants,
              z_min=DEFAULT_Z_MIN):
    """Evaluate the time-dependent kernel at (x, x').

    forward: x is the evolved coordinate, x' the initial one (scaled by
    1/alpha0 inside, following the parametrization).  inverse: the adjoint,
    conj(K_forward(x', x)), which undoes the forward transform exactly.

    Raises DeltaLimitError for |z_hat| <= z_min (the t -> 0 caustic where
    the kernel turns into a delta function).
    """
    if abs(params.z_hat) <= z_min:
        raise DeltaLimitError(
            f"|z_hat|={abs(params.z_hat)!r} <= {z_min}: kernel is a delta "
            "function; apply the point map instead"
        )
    if params.direction == "forward":
        return _kernel_td_forward(params, x, x_prime, constants)
    return np.conjugate(_kernel_td_forward(params, x_prime, x, constants))


def ti_kernel_evaluator(params, constants, b_min=DEFAULT_B_MIN):
    """Closure (x, x') -> K for apply_kernel."""
    def evaluate(x, x_prime):
        return kernel_ti(params, x, x_prime, constants, b_min=b_min)
    return evaluate


def td_kernel_evaluator(params, constants, z_min=DEFAULT_Z_MIN):
    """Closure (x, x') -> K for apply_kernel."""
    def evaluate(x, x_prime):
        return kernel_td(params, x, x_prime, constants, z_min=z_min)
    return evaluate


def apply_kernel(kernel, psi_in: ComplexGrid, x_out, coverage_tol=1e-8) -> ComplexGrid:
    """psi_out(x) = integral K(x, x') psi_in(x') dx' by trapezoid quadrature.

    kernel is a vectorized callable (x_column, x_prime_row) -> matrix.  If
    the input grid holds less than 1 - coverage_tol of the probability mass
    the result is tagged with a coverage warning rather than rejected.
    """
    x_out = np.asarray(x_out, dtype=float)
    if x_out.ndim != 1 or len(x_out) < 2:
        raise ValidationError("x_out must be a 1-D grid with >= 2 points")
    dx_out = float(x_out[1] - x_out[0])
    if not np.allclose(np.diff(x_out), dx_out, rtol=0.0, atol=1e-12 * abs(dx_out)):
        raise ValidationError("x_out must be uniform")

    warnings = ()
    mass = psi_in.norm() ** 2
    if mass < 1.0 - coverage_tol:
        warnings = (f"input grid covers only {mass!r} of unit probability mass",)

    xp = psi_in.x()
    matrix = kernel(x_out[:, None], xp[None, :])
    weights = trapezoid_weights(psi_in.n, psi_in.dx)
    values = matrix @ (weights * psi_in.values)
    return ComplexGrid(x_min=float(x_out[0]), dx=dx_out, values=values,
                       warnings=psi_in.warnings + warnings)
