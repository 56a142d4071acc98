"""Gaussian wave-packet dynamics under at-most-quadratic Hamiltonians.

Three independent, cross-validating representations of the same dynamics:
analytic evolution of the complex width variable (Riccati/Ermakov picture),
explicit propagator kernels applied by quadrature, and Wigner phase-space
transport by the symplectic point map.  The split-operator grid propagator
serves as a brute-force oracle against all of them.
"""

from .core import (Constants, ConstantOmega, Free, InitialPacket, ModulatedOmega,
                   RampOmega, SystemSpec, TabulatedOmega, omega_at, validate_packet)
from .errors import (CapabilityError, ConfigError, DeltaLimitError, DivergenceError,
                     GridMismatchError, ResolutionError, ValidationError)
from .evolution import (ClassicalState, LambdaState, Trajectory, closed_form_classical,
                        closed_form_lambda, closed_form_trajectory, ermakov_residual,
                        initial_state, solve_lambda)
from .invariants import (TransformMatrix, UncertaintyCanonical, canonical_coordinates,
                         det_as_ermakov, energy_partition, ermakov_invariant,
                         frozen_width_matrix, invariant_uncertainty_product,
                         matrix_from_classical, matrix_from_state,
                         uncertainty_dynamics_residuals, uncertainty_hamiltonian)
from .kernels import (ComplexGrid, SymplecticParams, TDKernelParams, apply_kernel,
                      kernel_td, kernel_ti, satisfies_kernel_odes,
                      td_kernel_evaluator, ti_kernel_evaluator)
from .oracle import GridState, compare_states, quadrature_moments, split_step
from .packet import (GaussianPacket, Moments, classical_action, evaluate_wavefunction,
                     moments_from_lambda, propagate_analytic)
from .wigner import (PhaseSpaceGrid, ScaledPhasePoint, scaled_pointmap,
                     wigner_gaussian, wigner_numeric, wigner_pointmap)

__version__ = "0.1.0"
