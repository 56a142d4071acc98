"""Tests for the transformation matrix, Ermakov invariant, and the
uncertainty Lagrangian/Hamiltonian machinery."""

import math

import numpy as np
import pytest

from wavepacket.core import (Constants, ConstantOmega, Free, InitialPacket,
                             ModulatedOmega, RampOmega, SystemSpec)
from wavepacket.errors import CapabilityError, ValidationError
from wavepacket.evolution import closed_form_lambda, solve_lambda
from wavepacket.invariants import (TransformMatrix, canonical_coordinates,
                                   det_as_ermakov, energy_partition,
                                   ermakov_invariant, frozen_width_matrix,
                                   invariant_uncertainty_product,
                                   matrix_from_classical, matrix_from_state,
                                   uncertainty_dynamics_residuals,
                                   uncertainty_hamiltonian)
from wavepacket.packet import Moments, moments_from_lambda

C = Constants()
FREE = SystemSpec(C, Free())
HO = SystemSpec(C, ConstantOmega(1.0))


def solve(system, packet, t_end=10.0, n=100, dt=1e-3):
    return solve_lambda(system, packet, np.linspace(0.0, t_end, n + 1), dt=dt)


def test_matrix_free_t1():
    s = closed_form_lambda(FREE, InitialPacket(0.0, 1.0, 1.0), 1.0)
    m = matrix_from_state(s, 1.0)
    assert m.entries() == ((1.0, -1.0), (0.0, 1.0))
    assert m.det == pytest.approx(1.0, abs=1e-15)


def test_matrix_ho_quarter_period_is_rotation():
    s = closed_form_lambda(HO, InitialPacket(0.0, 1.0, 1.0), math.pi / 2.0)
    m = matrix_from_state(s, 1.0)
    assert m.m11 == pytest.approx(0.0, abs=1e-15)
    assert m.m12 == pytest.approx(-1.0, abs=1e-15)
    assert m.m21 == pytest.approx(1.0, abs=1e-15)
    assert m.m22 == pytest.approx(0.0, abs=1e-15)


def test_matrix_t0():
    s = closed_form_lambda(FREE, InitialPacket(0.0, 1.0, 1.0), 0.0)
    assert matrix_from_state(s, 1.0).entries() == ((1.0, 0.0), (0.0, 1.0))
    s2 = closed_form_lambda(FREE, InitialPacket(0.0, 1.0, 2.0), 0.0)
    assert matrix_from_state(s2, 2.0).entries() == ((0.5, 0.0), (0.0, 2.0))


def test_frozen_width_determinants():
    assert frozen_width_matrix(FREE, 1.0, 1.0).det == pytest.approx(2.0, abs=1e-12)
    assert frozen_width_matrix(FREE, 1.0, 0.0).det == pytest.approx(1.0, abs=1e-15)
    assert frozen_width_matrix(FREE, 2.0, 4.0).det == pytest.approx(2.0, abs=1e-12)


def test_frozen_width_closed_form_determinant():
    for alpha0 in (1.0, 2.0):
        for t in (1.0, 4.0):
            m = frozen_width_matrix(FREE, alpha0, t)
            assert abs(m.det - (1.0 + (t / alpha0 ** 2) ** 2)) <= 1e-12


def test_frozen_width_requires_free_motion():
    with pytest.raises(CapabilityError):
        frozen_width_matrix(HO, 1.0, 1.0)


def test_ermakov_invariant_values():
    # t=0 data for the unit free packet
    assert ermakov_invariant(0.0, 1.0, 1.0, 0.0) == 0.5
    # t=1 data: eta=1, eta'=1, alpha=sqrt(2), alpha'=1/sqrt(2)
    val = ermakov_invariant(1.0, 1.0, math.sqrt(2.0), 1.0 / math.sqrt(2.0))
    assert val == pytest.approx(0.5, rel=1e-15)
    # packet at rest: no classical excitation
    assert ermakov_invariant(0.0, 0.0, 1.0, 0.0) == 0.0


def test_det_as_ermakov_values():
    assert det_as_ermakov(1.0, 1.0, math.sqrt(2.0), 1.0 / math.sqrt(2.0),
                          1.0, 1.0) == pytest.approx(1.0, rel=1e-15)
    # frozen-width data: alpha pinned at alpha0, eta = v0*t
    for alpha0, t in ((1.0, 1.0), (2.0, 4.0)):
        val = det_as_ermakov(t, 1.0, alpha0, 0.0, alpha0, 1.0)
        assert val == pytest.approx(1.0 + (t / alpha0 ** 2) ** 2, rel=1e-12)
    # rotation branch: constant width oscillator
    for t in (0.5, 2.0):
        eta, eta_dot = math.sin(t), math.cos(t)
        assert det_as_ermakov(eta, eta_dot, 1.0, 0.0, 1.0, 1.0) == \
            pytest.approx(1.0, rel=1e-12)


def test_det_as_ermakov_is_scaled_invariant():
    for eta, eta_dot, alpha, alpha_dot in ((0.3, 1.1, 1.4, -0.2), (2.0, 0.1, 0.5, 0.9)):
        lhs = det_as_ermakov(eta, eta_dot, alpha, alpha_dot, 1.3, 0.8)
        rhs = 2.0 * (1.0 / (1.3 * 0.8)) ** 2 * ermakov_invariant(
            eta, eta_dot, alpha, alpha_dot)
        assert lhs == pytest.approx(rhs, rel=1e-14)


def test_classical_matrix_matches_lambda_matrix():
    """For x0 = 0 releases, the (eta, alpha) matrix is the lambda matrix."""
    packet = InitialPacket(0.0, 1.0, 1.5)
    traj = solve(HO, packet, t_end=5.0, n=50)
    for s, cl in traj.samples:
        m_lam = matrix_from_state(s, packet.alpha0)
        m_cl = matrix_from_classical(cl.eta, cl.eta_dot, s.alpha, s.alpha_dot,
                                     packet.alpha0, packet.p0, C.mass, t=s.t)
        for a, b in zip(sum(m_lam.entries(), ()), sum(m_cl.entries(), ())):
            assert abs(a - b) <= 1e-9


@pytest.mark.parametrize("law, alpha0", [
    (Free(), 1.0), (ConstantOmega(1.0), 1.0), (ConstantOmega(1.0), 1.5),
    (ModulatedOmega(1.0, 0.2, 2.0), 1.0),
])
def test_det_constant_and_ermakov_drift(law, alpha0):
    packet = InitialPacket(0.0, 1.0, alpha0)
    traj = solve(SystemSpec(C, law), packet)
    i_l0 = None
    for s, cl in traj.samples:
        assert abs(matrix_from_state(s, alpha0).det - 1.0) <= 1e-9
        i_l = ermakov_invariant(cl.eta, cl.eta_dot, s.alpha, s.alpha_dot)
        if i_l0 is None:
            i_l0 = i_l
        assert abs(i_l - i_l0) <= 1e-8 * abs(i_l0)


def test_invariant_uncertainty_product_values():
    assert invariant_uncertainty_product(Moments(1.0, 0.5, 1.0), C) == \
        pytest.approx(0.25, rel=1e-14)
    assert invariant_uncertainty_product(Moments(0.5, 0.5, 0.0), C) == 0.25


def test_invariant_uncertainty_product_breathing_branch():
    packet = InitialPacket(0.0, 1.0, 1.7)  # oscillating width
    traj = solve(HO, packet)
    for s, _ in traj.samples:
        iup = invariant_uncertainty_product(moments_from_lambda(s, C), C)
        assert abs(iup - 0.25) <= 1e-10


def test_energy_partition_free():
    packet = InitialPacket(0.0, 1.0, 1.0)
    traj = solve(FREE, packet, t_end=1.0, n=10)
    for s, cl in traj.samples:
        e_cl, e_tilde = energy_partition(cl, s, FREE)
        assert e_cl == pytest.approx(0.5, abs=1e-12)
        assert e_tilde == pytest.approx(0.25, abs=1e-12)


def test_energy_partition_ho_ground_state():
    packet = InitialPacket(0.0, 0.0, 1.0)  # at rest, constant width
    traj = solve(HO, packet, t_end=2.0, n=20)
    for s, cl in traj.samples:
        e_cl, e_tilde = energy_partition(cl, s, HO)
        assert e_cl == pytest.approx(0.0, abs=1e-15)
        assert e_tilde == pytest.approx(0.5, abs=1e-12)  # hbar*omega/2


def test_energy_total_conserved_for_static_omega_only():
    packet = InitialPacket(0.0, 1.0, 1.5)
    traj = solve(HO, packet, t_end=5.0, n=50)
    totals = [sum(energy_partition(cl, s, HO)) for s, cl in traj.samples]
    assert max(abs(e - totals[0]) for e in totals) <= 1e-10

    ramp = SystemSpec(C, RampOmega(1.0, 0.25))
    traj = solve(ramp, packet, t_end=5.0, n=50)
    totals = [sum(energy_partition(cl, s, ramp)) for s, cl in traj.samples]
    assert max(abs(e - totals[0]) for e in totals) > 1e-3  # driven system


def test_p_phi_is_half_hbar():
    for law in (Free(), ConstantOmega(1.0), ModulatedOmega(1.0, 0.2, 2.0)):
        traj = solve(SystemSpec(C, law), InitialPacket(0.0, 1.0, 1.3), t_end=5.0, n=50)
        for s, _ in traj.samples:
            assert abs(canonical_coordinates(s, C).p_phi - 0.5) <= 1e-10


def test_euler_lagrange_residuals_at_integrator_resolution():
    dt = 1e-3
    t_grid = [k * dt for k in range(1001)]
    traj = solve_lambda(FREE, InitialPacket(0.0, 1.0, 1.0), t_grid, dt=dt)
    for i in range(1, len(traj) - 1, 100):
        res_phi, res_alpha, p_phi = uncertainty_dynamics_residuals(traj, i)
        assert res_phi <= 1e-6
        assert res_alpha <= 1e-6
        assert p_phi == pytest.approx(0.5, abs=1e-10)


def test_uncertainty_product_identity():
    """U = p_phi^2 + (alpha*p_alpha)^2 equals <x~^2><p~^2>."""
    traj = solve(HO, InitialPacket(0.0, 1.0, 1.7), t_end=5.0, n=50)
    for s, _ in traj.samples:
        uc = canonical_coordinates(s, C)
        u = uc.p_phi ** 2 + (uc.alpha * uc.p_alpha) ** 2
        m = moments_from_lambda(s, C)
        assert abs(u - m.var_x * m.var_p) <= 1e-10


def test_uncertainty_hamiltonian_equals_fluctuation_energy():
    law = ModulatedOmega(1.0, 0.2, 2.0)
    system = SystemSpec(C, law)
    traj = solve(system, InitialPacket(0.0, 1.0, 1.3), t_end=5.0, n=50)
    for s, cl in traj.samples:
        w = law.omega(s.t)
        h_tilde = uncertainty_hamiltonian(canonical_coordinates(s, C), w, C)
        _, e_tilde = energy_partition(cl, s, system)
        assert abs(h_tilde - e_tilde) <= 1e-12


def test_small_omega_matrix_limit():
    """M for omega = 1e-6 converges to the canonical free-motion matrix."""
    packet = InitialPacket(0.0, 1.0, 1.0)
    tiny = SystemSpec(C, ConstantOmega(1e-6))
    s_tiny = closed_form_lambda(tiny, packet, 1.0)
    s_free = closed_form_lambda(FREE, packet, 1.0)
    m_tiny = matrix_from_state(s_tiny, 1.0)
    m_free = matrix_from_state(s_free, 1.0)
    for a, b in zip(sum(m_tiny.entries(), ()), sum(m_free.entries(), ())):
        assert abs(a - b) <= 1e-5


def test_canonical_matrix_rejects_wrong_determinant():
    with pytest.raises(ValidationError):
        TransformMatrix(1.0, 0.0, 0.0, 1.1, alpha0=1.0, t=0.0)
    # tagged non-canonical constructions are allowed
    m = TransformMatrix(1.0, 0.0, 0.0, 1.1, alpha0=1.0, t=0.0, canonical=False)
    assert m.det == pytest.approx(1.1)


def test_residuals_need_interior_uniform_samples():
    traj = solve(FREE, InitialPacket(0.0, 1.0, 1.0), t_end=1.0, n=10)
    with pytest.raises(ValidationError):
        uncertainty_dynamics_residuals(traj, 0)
    with pytest.raises(ValidationError):
        uncertainty_dynamics_residuals(traj, len(traj) - 1)
