"""Tests for the split-operator oracle and state comparison."""

import math

import numpy as np
import pytest

from wavepacket.core import (Constants, ConstantOmega, Free, InitialPacket,
                             RampOmega, SystemSpec)
from wavepacket.errors import GridMismatchError, ResolutionError, ValidationError
from wavepacket.evolution import solve_lambda
from wavepacket.kernels import ComplexGrid
from wavepacket.oracle import GridState, compare_states, quadrature_moments, split_step
from wavepacket.packet import evaluate_wavefunction, moments_from_lambda, \
    propagate_analytic

C = Constants()
FREE = SystemSpec(C, Free())
HO = SystemSpec(C, ConstantOmega(1.0))
X = np.linspace(-15.0, 15.0, 1024)


def analytic_states(system, packet, t):
    traj = solve_lambda(system, packet, [0.0, t] if t > 0 else [0.0])
    psi0 = evaluate_wavefunction(propagate_analytic(traj, 0), X)
    psi_t = evaluate_wavefunction(propagate_analytic(traj, len(traj) - 1), X)
    return traj, GridState(psi0, 0.0), GridState(psi_t, t)


def test_zero_steps_returns_input():
    _, s0, _ = analytic_states(FREE, InitialPacket(0.0, 1.0, 1.0), 0.0)
    assert split_step(s0, FREE, 1e-3, 0) is s0


def test_free_packet_matches_analytic():
    _, s0, ref = analytic_states(FREE, InitialPacket(0.0, 1.0, 1.0), 1.0)
    out = split_step(s0, FREE, 1e-3, 1000)
    _, aligned, _ = compare_states(out, ref)
    assert aligned <= 1e-6


def test_ho_ground_width_density_stationary():
    """|psi|^2 of the moving ground-width packet at rest stays put."""
    packet = InitialPacket(0.0, 0.0, 1.0)
    _, s0, _ = analytic_states(HO, packet, 0.0)
    density0 = np.abs(s0.grid.values) ** 2
    state = s0
    quarter = math.pi / 2.0
    steps = round(quarter / 1e-3)
    for _ in range(4):  # one full period in quarter hops
        state = split_step(state, HO, quarter / steps, steps)
        assert np.max(np.abs(np.abs(state.grid.values) ** 2 - density0)) <= 1e-7


def test_second_order_convergence():
    packet = InitialPacket(0.0, 1.0, 1.0)
    _, s0, ref = analytic_states(HO, packet, 1.0)
    errors = {}
    for dt in (4e-3, 2e-3):
        out = split_step(s0, HO, dt, round(1.0 / dt))
        _, aligned, _ = compare_states(out, ref)
        errors[dt] = aligned
    ratio = errors[4e-3] / errors[2e-3]
    assert 3.5 <= ratio <= 4.5


def test_norm_preserved():
    _, s0, _ = analytic_states(HO, InitialPacket(0.0, 1.0, 1.3), 0.0)
    out = split_step(s0, HO, 1e-3, 2000)
    assert abs(out.grid.norm() - 1.0) <= 1e-9


def test_compare_identical_states():
    _, s0, _ = analytic_states(FREE, InitialPacket(0.0, 1.0, 1.0), 0.0)
    l2, aligned, moments = compare_states(s0, s0)
    assert l2 == 0.0
    assert aligned == 0.0
    assert all(m == 0.0 for m in moments)


def test_compare_global_phase():
    _, s0, _ = analytic_states(FREE, InitialPacket(0.0, 1.0, 1.0), 0.0)
    rotated = GridState(ComplexGrid(s0.grid.x_min, s0.grid.dx,
                                    s0.grid.values * np.exp(0.7j)), 0.0)
    l2, aligned, _ = compare_states(s0, rotated)
    assert l2 > 0.1
    assert aligned <= 1e-12


def test_oracle_moments_match_analytic():
    packet = InitialPacket(0.0, 1.0, 1.0)
    traj, s0, ref = analytic_states(FREE, packet, 1.0)
    out = split_step(s0, FREE, 1e-3, 1000)
    _, _, moment_errors = compare_states(out, ref)
    assert all(err <= 1e-6 for err in moment_errors)

    # and the quadrature moments agree with the lambda-variable forms
    m = moments_from_lambda(traj[-1][0], C)
    mean_x, mean_p, var_x, var_p, corr = quadrature_moments(out.grid, C.hbar)
    assert mean_x == pytest.approx(1.0, abs=1e-6)
    assert mean_p == pytest.approx(1.0, abs=1e-6)
    assert var_x == pytest.approx(m.var_x, abs=1e-6)
    assert var_p == pytest.approx(m.var_p, abs=1e-6)
    assert corr == pytest.approx(m.corr, abs=1e-6)


@pytest.mark.parametrize("system, packet", [
    (FREE, InitialPacket(0.0, 1.0, 1.0)),
    (HO, InitialPacket(0.0, 1.0, 1.0)),
    (HO, InitialPacket(0.0, 1.0, 1.5)),
    (SystemSpec(C, RampOmega(1.0, 0.25)), InitialPacket(0.0, 1.0, 1.0)),
])
def test_oracle_moments_all_scenarios(system, packet):
    traj, s0, _ = analytic_states(system, packet, 2.0)
    out = split_step(s0, system, 1e-3, 2000)
    m = moments_from_lambda(traj[-1][0], C)
    _, _, var_x, var_p, corr = quadrature_moments(out.grid, C.hbar)
    assert abs(var_x - m.var_x) <= 1e-6
    assert abs(var_p - m.var_p) <= 1e-6
    assert abs(corr - m.corr) <= 1e-6


def test_nyquist_violation_raises():
    """A packet with momentum far beyond the grid resolution is rejected."""
    coarse = np.linspace(-15.0, 15.0, 64)
    traj = solve_lambda(FREE, InitialPacket(0.0, 6.0, 1.0), [0.0])
    psi = evaluate_wavefunction(propagate_analytic(traj, 0), coarse)
    values = psi.values / psi.norm()  # renormalize the coarse samples
    state = GridState(ComplexGrid(psi.x_min, psi.dx, values), 0.0)
    with pytest.raises(ResolutionError):
        split_step(state, FREE, 1e-3, 1)


def test_grid_mismatch_rejected():
    _, a, _ = analytic_states(FREE, InitialPacket(0.0, 1.0, 1.0), 0.0)
    other = np.linspace(-10.0, 10.0, 1024)
    traj = solve_lambda(FREE, InitialPacket(0.0, 1.0, 1.0), [0.0])
    b = GridState(evaluate_wavefunction(propagate_analytic(traj, 0), other), 0.0)
    with pytest.raises(GridMismatchError):
        compare_states(a, b)


def test_grid_state_requires_unit_norm():
    values = np.exp(-X ** 2).astype(complex)
    with pytest.raises(ValidationError):
        GridState(ComplexGrid(float(X[0]), float(X[1] - X[0]), values), 0.0)


def test_split_step_rejects_bad_arguments():
    _, s0, _ = analytic_states(FREE, InitialPacket(0.0, 1.0, 1.0), 0.0)
    with pytest.raises(ValidationError):
        split_step(s0, FREE, -1e-3, 10)
    with pytest.raises(ValidationError):
        split_step(s0, FREE, 1e-3, -1)
