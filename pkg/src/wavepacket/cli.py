"""Scenario runner: JSON config in, plot-ready data files and an invariant
report out.

Commands:
    run <config>         config is a JSON file path or a built-in scenario name
    list-scenarios       names of the embedded scenarios
    describe <scenario>  print an embedded scenario config as JSON

Exit codes: 0 success, 2 config error, 3 numerical divergence,
4 capability/delta-limit error, 5 I/O error.  A report whose checks fail
its tolerances still exits 0; pass/fail lives in report.json.

Outputs (all LF line endings, full double precision via repr):
    trajectory.csv   one row per sample, header
                     t,eta,eta_dot,alpha,alpha_dot,phi,var_x,var_p,corr,det_M,I_L,p_phi,E_cl,E_tilde
    wigner_t<id>.dat matrix (rows = p index, columns = x index) preceded by
                     '#' metadata lines
    report.json      invariant report with per-sample records, summaries and
                     pass/fail against the configured tolerances
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import (Constants, ConstantOmega, Free, InitialPacket, ModulatedOmega,
                   RampOmega, SystemSpec, TabulatedOmega, omega_at)
from .errors import (CapabilityError, ConfigError, DivergenceError,
                     ResolutionError, ValidationError)
from .evolution import ermakov_residual, solve_lambda
from .invariants import (canonical_coordinates, det_as_ermakov, energy_partition,
                         ermakov_invariant, frozen_width_matrix, matrix_from_state,
                         invariant_uncertainty_product, uncertainty_dynamics_residuals,
                         uncertainty_hamiltonian)
from .kernels import SymplecticParams, TDKernelParams, satisfies_kernel_odes, \
    apply_kernel, td_kernel_evaluator
from .oracle import GridState, compare_states, split_step
from .packet import evaluate_wavefunction, moments_from_lambda, propagate_analytic
from .wigner import wigner_numeric

TASKS = ("evolve", "wigner", "kernel_check", "invariants", "oracle_compare")

TOLERANCE_PROFILES = {
    "default": {
        "det_drift": 1e-9,
        "ermakov_rel_drift": 1e-8,
        "p_phi_abs_dev": 1e-10,
        "iup_abs_dev": 1e-10,
        "el_residual_factor": 10.0,  # times dt^2
        "oracle_aligned_l2": 1e-5,
        "kernel_ode_residual": 1e-5,
        "kernel_roundtrip_l2": 1e-5,
    },
    "strict": {
        "det_drift": 1e-10,
        "ermakov_rel_drift": 1e-9,
        "p_phi_abs_dev": 1e-11,
        "iup_abs_dev": 1e-11,
        "el_residual_factor": 5.0,
        "oracle_aligned_l2": 1e-6,
        "kernel_ode_residual": 1e-6,
        "kernel_roundtrip_l2": 1e-6,
    },
}

# fixed enumeration for the kernel defining-equation sweep: 20 symplectic
# parameter sets with |b| >= 0.2, c solved from the unit determinant
KERNEL_CHECK_LATTICE = tuple(
    (a, b, (a * 0.8 - 1.0) / b, 0.8)
    for a in (-1.5, -0.5, 0.0, 0.5, 1.5)
    for b in (0.2, 0.7, 1.3, 2.5)
)

BUILTIN_SCENARIOS = {
    "free-spread": {
        "constants": {"hbar": 1.0, "mass": 1.0},
        "system": {"type": "free"},
        "packet": {"x0": 0.0, "p0": 1.0, "alpha0": 1.0},
        "time": {"t_end": 2.0, "dt": 0.001, "sample_every": 100},
        "grid": {"x_min": -15.0, "x_max": 15.0, "n_points": 1024},
        "phase_space_grid": {"nx": 256, "np": 257, "span_sigmas": 8.0},
        "tasks": ["evolve", "invariants", "wigner", "kernel_check", "oracle_compare"],
        "output_dir": "out/free-spread",
    },
    "ho-constant-width": {
        "constants": {"hbar": 1.0, "mass": 1.0},
        "system": {"type": "constant", "omega": 1.0},
        "packet": {"x0": 0.0, "p0": 1.0, "alpha0": 1.0},
        "time": {"t_end": 10.0, "dt": 0.001, "sample_every": 100},
        "grid": {"x_min": -15.0, "x_max": 15.0, "n_points": 1024},
        "phase_space_grid": {"nx": 256, "np": 257, "span_sigmas": 8.0},
        "tasks": ["evolve", "invariants", "wigner", "kernel_check", "oracle_compare"],
        "output_dir": "out/ho-constant-width",
    },
    "ho-breathing": {
        "constants": {"hbar": 1.0, "mass": 1.0},
        "system": {"type": "constant", "omega": 1.0},
        "packet": {"x0": 0.0, "p0": 1.0, "alpha0": 1.5},
        "time": {"t_end": 10.0, "dt": 0.001, "sample_every": 100},
        "grid": {"x_min": -15.0, "x_max": 15.0, "n_points": 1024},
        "phase_space_grid": {"nx": 256, "np": 257, "span_sigmas": 8.0},
        "tasks": ["evolve", "invariants", "wigner", "oracle_compare"],
        "output_dir": "out/ho-breathing",
    },
    "omega-ramp": {
        "constants": {"hbar": 1.0, "mass": 1.0},
        "system": {"type": "ramp", "omega0": 1.0, "slope": 0.25},
        "packet": {"x0": 0.0, "p0": 1.0, "alpha0": 1.0},
        "time": {"t_end": 5.0, "dt": 0.001, "sample_every": 100},
        "grid": {"x_min": -15.0, "x_max": 15.0, "n_points": 1024},
        "phase_space_grid": {"nx": 256, "np": 257, "span_sigmas": 8.0},
        "tasks": ["evolve", "invariants", "oracle_compare"],
        "output_dir": "out/omega-ramp",
    },
    "frozen-width-demo": {
        "constants": {"hbar": 1.0, "mass": 1.0},
        "system": {"type": "free"},
        "packet": {"x0": 0.0, "p0": 1.0, "alpha0": 1.0},
        "time": {"t_end": 2.0, "dt": 0.001, "sample_every": 100},
        "grid": {"x_min": -15.0, "x_max": 15.0, "n_points": 1024},
        "phase_space_grid": {"nx": 256, "np": 257, "span_sigmas": 8.0},
        "tasks": ["evolve", "invariants"],
        "output_dir": "out/frozen-width-demo",
    },
}


@dataclass(frozen=True)
class ScenarioConfig:
    constants: Constants
    system: SystemSpec
    packet: InitialPacket
    t_end: float
    dt: float
    sample_every: int
    x_min: float
    x_max: float
    n_points: int
    ps_nx: int
    ps_np: int
    ps_span_sigmas: float
    tasks: tuple
    output_dir: str
    name: str = ""

    @property
    def sample_step(self):
        return self.dt * self.sample_every

    def sample_times(self):
        n = round(self.t_end / self.sample_step)
        return [k * self.sample_step for k in range(n + 1)]

    def x_grid(self):
        return np.linspace(self.x_min, self.x_max, self.n_points)


def _get(data, path, expected, default=None, required=True):
    node = data
    seen = []
    for key in path.split("."):
        seen.append(key)
        if not isinstance(node, dict) or key not in node:
            if required and default is None:
                raise ConfigError(f"missing config field '{'.'.join(seen)}'")
            return default
        node = node[key]
    if expected is float and isinstance(node, int) and not isinstance(node, bool):
        node = float(node)
    if not isinstance(node, expected) or isinstance(node, bool):
        raise ConfigError(
            f"config field '{path}' must be {expected.__name__}, got {node!r}"
        )
    return node


def _parse_system(data, constants):
    kind = _get(data, "system.type", str)
    try:
        if kind == "free":
            law = Free()
        elif kind == "constant":
            law = ConstantOmega(_get(data, "system.omega", float))
        elif kind == "ramp":
            law = RampOmega(_get(data, "system.omega0", float),
                            _get(data, "system.slope", float))
        elif kind == "modulated":
            law = ModulatedOmega(_get(data, "system.omega0", float),
                                 _get(data, "system.epsilon", float),
                                 _get(data, "system.gamma", float))
        elif kind == "tabulated":
            points = _get(data, "system.points", list)
            law = TabulatedOmega(tuple(p[0] for p in points),
                                 tuple(p[1] for p in points))
        else:
            raise ConfigError(f"unknown system.type {kind!r}")
    except ValidationError as exc:
        raise ConfigError(f"invalid 'system': {exc}") from exc
    except (TypeError, IndexError) as exc:
        raise ConfigError(f"malformed 'system.points': {exc}") from exc
    return SystemSpec(constants, law)


def parse_config(data, name="") -> ScenarioConfig:
    """Validate a config dict; ConfigError messages name the offending field."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    try:
        constants = Constants(_get(data, "constants.hbar", float, 1.0, required=False),
                              _get(data, "constants.mass", float, 1.0, required=False))
        packet = InitialPacket(_get(data, "packet.x0", float),
                               _get(data, "packet.p0", float),
                               _get(data, "packet.alpha0", float))
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
    system = _parse_system(data, constants)

    t_end = _get(data, "time.t_end", float)
    dt = _get(data, "time.dt", float)
    sample_every = _get(data, "time.sample_every", int, 1, required=False)
    if t_end <= 0.0:
        raise ConfigError("'time.t_end' must be > 0")
    if dt <= 0.0:
        raise ConfigError("'time.dt' must be > 0")
    if sample_every < 1:
        raise ConfigError("'time.sample_every' must be >= 1")
    n_samples = t_end / (dt * sample_every)
    if abs(n_samples - round(n_samples)) > 1e-9:
        raise ConfigError(
            "'time.t_end' must be an integer multiple of dt*sample_every")

    x_min = _get(data, "grid.x_min", float)
    x_max = _get(data, "grid.x_max", float)
    n_points = _get(data, "grid.n_points", int)
    if x_max <= x_min:
        raise ConfigError("'grid.x_max' must exceed 'grid.x_min'")
    if n_points < 64 or n_points & (n_points - 1):
        raise ConfigError("'grid.n_points' must be a power of two >= 64")

    ps_nx = _get(data, "phase_space_grid.nx", int, 256, required=False)
    ps_np = _get(data, "phase_space_grid.np", int, 257, required=False)
    span = _get(data, "phase_space_grid.span_sigmas", float, 8.0, required=False)
    if ps_nx < 16 or ps_np < 16 or span <= 0.0:
        raise ConfigError("'phase_space_grid' must have nx, np >= 16 and span > 0")

    tasks = _get(data, "tasks", list)
    if not tasks:
        raise ConfigError("'tasks' must not be empty")
    for t in tasks:
        if t not in TASKS:
            raise ConfigError(f"unknown task {t!r}; valid tasks: {', '.join(TASKS)}")

    output_dir = _get(data, "output_dir", str, "out", required=False)
    return ScenarioConfig(
        constants=constants, system=system, packet=packet,
        t_end=t_end, dt=dt, sample_every=sample_every,
        x_min=x_min, x_max=x_max, n_points=n_points,
        ps_nx=ps_nx, ps_np=ps_np, ps_span_sigmas=span,
        tasks=tuple(tasks), output_dir=output_dir, name=name,
    )


def load_config(source) -> ScenarioConfig:
    """Load a config from a built-in scenario name or a JSON file path."""
    if source in BUILTIN_SCENARIOS:
        return parse_config(BUILTIN_SCENARIOS[source], name=source)
    path = Path(source)
    if not path.exists():
        raise ConfigError(
            f"{source!r} is neither a built-in scenario nor an existing file; "
            f"built-ins: {', '.join(sorted(BUILTIN_SCENARIOS))}"
        )
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return parse_config(data, name=path.stem)


# ---------------------------------------------------------------------------
# Pipelines
# ---------------------------------------------------------------------------

def _sample_records(config, traj):
    c = config.constants
    records = []
    for state, cl in traj.samples:
        moments = moments_from_lambda(state, c)
        det = matrix_from_state(state, config.packet.alpha0).det
        i_l = ermakov_invariant(cl.eta, cl.eta_dot, state.alpha, state.alpha_dot)
        p_phi = canonical_coordinates(state, c).p_phi
        e_cl, e_tilde = energy_partition(cl, state, config.system)
        records.append({
            "t": state.t,
            "eta": cl.eta, "eta_dot": cl.eta_dot,
            "alpha": state.alpha, "alpha_dot": state.alpha_dot, "phi": state.phi,
            "var_x": moments.var_x, "var_p": moments.var_p, "corr": moments.corr,
            "det_M": det, "I_L": i_l, "p_phi": p_phi,
            "invariant_uncertainty_product": invariant_uncertainty_product(moments, c),
            "E_cl": e_cl, "E_tilde": e_tilde,
            "ermakov_residual": ermakov_residual(
                state, omega_at(config.system, state.t)),
        })
    return records


def _invariant_summary(config, traj, records, tol):
    c = config.constants
    det_drift = max(abs(r["det_M"] - 1.0) for r in records)
    i_l0 = records[0]["I_L"]
    if i_l0 != 0.0:
        ermakov_drift = max(abs(r["I_L"] - i_l0) / abs(i_l0) for r in records)
    else:
        ermakov_drift = max(abs(r["I_L"] - i_l0) for r in records)
    p_phi_dev = max(abs(r["p_phi"] - 0.5 * c.hbar) for r in records)
    iup_dev = max(abs(r["invariant_uncertainty_product"] - 0.25 * c.hbar ** 2)
                  for r in records)

    det_vs_ermakov = None
    if config.packet.p0 != 0.0 and config.packet.x0 == 0.0:
        det_vs_ermakov = 0.0
        for state, cl in traj.samples:
            val = det_as_ermakov(cl.eta, cl.eta_dot, state.alpha, state.alpha_dot,
                                 config.packet.alpha0, config.packet.p0, c.mass)
            det = matrix_from_state(state, config.packet.alpha0).det
            det_vs_ermakov = max(det_vs_ermakov, abs(val - det))

    # Euler-Lagrange residuals are O(h^2) finite-difference diagnostics, so
    # they run on a short trajectory sampled at the integrator step itself
    el_span = min(config.t_end, 2.0)
    n_fine = round(el_span / config.dt)
    fine = solve_lambda(config.system, config.packet,
                        [k * config.dt for k in range(n_fine + 1)], dt=config.dt)
    el_phi = el_alpha = 0.0
    for i in range(1, len(fine) - 1):
        r_phi, r_alpha, _ = uncertainty_dynamics_residuals(fine, i)
        el_phi = max(el_phi, r_phi)
        el_alpha = max(el_alpha, r_alpha)

    energy_vs_hamiltonian = 0.0
    for state, cl in traj.samples:
        uc = canonical_coordinates(state, c)
        w = omega_at(config.system, state.t)
        _, e_tilde = energy_partition(cl, state, config.system)
        energy_vs_hamiltonian = max(
            energy_vs_hamiltonian,
            abs(uncertainty_hamiltonian(uc, w, c) - e_tilde))

    el_tol = tol["el_residual_factor"] * config.dt * config.dt
    checks = {
        "ermakov_residual_max": {
            "value": max(r["ermakov_residual"] for r in records),
            "tolerance": 1e-9},
        "det_M_drift": {"value": det_drift, "tolerance": tol["det_drift"]},
        "ermakov_rel_drift": {"value": ermakov_drift,
                              "tolerance": tol["ermakov_rel_drift"]},
        "p_phi_abs_dev": {"value": p_phi_dev, "tolerance": tol["p_phi_abs_dev"]},
        "iup_abs_dev": {"value": iup_dev, "tolerance": tol["iup_abs_dev"]},
        "euler_lagrange_phi": {"value": el_phi, "tolerance": el_tol},
        "euler_lagrange_alpha": {"value": el_alpha, "tolerance": el_tol},
        "uncertainty_hamiltonian_vs_energy": {
            "value": energy_vs_hamiltonian, "tolerance": 1e-10},
    }
    if det_vs_ermakov is not None:
        checks["det_vs_ermakov_identity"] = {
            "value": det_vs_ermakov, "tolerance": 1e-9}
    for entry in checks.values():
        entry["pass"] = bool(entry["value"] <= entry["tolerance"])
    return checks


def _frozen_width_block(config, records):
    samples = []
    worst = 0.0
    for r in records:
        t = r["t"]
        m = frozen_width_matrix(config.system, config.packet.alpha0, t)
        closed = 1.0 + (t / config.packet.alpha0 ** 2) ** 2
        worst = max(worst, abs(m.det - closed))
        samples.append({"t": t, "det": m.det})
    return {
        "non_canonical": True,
        "note": "width frozen at alpha0; det = 1 + (t/alpha0^2)^2, not 1",
        "samples": samples,
        "closed_form_max_abs_err": worst,
    }


def _wigner_task(config, traj, indices):
    c = config.constants
    outputs = []
    span = config.ps_span_sigmas
    for idx in indices:
        state, cl = traj[idx]
        moments = moments_from_lambda(state, c)
        sx = math.sqrt(moments.var_x)
        sp = math.sqrt(moments.var_p)
        mean_x, mean_p = cl.eta, c.mass * cl.eta_dot

        # wavefunction sampled 1.5x wider than the requested window so the
        # offset integral is not truncated inside it; odd point count keeps
        # the mean on the grid
        n_wide = 2 * math.ceil(0.75 * config.ps_nx) + 1
        x_wide = np.linspace(mean_x - 1.5 * span * sx, mean_x + 1.5 * span * sx,
                             n_wide)
        psi = evaluate_wavefunction(propagate_analytic(traj, idx), x_wide)

        n_p = config.ps_np
        p_lo = mean_p - span * sp
        dp = 2.0 * span * sp / (n_p - 1)
        full = wigner_numeric(psi, (p_lo, dp, n_p), c)
        start = (n_wide - config.ps_nx) // 2
        grid = full.column_window(start, config.ps_nx)

        marginal_err = float(np.max(np.abs(
            grid.marginal_x()
            - np.abs(psi.values[start:start + config.ps_nx]) ** 2)))
        outputs.append({
            "index": idx,
            "t": state.t,
            "grid": grid,
            "peak": float(grid.values.max()),
            "min": float(grid.values.min()),
            "integral": full.integral(),
            "marginal_x_max_err": marginal_err,
        })
    return outputs


def _kernel_check_task(config, traj, tol):
    c = config.constants
    worst = 0.0
    for a, b, cc, d in KERNEL_CHECK_LATTICE:
        params = SymplecticParams(a, b, cc, d)
        params.require_symplectic(1e-12)
        r1, r2 = satisfies_kernel_odes(params, c)
        worst = max(worst, r1, r2)

    state, _ = traj[-1]
    x = config.x_grid()
    psi0 = evaluate_wavefunction(propagate_analytic(traj, 0), x)
    params = TDKernelParams.from_lambda_state(state, config.packet.alpha0)
    forward = apply_kernel(td_kernel_evaluator(params, c), psi0, x)
    back = apply_kernel(td_kernel_evaluator(params.reversed(), c), forward, x)
    roundtrip = math.sqrt(float(np.trapezoid(
        np.abs(back.values - psi0.values) ** 2, dx=psi0.dx)))
    unitarity = abs(forward.norm() - psi0.norm())

    return {
        "ti_lattice_size": len(KERNEL_CHECK_LATTICE),
        "ti_ode_max_residual": worst,
        "td_roundtrip_l2": roundtrip,
        "td_unitarity_defect": unitarity,
        "checks": {
            "kernel_ode_residual": {
                "value": worst, "tolerance": tol["kernel_ode_residual"],
                "pass": bool(worst <= tol["kernel_ode_residual"])},
            "kernel_roundtrip_l2": {
                "value": roundtrip, "tolerance": tol["kernel_roundtrip_l2"],
                "pass": bool(roundtrip <= tol["kernel_roundtrip_l2"])},
        },
    }


def _oracle_task(config, traj, tol):
    c = config.constants
    x = config.x_grid()
    psi0 = evaluate_wavefunction(propagate_analytic(traj, 0), x)
    steps = round(config.t_end / config.dt)
    evolved = split_step(GridState(psi0, 0.0), config.system, config.dt, steps)
    analytic = GridState(evaluate_wavefunction(
        propagate_analytic(traj, len(traj) - 1), x), config.t_end)
    l2, aligned, moment_errors = compare_states(evolved, analytic, hbar=c.hbar)
    return {
        "t": config.t_end,
        "steps": steps,
        "l2_error": l2,
        "phase_aligned_l2_error": aligned,
        "moment_errors": {
            "mean_x": moment_errors[0], "mean_p": moment_errors[1],
            "var_x": moment_errors[2], "var_p": moment_errors[3],
            "corr": moment_errors[4],
        },
        "checks": {
            "oracle_aligned_l2": {
                "value": aligned, "tolerance": tol["oracle_aligned_l2"],
                "pass": bool(aligned <= tol["oracle_aligned_l2"])},
        },
    }


def run_scenario(config: ScenarioConfig, output_dir=None,
                 tolerance_profile="default"):
    """Execute the configured tasks; returns (report_dict, wigner_grids)."""
    if tolerance_profile not in TOLERANCE_PROFILES:
        raise ConfigError(f"unknown tolerance profile {tolerance_profile!r}")
    tol = TOLERANCE_PROFILES[tolerance_profile]

    t_grid = config.sample_times()
    traj = solve_lambda(config.system, config.packet, t_grid, dt=config.dt)
    records = _sample_records(config, traj)

    report = {
        "scenario": config.name,
        "tolerance_profile": tolerance_profile,
        "time": {"t_end": config.t_end, "dt": config.dt,
                 "sample_every": config.sample_every},
        "tasks": list(config.tasks),
        "samples": records,
    }
    wigner_grids = []

    if "invariants" in config.tasks:
        checks = _invariant_summary(config, traj, records, tol)
        report["invariants"] = {"checks": checks}
        law = config.system.frequency_law
        if isinstance(law, Free) or (isinstance(law, ConstantOmega)
                                     and law.omega0 == 0.0):
            report["invariants"]["frozen_width"] = _frozen_width_block(
                config, records)

    if "wigner" in config.tasks:
        outputs = _wigner_task(config, traj, [0, len(traj) - 1])
        report["wigner"] = [
            {k: v for k, v in out.items() if k != "grid"} for out in outputs]
        wigner_grids = outputs

    if "kernel_check" in config.tasks:
        report["kernel_check"] = _kernel_check_task(config, traj, tol)

    if "oracle_compare" in config.tasks:
        report["oracle_compare"] = _oracle_task(config, traj, tol)

    all_checks = {}
    for section in ("invariants", "kernel_check", "oracle_compare"):
        if section in report and "checks" in report[section]:
            for name, entry in report[section]["checks"].items():
                all_checks[name] = entry["pass"]
    report["pass"] = bool(all(all_checks.values())) if all_checks else True
    return report, wigner_grids


# ---------------------------------------------------------------------------
# Output files
# ---------------------------------------------------------------------------

CSV_HEADER = ("t,eta,eta_dot,alpha,alpha_dot,phi,var_x,var_p,corr,"
              "det_M,I_L,p_phi,E_cl,E_tilde")
CSV_FIELDS = ("t", "eta", "eta_dot", "alpha", "alpha_dot", "phi", "var_x",
              "var_p", "corr", "det_M", "I_L", "p_phi", "E_cl", "E_tilde")


def emit_outputs(report, wigner_grids, output_dir, write_trajectory=True):
    """Write trajectory.csv, wigner_t<id>.dat and report.json; returns paths."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    if write_trajectory:
        path = out / "trajectory.csv"
        with open(path, "w", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for r in report["samples"]:
                fh.write(",".join(repr(r[f]) for f in CSV_FIELDS) + "\n")
        written.append(path)

    for entry in wigner_grids:
        grid = entry["grid"]
        path = out / f"wigner_t{entry['index']}.dat"
        with open(path, "w", newline="\n") as fh:
            fh.write("# wavepacket Wigner function samples\n")
            fh.write(f"# t = {entry['t']!r}\n")
            fh.write(f"# x_min = {grid.x_min!r}  dx = {grid.dx!r}  nx = {grid.n_x}\n")
            fh.write(f"# p_min = {grid.p_min!r}  dp = {grid.dp!r}  np = {grid.n_p}\n")
            fh.write("# rows: p index, columns: x index\n")
            for row in grid.values:
                fh.write(" ".join(f"{v:.17e}" for v in row) + "\n")
        written.append(path)

    path = out / "report.json"
    with open(path, "w", newline="\n") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    written.append(path)
    return written


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="wavepacket",
        description="Gaussian wave-packet dynamics scenario runner.",
        epilog="Exit codes: 0 success, 2 config error, 3 numerical divergence, "
               "4 capability/delta-limit error, 5 I/O error.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario config (file or built-in name)")
    run.add_argument("config", help="path to a JSON config, or a built-in scenario name")
    run.add_argument("--output-dir", default=None,
                     help="override the config's output directory")
    run.add_argument("--tolerance-profile", choices=sorted(TOLERANCE_PROFILES),
                     default="default", help="tolerance set for pass/fail checks")

    sub.add_parser("list-scenarios", help="list built-in scenarios")

    describe = sub.add_parser("describe", help="print a built-in scenario config")
    describe.add_argument("scenario")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "list-scenarios":
            for name in sorted(BUILTIN_SCENARIOS):
                print(name)
            return 0
        if args.command == "describe":
            if args.scenario not in BUILTIN_SCENARIOS:
                raise ConfigError(
                    f"unknown scenario {args.scenario!r}; "
                    f"built-ins: {', '.join(sorted(BUILTIN_SCENARIOS))}"
                )
            print(json.dumps(BUILTIN_SCENARIOS[args.scenario], indent=2))
            return 0

        config = load_config(args.config)
        report, wigner_grids = run_scenario(
            config, tolerance_profile=args.tolerance_profile)
        out_dir = args.output_dir or config.output_dir
        try:
            written = emit_outputs(report, wigner_grids, out_dir,
                                   write_trajectory="evolve" in config.tasks)
        except OSError as exc:
            print(f"error: I/O failure at {getattr(exc, 'filename', out_dir)}: {exc}",
                  file=sys.stderr)
            return 5
        for path in written:
            print(path)
        print(f"pass: {report['pass']}")
        return 0
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except DivergenceError as exc:
        print(f"error: numerical divergence: {exc}", file=sys.stderr)
        return 3
    except (CapabilityError, ResolutionError) as exc:
        print(f"error: capability: {exc}", file=sys.stderr)
        return 4
    except ValidationError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
