"""Scenario orchestration and CSV emission.

A run writes, inside its output directory:

  rho_<t>.csv      density and flux moments at each observed time
                   (columns x[,y],rho,phi_1[,phi_2])
  diagnostics.csv  step,time,mass,entropy,defect,defect_total,budget
  front.csv        time,position of the tracked level crossing
                   (1D Riemann scenarios)
  summary.csv      one row of headline numbers for the run
  field_final.csv  kinetic snapshot of the final state (dump_final = true)

Floats are written with 17 significant digits and reductions are
ordered, so identical configs reproduce byte-identical files.
"""

from __future__ import annotations

import os

import numpy as np

from .config import ConfigError, ScenarioConfig, initial_density
from .flux import builtin_flux
from .oracles import block_average, godunov_reference, l1_error, solve_riemann
from .scheme import front_tracker, moments, run
from .state import (KineticField, SpatialGrid, VelocityGrid, from_macroscopic,
                    save_snapshot)
from .transport import TransportConfig, max_stable_dt

__all__ = ["build_scenario", "run_scenario", "run_sweep", "riemann_table",
           "output_root", "fmt"]

SUMMARY_COLUMNS = [
    "eps", "dx", "dt", "steps", "t_final", "mass_initial", "mass_final",
    "entropy_initial", "entropy_final", "defect_total", "entropy_budget",
    "front_speed", "secant_speed", "front_speed_error", "l1_to_reference",
]


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def output_root(explicit: str | None = None) -> str:
    """Resolve the output root: flag, then KINSHOCK_OUT, then cwd."""
    return explicit or os.environ.get("KINSHOCK_OUT") or os.getcwd()


def _write_csv(path: str, header: list, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def build_scenario(cfg: ScenarioConfig):
    """Materialize flux, grids, initial field and time step from a config."""
    flux = builtin_flux(cfg.flux_name, cfg.flux_params, v_max=cfg.v_max)
    if flux.dim != len(cfg.extents):
        raise ConfigError(
            f"flux dimension {flux.dim} does not match extents {cfg.extents}")
    vgrid = VelocityGrid(cfg.v_max, cfg.eps, cfg.cells_per_band)
    sgrid = SpatialGrid(cfg.extents, cfg.dx, cfg.bc)
    rho0 = initial_density(cfg, sgrid.extents, sgrid.dx)
    f0 = from_macroscopic(rho0, vgrid, sgrid)
    dt = max_stable_dt(flux, sgrid, cfg.cfl, fallback_dt=cfg.t_final / max(cfg.stride, 1))
    n_steps = max(1, int(np.ceil(cfg.t_final / dt - 1e-9)))
    dt = cfg.t_final / n_steps
    tcfg = TransportConfig(dt=dt, scheme=cfg.scheme,
                           cfl=dt * flux.max_speed / min(sgrid.dx))
    return flux, vgrid, sgrid, f0, tcfg, n_steps


def _snapshot_rows(sgrid: SpatialGrid, rho: np.ndarray, phi: np.ndarray):
    if sgrid.dim == 1:
        x = sgrid.axis_centers(0)
        for i in range(sgrid.extents[0]):
            yield (x[i], rho[i], phi[0, i])
    else:
        x = sgrid.axis_centers(0)
        y = sgrid.axis_centers(1)
        for i in range(sgrid.extents[0]):
            for j in range(sgrid.extents[1]):
                yield (x[i], y[j], rho[i, j], phi[0, i, j], phi[1, i, j])


def run_scenario(cfg: ScenarioConfig, out_root: str | None = None) -> dict:
    """Run one scenario, write its files, and return the summary mapping."""
    flux, vgrid, sgrid, f0, tcfg, n_steps = build_scenario(cfg)
    outdir = os.path.join(output_root(out_root), cfg.outdir)
    os.makedirs(outdir, exist_ok=True)

    header = (["x", "rho", "phi_1"] if sgrid.dim == 1
              else ["x", "y", "rho", "phi_1", "phi_2"])
    observed_times: list = []
    observed_rho: list = []

    def observer(step, t, fld, rho, phi, diag_row):
        path = os.path.join(outdir, f"rho_{t:.6f}.csv")
        _write_csv(path, header, _snapshot_rows(sgrid, rho, phi))
        observed_times.append(t)
        observed_rho.append(rho.copy())

    final, diag = run(f0, flux, tcfg, cfg.t_final,
                      observer=observer, observe_stride=cfg.stride)

    _write_csv(os.path.join(outdir, "diagnostics.csv"),
               ["step", "time", "mass", "entropy", "defect", "defect_total", "budget"],
               diag.rows())

    summary = {
        "eps": cfg.eps,
        "dx": min(sgrid.dx),
        "dt": tcfg.dt,
        "steps": n_steps,
        "t_final": cfg.t_final,
        "mass_initial": diag.mass_series[0],
        "mass_final": diag.mass_series[-1],
        "entropy_initial": diag.entropy_series[0],
        "entropy_final": diag.entropy_series[-1],
        "defect_total": diag.defect_total,
        "entropy_budget": diag.entropy_budget,
        "front_speed": None,
        "secant_speed": None,
        "front_speed_error": None,
        "l1_to_reference": None,
    }

    if cfg.ic_kind == "riemann" and sgrid.dim == 1:
        left, right = cfg.ic_params["left"], cfg.ic_params["right"]
        if left != right:
            direction = "down" if left > right else "up"
            track = front_tracker(observed_times, observed_rho,
                                  sgrid.axis_centers(0), cfg.level, direction)
            secant = float(flux.secant(left, right)[0])
            summary["front_speed"] = track.speed
            summary["secant_speed"] = secant
            summary["front_speed_error"] = abs(track.speed - secant)
            _write_csv(os.path.join(outdir, "front.csv"), ["time", "position"],
                       zip(track.times, track.positions))

    if cfg.reference:
        summary["l1_to_reference"] = _reference_distance(cfg, flux, sgrid, final)

    if cfg.dump_final:
        save_snapshot(final, os.path.join(outdir, "field_final.csv"), cfg.t_final)

    _write_csv(os.path.join(outdir, "summary.csv"), SUMMARY_COLUMNS,
               [[summary[c] for c in SUMMARY_COLUMNS]])
    return summary


def _reference_distance(cfg: ScenarioConfig, flux, sgrid: SpatialGrid,
                        final: KineticField, refine: int = 4) -> float:
    """L1 distance of the final density to a Godunov run on a finer grid."""
    if sgrid.dim != 1:
        raise ConfigError("the Godunov reference comparison is 1D only")
    fine_extents = (sgrid.extents[0] * refine,)
    fine_dx = (sgrid.dx[0] / refine,)
    rho0_fine = initial_density(cfg, fine_extents, fine_dx)
    ref_fine = godunov_reference(rho0_fine, flux, fine_dx[0], cfg.t_final, bc=sgrid.bc)
    ref = block_average(ref_fine, refine)
    rho_final, _ = moments(final, flux)
    return l1_error(rho_final, ref, cell_volume=sgrid.cell_volume)


def run_sweep(cfg: ScenarioConfig, eps_values, out_root: str | None = None) -> list:
    """Run the scenario once per entropy scale; collect one summary row each.

    Per-scale outputs land in <outdir>/eps_<value>/ and the table in
    <outdir>/sweep.csv.
    """
    base = os.path.join(output_root(out_root), cfg.outdir)
    os.makedirs(base, exist_ok=True)
    rows = []
    for eps in eps_values:
        ratio = cfg.v_max / eps
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ConfigError(f"sweep eps={eps} does not divide v_max={cfg.v_max}")
        sub = ScenarioConfig(**{**cfg.__dict__,
                                "eps": float(eps),
                                "outdir": os.path.join(cfg.outdir, f"eps_{eps:g}")})
        summary = run_scenario(sub, out_root)
        rows.append(summary)
    _write_csv(os.path.join(base, "sweep.csv"),
               ["eps", "dx", "front_speed", "secant_speed", "front_speed_error",
                "l1_to_reference", "defect_total", "entropy_budget"],
               [[r["eps"], r["dx"], r["front_speed"], r["secant_speed"],
                 r["front_speed_error"], r["l1_to_reference"], r["defect_total"],
                 r["entropy_budget"]] for r in rows])
    return rows


def riemann_table(cfg: ScenarioConfig, out_root: str | None = None) -> str:
    """Write the exact self-similar solution of the configured Riemann
    problem, sampled on the scenario's spatial grid at t_final."""
    if cfg.ic_kind != "riemann":
        raise ConfigError("riemann-table needs a riemann initial condition")
    flux = builtin_flux(cfg.flux_name, cfg.flux_params, v_max=cfg.v_max)
    if flux.dim != 1 or len(cfg.extents) != 1:
        raise ConfigError("riemann-table is one-dimensional")
    sgrid = SpatialGrid(cfg.extents, cfg.dx, cfg.bc)
    x = sgrid.axis_centers(0)
    solution = solve_riemann(flux, cfg.ic_params["left"], cfg.ic_params["right"])
    xi = (x - cfg.ic_params["position"]) / cfg.t_final
    rho = solution.evaluate(xi)
    outdir = os.path.join(output_root(out_root), cfg.outdir)
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, "riemann_table.csv")
    _write_csv(path, ["x", "rho"], zip(x, rho))
    return path
