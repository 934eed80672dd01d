"""Discrete-time dynamics: stream, then collapse, with running diagnostics.

One step advances the field by a transport stage followed by the
band-entropy projection of every spatial cell; the time step doubles as
the relaxation scale (no sub-cycling). Per step the diagnostics record
total mass, the band-weighted entropy moment, the projection defect
(the L1 size of what the collapse changed) and its running total, which
the theory bounds by (2/eps) times the initial entropy moment.

On periodic domains the step provably keeps mass constant and the
entropy moment non-increasing, and the defect obeys the per-step
control inequality; these are asserted every step and any violation
aborts the run with the offending step identified. Outflow boundaries
exchange mass and entropy with the exterior, so only the range and
control checks are enforced there.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .flux import FluxModel, cell_mean_speeds
from .projection import project_field
from .state import KineticField, mass
from .transport import TransportConfig, transport_step

__all__ = [
    "InvariantViolation",
    "RunDiagnostics",
    "run",
    "moments",
    "ShockSpeedEstimate",
    "shock_speed_estimate",
    "FrontTrack",
    "front_tracker",
]


class InvariantViolation(RuntimeError):
    """A step produced a state violating a guaranteed inequality."""


@dataclass
class RunDiagnostics:
    """Per-step time series of the run's conserved and monotone quantities."""

    eps: float
    entropy_budget: float = 0.0
    times: list = dc_field(default_factory=list)
    mass_series: list = dc_field(default_factory=list)
    entropy_series: list = dc_field(default_factory=list)
    defect_series: list = dc_field(default_factory=list)
    defect_total_series: list = dc_field(default_factory=list)
    control_margin_series: list = dc_field(default_factory=list)

    @property
    def defect_total(self) -> float:
        return self.defect_total_series[-1] if self.defect_total_series else 0.0

    def rows(self):
        """(step, time, mass, entropy, defect, defect_total, budget) tuples."""
        for i, t in enumerate(self.times):
            yield (i, t, self.mass_series[i], self.entropy_series[i],
                   self.defect_series[i], self.defect_total_series[i],
                   self.entropy_budget)


def _entropy(field: KineticField) -> float:
    w = field.vgrid.band_weights().astype(float)
    return float((field.profiles() @ w).sum()) * field.vgrid.dv * field.sgrid.cell_volume


def run(f0: KineticField, flux: FluxModel, tcfg: TransportConfig, t_final: float,
        observer=None, observe_stride: int = 1, check_invariants: bool = True):
    """Iterate stream + collapse until the accumulated time reaches t_final.

    observer, when given, is called as
    observer(step, time, field, rho, phi, diag_row) every observe_stride
    steps (and at step 0 and the final step).

    Returns (final field, RunDiagnostics). Raises InvariantViolation if
    a checked inequality fails, identifying the step.
    """
    if t_final <= 0.0:
        raise ValueError(f"t_final must be positive, got {t_final}")
    periodic = f0.sgrid.bc == "periodic"
    eps = f0.vgrid.eps
    n_steps = int(np.ceil(t_final / tcfg.dt - 1e-9))

    diag = RunDiagnostics(eps=eps)
    f = f0.copy()
    mass0 = mass(f)
    entropy0 = _entropy(f)
    diag.entropy_budget = 2.0 / eps * entropy0
    diag.times.append(0.0)
    diag.mass_series.append(mass0)
    diag.entropy_series.append(entropy0)
    diag.defect_series.append(0.0)
    diag.defect_total_series.append(0.0)
    diag.control_margin_series.append(0.0)

    mass_tol = 1e-10 * max(mass0, 1e-30)
    ent_tol = 1e-10 * (1.0 + abs(entropy0))

    def _observe(step, t, fld):
        if observer is not None:
            rho, phi = moments(fld, flux)
            observer(step, t, fld, rho, phi,
                     (step, t, diag.mass_series[-1], diag.entropy_series[-1],
                      diag.defect_series[-1], diag.defect_total_series[-1],
                      diag.entropy_budget))

    _observe(0, 0.0, f)
    defect_total = 0.0
    entropy_prev = entropy0
    for step in range(1, n_steps + 1):
        t = step * tcfg.dt
        streamed = transport_step(f, flux, tcfg)
        entropy_pre = _entropy(streamed)
        f, summary = project_field(streamed)
        entropy_post = _entropy(f)
        defect = summary.defect_l1
        defect_total += defect
        margin = (2.0 / eps) * (entropy_pre - entropy_post) - defect

        diag.times.append(t)
        diag.mass_series.append(mass(f))
        diag.entropy_series.append(entropy_post)
        diag.defect_series.append(defect)
        diag.defect_total_series.append(defect_total)
        diag.control_margin_series.append(margin)

        if check_invariants:
            vmin, vmax = f.values.min(), f.values.max()
            if vmin < -1e-12 or vmax > 1.0 + 1e-12:
                raise InvariantViolation(
                    f"step {step}: field range [{vmin}, {vmax}] outside [0, 1]")
            if margin < -ent_tol:
                raise InvariantViolation(
                    f"step {step}: projection defect {defect} exceeds the "
                    f"entropy-drop control bound by {-margin}")
            if periodic:
                if abs(diag.mass_series[-1] - mass0) > mass_tol:
                    raise InvariantViolation(
                        f"step {step}: mass drifted from {mass0} to {diag.mass_series[-1]}")
                if entropy_post > entropy_prev + ent_tol:
                    raise InvariantViolation(
                        f"step {step}: entropy moment grew from {entropy_prev} "
                        f"to {entropy_post}")
            if defect_total > diag.entropy_budget + ent_tol:
                raise InvariantViolation(
                    f"step {step}: accumulated defect {defect_total} exceeds "
                    f"entropy budget {diag.entropy_budget}")
        entropy_prev = entropy_post

        if step % observe_stride == 0 or step == n_steps:
            _observe(step, t, f)
    return f, diag


def moments(field: KineticField, flux: FluxModel):
    """Velocity moments (rho, phi): density and kinetic flux per spatial cell.

    rho sums the profile; phi weights it with the exact per-cell average
    of A', so a cell-resolved profile contributes its flux moment with
    no quadrature error. phi has shape (dim,) + spatial extents.
    """
    dv = field.vgrid.dv
    rho = field.values.sum(axis=-1) * dv
    means = cell_mean_speeds(flux, field.vgrid)             # (dim, Nv)
    phi = np.tensordot(means, field.values, axes=([1], [field.values.ndim - 1])) * dv
    return rho, phi


@dataclass(frozen=True)
class ShockSpeedEstimate:
    """Per-axis discrete jump speed versus the exact chord of the flux."""

    ratio: np.ndarray        # (phi_a - phi_b) / (rho_a - rho_b)
    secant: np.ndarray       # (A(rho_a) - A(rho_b)) / (rho_a - rho_b)

    @property
    def deviation(self) -> np.ndarray:
        return np.abs(self.ratio - self.secant)


def shock_speed_estimate(rho_a: float, phi_a, rho_b: float, phi_b,
                         flux: FluxModel, eps: float,
                         jump_threshold: float = 2.0):
    """Jump-speed ratio for a pair of moment states, or None when the
    density contrast is below jump_threshold * eps (too small to count
    as a shock at this entropy scale)."""
    jump = rho_a - rho_b
    if abs(jump) < jump_threshold * eps:
        return None
    phi_a = np.atleast_1d(np.asarray(phi_a, dtype=float))
    phi_b = np.atleast_1d(np.asarray(phi_b, dtype=float))
    ratio = (phi_a - phi_b) / jump
    secant = (flux.a_of(rho_a) - flux.a_of(rho_b)) / jump
    return ShockSpeedEstimate(ratio=ratio, secant=secant)


@dataclass
class FrontTrack:
    """Level-crossing positions over time and their least-squares slope."""

    times: np.ndarray
    positions: np.ndarray
    speed: float
    intercept: float


def _crossing(x: np.ndarray, rho: np.ndarray, level: float, direction: str) -> float:
    d = rho - level
    if direction == "down":
        mask = (d[:-1] > 0.0) & (d[1:] <= 0.0)
    elif direction == "up":
        mask = (d[:-1] <= 0.0) & (d[1:] > 0.0)
    else:
        mask = d[:-1] * d[1:] <= 0.0
        mask &= (d[:-1] != 0.0) | (d[1:] != 0.0)
    hits = np.nonzero(mask)[0]
    if hits.size == 0:
        raise ValueError(f"no {direction} crossing of level {level} found")
    i = hits[0]
    frac = d[i] / (d[i] - d[i + 1])
    return float(x[i] + frac * (x[i + 1] - x[i]))


def front_tracker(times, rho_series, x: np.ndarray, level: float,
                  direction: str = "any") -> FrontTrack:
    """Track the level crossing of a 1D density over time and fit its speed.

    rho_series is a sequence of 1D density fields sampled at `times`;
    `direction` selects downward ("down"), upward ("up") or the first
    crossing of either sign. Raises ValueError when a sample has no
    crossing.
    """
    times = np.asarray(times, dtype=float)
    positions = np.array([_crossing(x, np.asarray(r, float), level, direction)
                          for r in rho_series])
    if times.size < 2:
        raise ValueError("need at least two samples to fit a front speed")
    speed, intercept = np.polyfit(times, positions, 1)
    return FrontTrack(times=times, positions=positions,
                      speed=float(speed), intercept=float(intercept))
