"""Free-streaming of the kinetic density along per-cell velocities.

Each velocity slice f(., v_j) is advected with its own constant speed
A'(v_j), one first-order conservative upwind update per spatial axis
(dimensional splitting in 2D). Written in increment form
f - c*(f - upwind neighbour), the update is a convex combination at
CFL <= 1: it preserves the [0, 1] range, conserves each slice's mass
exactly on periodic domains, and keeps constant slices bitwise
unchanged.

exact_shift moves every slice by a whole number of cells (periodic
only) and reproduces the analytic translate bit-exactly; it exists for
linear-flux equivalence tests.

Velocity slices are independent; the step is a pure function of the
input field.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .flux import FluxModel, tabulate
from .state import KineticField, SpatialGrid

__all__ = ["TransportConfig", "max_stable_dt", "transport_step"]

_CFL_SLACK = 1.0 + 1e-12


@dataclass(frozen=True)
class TransportConfig:
    """Time step and scheme selection for the streaming stage."""

    dt: float
    scheme: str = "upwind"        # "upwind" | "exact_shift"
    cfl: float = 0.0              # realized Courant number, informational

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError(f"time step must be positive, got {self.dt}")
        if self.scheme not in ("upwind", "exact_shift"):
            raise ValueError(f"unknown transport scheme {self.scheme!r}")


def max_stable_dt(flux: FluxModel, sgrid: SpatialGrid, cfl_target: float,
                  fallback_dt: float | None = None) -> float:
    """Largest stable step: cfl_target * min(dx) / max_speed.

    A flux with zero maximal speed advects nothing; the caller's output
    interval is returned instead so runs still make progress.
    """
    if not 0.0 < cfl_target <= 1.0:
        raise ValueError(f"cfl_target must be in (0, 1], got {cfl_target}")
    if flux.max_speed == 0.0:
        if fallback_dt is None:
            raise ValueError("flux has zero max speed; supply fallback_dt")
        return fallback_dt
    return cfl_target * min(sgrid.dx) / flux.max_speed


def _neighbour(values: np.ndarray, step: int, axis: int, bc: str) -> np.ndarray:
    """values shifted by `step` cells along `axis` (ghosts copied out for outflow)."""
    if bc == "periodic":
        return np.roll(values, step, axis=axis)
    out = np.roll(values, step, axis=axis)
    edge = [slice(None)] * values.ndim
    src = [slice(None)] * values.ndim
    if step > 0:
        edge[axis] = slice(0, step)
        src[axis] = slice(0, 1)
    else:
        edge[axis] = slice(values.shape[axis] + step, None)
        src[axis] = slice(-1, None)
    out[tuple(edge)] = values[tuple(src)]
    return out


def _upwind_axis(values: np.ndarray, speeds: np.ndarray, dt: float, dx: float,
                 axis: int, bc: str) -> np.ndarray:
    c = speeds * (dt / dx)                      # per-slice Courant numbers
    if np.abs(c).max(initial=0.0) > _CFL_SLACK:
        raise ValueError(
            f"CFL violation on axis {axis}: max |A'| dt/dx = {np.abs(c).max():.6g} > 1")
    c_pos = np.maximum(c, 0.0)
    c_neg = np.maximum(-c, 0.0)
    left = _neighbour(values, 1, axis, bc)
    right = _neighbour(values, -1, axis, bc)
    return values - c_pos * (values - left) - c_neg * (values - right)


def _exact_shift(field: KineticField, speeds: np.ndarray, dt: float) -> np.ndarray:
    sg = field.sgrid
    if sg.bc != "periodic":
        raise ValueError("exact_shift requires periodic boundaries")
    values = field.values
    out = values.copy()
    for axis in range(sg.dim):
        shifts = speeds[axis] * dt / sg.dx[axis]
        steps = np.rint(shifts)
        if np.abs(shifts - steps).max(initial=0.0) > 1e-9:
            worst = float(np.abs(shifts - steps).max())
            raise ValueError(
                f"exact_shift needs whole-cell displacements; worst fraction {worst:.3g}")
        moved = np.empty_like(out)
        for step in np.unique(steps.astype(np.int64)):
            cols = np.nonzero(steps.astype(np.int64) == step)[0]
            moved[..., cols] = np.roll(out[..., cols], step, axis=axis)
        out = moved
    return out


def transport_step(field: KineticField, flux: FluxModel, cfg: TransportConfig) -> KineticField:
    """Advance the field by one streaming step of length cfg.dt."""
    if flux.dim != field.sgrid.dim:
        raise ValueError(f"flux dimension {flux.dim} != grid dimension {field.sgrid.dim}")
    speeds = tabulate(flux, field.vgrid)        # (dim, n_velocity_cells)
    if cfg.scheme == "exact_shift":
        values = _exact_shift(field, speeds, cfg.dt)
    else:
        values = field.values
        for axis in range(field.sgrid.dim):
            values = _upwind_axis(values, speeds[axis], cfg.dt,
                                  field.sgrid.dx[axis], axis, field.sgrid.bc)
    return KineticField(values, field.vgrid, field.sgrid)
