"""Shared test utilities: scenario shorthands and the weak-form residual."""

from __future__ import annotations

import numpy as np

import kinshock as ks


def burgers_run(rho0_of_x, Nx, eps, t_final, bc="periodic", cfl=0.9,
                cells_per_band=4, observe_stride=1, observer=None):
    """Run a 1D Burgers scenario on the unit interval; returns
    (x, final field, diagnostics, flux)."""
    flux = ks.builtin_flux("burgers")
    sgrid = ks.SpatialGrid((Nx,), (1.0 / Nx,), bc)
    x = sgrid.axis_centers(0)
    vgrid = ks.VelocityGrid(1.0, eps, cells_per_band)
    f0 = ks.from_macroscopic(np.asarray(rho0_of_x(x), dtype=float), vgrid, sgrid)
    dt = ks.max_stable_dt(flux, sgrid, cfl)
    n_steps = int(np.ceil(t_final / dt - 1e-9))
    dt = t_final / n_steps
    final, diag = ks.run(f0, flux, ks.TransportConfig(dt=dt), t_final,
                         observer=observer, observe_stride=observe_stride)
    return x, final, diag, flux


def tracked_front_speed(rho0_of_x, Nx, eps, t_final, level, direction,
                        observe_stride=2):
    """Front-speed measurement used by the shock acceptance runs:
    level crossings sampled every observe_stride steps from t = 0,
    least-squares slope over the whole run."""
    times, rhos = [], []
    flux = ks.builtin_flux("burgers")

    def observer(step, t, fld, rho, phi, row):
        times.append(t)
        rhos.append(rho)

    x, final, diag, _ = burgers_run(rho0_of_x, Nx, eps, t_final,
                                    observer=observer, observe_stride=observe_stride)
    track = ks.front_tracker(times, rhos, x, level, direction)
    return track, diag


def weak_form_residual(Nx, eps=0.1, t_final=0.4, wavenumber=1, phase=0.0):
    """|time-space quadrature of (rho d_t psi + phi d_x psi) + initial term|
    for psi(x, t) = cos(2 pi k x + phase) (1 - t/T)^2 on the periodic
    unit interval (psi vanishes at t = T)."""
    flux = ks.builtin_flux("burgers")
    sgrid = ks.SpatialGrid((Nx,), (1.0 / Nx,), "periodic")
    x = sgrid.axis_centers(0)
    rho0 = 0.5 + 0.3 * np.sin(2 * np.pi * x)
    vgrid = ks.VelocityGrid(1.0, eps, 4)
    f0 = ks.from_macroscopic(rho0, vgrid, sgrid)
    dt = ks.max_stable_dt(flux, sgrid, 0.9)
    n_steps = int(np.ceil(t_final / dt - 1e-9))
    dt = t_final / n_steps
    T = t_final
    k = wavenumber
    total = [0.0]

    def d_t_psi(t):
        return np.cos(2 * np.pi * k * x + phase) * (-2.0 / T) * (1.0 - t / T)

    def d_x_psi(t):
        return -2 * np.pi * k * np.sin(2 * np.pi * k * x + phase) * (1.0 - t / T) ** 2

    def observer(step, t, fld, rho, phi, row):
        if t < T - 1e-12:
            total[0] += dt * np.sum(rho * d_t_psi(t) + phi[0] * d_x_psi(t)) / Nx

    ks.run(f0, flux, ks.TransportConfig(dt=dt), t_final,
           observer=observer, observe_stride=1)
    initial = np.sum(rho0 * np.cos(2 * np.pi * k * x + phase)) / Nx
    return abs(total[0] + initial)
