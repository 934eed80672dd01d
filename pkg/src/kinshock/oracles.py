"""Independent ground truth for the solver's tests and acceptance runs.

Nothing here shares code with the projection or the scheme: the greedy
fill realizes the band-entropy optimum directly (fractional knapsack
with non-decreasing cell costs, so greedy is exact), the Riemann
solutions are closed-form, and the Godunov solver advances the
macroscopic law with exact interface fluxes. All functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .flux import FluxModel
from .state import VelocityGrid

__all__ = [
    "greedy_minimizer",
    "enumerate_profiles",
    "RiemannSolution",
    "solve_riemann",
    "exact_riemann_burgers",
    "godunov_reference",
    "l1_error",
    "block_average",
]


def greedy_minimizer(rho: float, vgrid: VelocityGrid):
    """Fill velocity cells bottom-up to mass rho; the exact discrete optimum.

    Returns (profile, value) where value is the band-weighted moment of
    the profile. Cheaper cells always come first because the band weight
    is non-decreasing in v, so no other feasible profile does better.
    """
    if rho < -1e-12 or rho > vgrid.v_max * (1.0 + 1e-12):
        raise ValueError(f"mass {rho} outside [0, {vgrid.v_max}]")
    cells = rho / vgrid.dv
    profile = np.clip(cells - np.arange(vgrid.n_cells), 0.0, 1.0)
    w = vgrid.band_weights().astype(float)
    return profile, float(w @ profile) * vgrid.dv


def enumerate_profiles(n_cells: int, levels=(0.0, 0.5, 1.0)) -> np.ndarray:
    """Every profile on n_cells cells with values from `levels`.

    Exhaustive-search helper for small instances; (len(levels)**n_cells,
    n_cells) array.
    """
    if n_cells > 12:
        raise ValueError("exhaustive enumeration is capped at 12 cells")
    return np.array(list(product(levels, repeat=n_cells)), dtype=float)


@dataclass(frozen=True)
class RiemannSolution:
    """Self-similar solution of a two-state problem for a convex flux."""

    left: float
    right: float
    kind: str                  # "shock" | "rarefaction" | "constant"
    speed: float               # shock speed, or nan for the other kinds
    fan_lo: float              # lower fan edge speed (rarefaction)
    fan_hi: float              # upper fan edge speed (rarefaction)
    flux: FluxModel

    def evaluate(self, xi):
        """State at similarity coordinate xi = x/t."""
        xi = np.asarray(xi, dtype=float)
        if self.kind == "constant":
            return np.full_like(xi, self.left)
        if self.kind == "shock":
            return np.where(xi < self.speed, self.left, self.right)
        inside = np.clip(xi, self.fan_lo, self.fan_hi)
        fan = _invert_speed(self.flux, inside)
        out = np.where(xi < self.fan_lo, self.left,
                       np.where(xi > self.fan_hi, self.right, fan))
        return out


def _invert_speed(flux: FluxModel, xi: np.ndarray) -> np.ndarray:
    """Solve A'(v) = xi for v in [0, v_max] by bisection (A' non-decreasing)."""
    lo = np.zeros_like(xi)
    hi = np.full_like(xi, flux.v_max)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        below = flux.a_prime_of(mid)[0] < xi
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def solve_riemann(flux: FluxModel, left: float, right: float) -> RiemannSolution:
    """Classify and solve the two-state problem for a convex scalar flux."""
    if flux.dim != 1:
        raise ValueError("Riemann solutions are built for 1D fluxes")
    if not flux.is_convex():
        raise ValueError("solve_riemann requires a convex flux")
    for state in (left, right):
        if not 0.0 <= state <= flux.v_max:
            raise ValueError(f"state {state} outside [0, {flux.v_max}]")
    if left == right:
        return RiemannSolution(left, right, "constant", np.nan, np.nan, np.nan, flux)
    if left > right:
        speed = float(flux.secant(left, right)[0])
        return RiemannSolution(left, right, "shock", speed, np.nan, np.nan, flux)
    fan_lo = float(flux.a_prime_of(left)[0])
    fan_hi = float(flux.a_prime_of(right)[0])
    return RiemannSolution(left, right, "rarefaction", np.nan, fan_lo, fan_hi, flux)


def exact_riemann_burgers(left: float, right: float, x_over_t):
    """Entropy solution of the quadratic-flux two-state problem at xi = x/t.

    Shock at the chord speed (left + right)/2 when left > right,
    otherwise the fan v = xi clipped between the states.
    """
    xi = np.asarray(x_over_t, dtype=float)
    if left > right:
        speed = 0.5 * (left + right)
        out = np.where(xi < speed, left, right)
    elif left < right:
        out = np.clip(xi, left, right)
    else:
        out = np.full_like(xi, left)
    if np.isscalar(x_over_t):
        return float(out)
    return out


def _godunov_interface_flux(flux: FluxModel, ul: np.ndarray, ur: np.ndarray) -> np.ndarray:
    """Exact-Riemann interface flux for a convex flux: A at the minimizer
    of A over [ul, ur] when ul <= ur, else max(A(ul), A(ur))."""
    v_star = _invert_speed(flux, np.zeros(1))[0]   # argmin of A on [0, v_max]
    a = flux.a_of
    low = a(np.clip(v_star, ul, ur))[0]
    high = np.maximum(a(ul)[0], a(ur)[0])
    return np.where(ul <= ur, low, high)


def godunov_reference(rho0: np.ndarray, flux: FluxModel, dx: float, t_final: float,
                      bc: str = "periodic", cfl: float = 0.9) -> np.ndarray:
    """First-order Godunov solution of the macroscopic law at t_final.

    The entropy-solution proxy: exact Riemann fluxes, convex fluxes
    only, internal CFL <= 1 with the step adjusted to land on t_final.
    """
    if flux.dim != 1:
        raise ValueError("godunov_reference is one-dimensional")
    if not flux.is_convex():
        raise ValueError("godunov_reference requires a convex flux")
    rho = np.asarray(rho0, dtype=float).copy()
    if rho.ndim != 1:
        raise ValueError("godunov_reference expects a 1D density")
    if flux.max_speed == 0.0:
        return rho
    dt = cfl * dx / flux.max_speed
    n_steps = max(1, int(np.ceil(t_final / dt - 1e-9)))
    dt = t_final / n_steps
    lam = dt / dx
    for _ in range(n_steps):
        if bc == "periodic":
            left = np.roll(rho, 1)
            right = np.roll(rho, -1)
        else:
            left = np.concatenate([rho[:1], rho[:-1]])
            right = np.concatenate([rho[1:], rho[-1:]])
        f_minus = _godunov_interface_flux(flux, left, rho)
        f_plus = _godunov_interface_flux(flux, rho, right)
        rho = rho - lam * (f_plus - f_minus)
    return rho


def l1_error(field_a: np.ndarray, field_b: np.ndarray, cell_volume: float = 1.0) -> float:
    """L1 distance between two spatial fields on the same grid."""
    a = np.asarray(field_a, dtype=float)
    b = np.asarray(field_b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"grid mismatch: {a.shape} vs {b.shape}")
    return float(np.abs(a - b).sum()) * cell_volume


def block_average(fine: np.ndarray, factor: int) -> np.ndarray:
    """Average consecutive groups of `factor` cells (1D restriction)."""
    fine = np.asarray(fine, dtype=float)
    if fine.size % factor != 0:
        raise ValueError(f"{fine.size} cells do not split into blocks of {factor}")
    return fine.reshape(-1, factor).mean(axis=1)
