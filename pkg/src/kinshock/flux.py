"""Flux families with exact polynomial antiderivatives.

The solver needs the flux A: [0, v_max] -> R^d and its derivative A'.
Built-in families keep A' polynomial so A is available in closed form:
cell averages of A' are then exact differences of A at cell edges, and
no quadrature error enters the moment closure or the shock-speed
diagnostics.

FluxModel instances are immutable after construction and safe to share
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

__all__ = ["FluxModel", "builtin_flux", "tabulate", "cell_mean_speeds"]


@dataclass(frozen=True)
class FluxModel:
    """Flux A and derivative A' on the kinetic interval [0, v_max]."""

    name: str
    dim: int
    v_max: float
    max_speed: float
    _primitive: tuple = field(repr=False)   # A_i, one Polynomial per axis
    _derivative: tuple = field(repr=False)  # A'_i, one Polynomial per axis

    def a_of(self, v):
        """A(v); shape (dim,) + shape(v)."""
        v = np.asarray(v, dtype=float)
        return np.stack([p(v) for p in self._primitive])

    def a_prime_of(self, v):
        """A'(v); shape (dim,) + shape(v)."""
        v = np.asarray(v, dtype=float)
        return np.stack([p(v) for p in self._derivative])

    def secant(self, a: float, b: float):
        """Chord slope (A(b) - A(a)) / (b - a) per axis."""
        if a == b:
            raise ValueError("secant needs two distinct states")
        return (self.a_of(b) - self.a_of(a)) / (b - a)

    def is_convex(self, samples: int = 2049) -> bool:
        """True when every A'_i is non-decreasing on [0, v_max]."""
        v = np.linspace(0.0, self.v_max, samples)
        ap = self.a_prime_of(v)
        return bool(np.all(np.diff(ap, axis=1) >= -1e-12 * max(1.0, self.max_speed)))


def _poly_abs_max(p: Polynomial, lo: float, hi: float) -> float:
    """max |p| over [lo, hi]: endpoints plus interior critical points."""
    candidates = [lo, hi]
    dp = p.deriv()
    if dp.degree() >= 1 or (dp.degree() == 0 and dp.coef[0] != 0.0):
        for r in dp.roots():
            if abs(r.imag) < 1e-12 and lo <= r.real <= hi:
                candidates.append(float(r.real))
    return float(max(abs(p(c)) for c in candidates))


def builtin_flux(name: str, params=None, v_max: float = 1.0) -> FluxModel:
    """Construct a built-in flux family.

    name:
      "linear"            params = advection speed per axis, A_i(v) = c_i v
      "burgers"           quadratic 1D flux A(v) = v^2/2
      "custom_polynomial" params = A' coefficients (ascending powers); a flat
                          list gives one axis, a list of lists one per axis
    """
    if v_max <= 0.0:
        raise ValueError(f"v_max must be positive, got {v_max}")
    if name == "linear":
        if params is None or len(params) == 0:
            raise ValueError("linear flux needs at least one speed coefficient")
        derivs = [Polynomial([float(c)]) for c in params]
    elif name == "burgers":
        if params:
            raise ValueError("burgers flux takes no parameters")
        derivs = [Polynomial([0.0, 1.0])]
    elif name == "custom_polynomial":
        if params is None or len(params) == 0:
            raise ValueError("custom_polynomial flux needs coefficients")
        if np.isscalar(params[0]):
            params = [params]
        if any(len(c) == 0 for c in params):
            raise ValueError("empty coefficient list for custom_polynomial axis")
        derivs = [Polynomial([float(c) for c in coeffs]) for coeffs in params]
    else:
        raise ValueError(f"unknown flux family {name!r}")

    prims = [p.integ(lbnd=0.0) for p in derivs]
    max_speed = max(_poly_abs_max(p, 0.0, v_max) for p in derivs)
    return FluxModel(
        name=name,
        dim=len(derivs),
        v_max=float(v_max),
        max_speed=max_speed,
        _primitive=tuple(prims),
        _derivative=tuple(derivs),
    )


def tabulate(flux: FluxModel, vgrid) -> np.ndarray:
    """A' sampled at velocity-cell centers; shape (dim, n_cells).

    Used by the transport step. Values lie in [-max_speed, max_speed]
    up to rounding and are clipped there.
    """
    speeds = flux.a_prime_of(vgrid.centers())
    bound = flux.max_speed
    if np.any(np.abs(speeds) > bound * (1.0 + 1e-9) + 1e-30):
        raise ValueError("tabulated speed exceeds max_speed; inconsistent flux")
    return np.clip(speeds, -bound, bound)


def cell_mean_speeds(flux: FluxModel, vgrid) -> np.ndarray:
    """Exact cell averages of A' per velocity cell; shape (dim, n_cells).

    Computed as differences of the antiderivative at the cell edges, so
    the flux moment of a cell-resolved profile carries no quadrature
    error.
    """
    edges = vgrid.edges()
    a = flux.a_of(edges)
    return (a[:, 1:] - a[:, :-1]) / vgrid.dv
