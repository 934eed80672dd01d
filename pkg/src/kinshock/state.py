"""Grids and the kinetic density container.

The kinetic density f(x, v) lives on a uniform spatial mesh times a
uniform velocity grid. The velocity grid is built from an entropy scale
``eps`` subdivided into an integer number of cells per band, so the
staircase entropy weight is exactly constant on every velocity cell and
all band bookkeeping is integer arithmetic on cell indices.

Storage is row-major with the velocity axis last: each spatial cell's
velocity profile is contiguous, which is what the per-cell projection
scan wants. Fields are mutated only between pipeline stages; all
reductions below use numpy's fixed summation order and are
bit-reproducible for a fixed shape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "VelocityGrid",
    "SpatialGrid",
    "KineticField",
    "from_macroscopic",
    "mass",
    "translate_distance",
    "save_snapshot",
    "load_snapshot",
]


class VelocityGrid:
    """Uniform grid on [0, v_max] aligned with the entropy bands.

    Attributes:
        v_max: upper end of the kinetic interval.
        eps: entropy band width.
        cells_per_band: integer >= 2; dv = eps / cells_per_band.
        n_bands: v_max / eps (must be integral).
        n_cells: total velocity cells = n_bands * cells_per_band.
    """

    def __init__(self, v_max: float, eps: float, cells_per_band: int = 4):
        if v_max <= 0.0 or eps <= 0.0:
            raise ValueError("v_max and eps must be positive")
        if int(cells_per_band) != cells_per_band or cells_per_band < 2:
            raise ValueError(f"cells_per_band must be an integer >= 2, got {cells_per_band}")
        ratio = v_max / eps
        n_bands = int(round(ratio))
        if n_bands < 1 or abs(ratio - n_bands) > 1e-9 * max(1.0, ratio):
            raise ValueError(f"eps={eps} does not divide v_max={v_max} evenly")
        self.v_max = float(v_max)
        self.eps = float(eps)
        self.cells_per_band = int(cells_per_band)
        self.n_bands = n_bands
        self.dv = self.eps / self.cells_per_band
        self.n_cells = self.n_bands * self.cells_per_band
        self._centers = (np.arange(self.n_cells) + 0.5) * self.dv
        self._weights = np.arange(self.n_cells) // self.cells_per_band

    def centers(self) -> np.ndarray:
        return self._centers

    def edges(self) -> np.ndarray:
        return np.arange(self.n_cells + 1) * self.dv

    def band_weights(self) -> np.ndarray:
        """Staircase entropy weight per cell: band index of the cell."""
        return self._weights

    def __repr__(self):
        return (f"VelocityGrid(v_max={self.v_max}, eps={self.eps}, "
                f"cells_per_band={self.cells_per_band})")

    def compatible(self, other: "VelocityGrid") -> bool:
        return (self.n_cells == other.n_cells
                and self.cells_per_band == other.cells_per_band
                and self.dv == other.dv)


class SpatialGrid:
    """Uniform 1D/2D cell-centered mesh with a boundary-condition mode."""

    def __init__(self, extents, dx, bc: str = "periodic"):
        extents = tuple(int(n) for n in np.atleast_1d(extents))
        dx = tuple(float(d) for d in np.atleast_1d(dx))
        if len(dx) == 1 and len(extents) > 1:
            dx = dx * len(extents)
        if len(extents) not in (1, 2):
            raise ValueError("only 1D and 2D spatial grids are supported")
        if len(dx) != len(extents):
            raise ValueError("dx must match the number of axes")
        if any(n < 3 for n in extents):
            raise ValueError(f"all extents must be >= 3, got {extents}")
        if any(d <= 0.0 for d in dx):
            raise ValueError(f"all cell widths must be positive, got {dx}")
        if bc not in ("periodic", "outflow"):
            raise ValueError(f"unknown boundary mode {bc!r}")
        self.extents = extents
        self.dx = dx
        self.bc = bc
        self.dim = len(extents)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.dx))

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.extents))

    def axis_centers(self, axis: int = 0) -> np.ndarray:
        return (np.arange(self.extents[axis]) + 0.5) * self.dx[axis]

    def __repr__(self):
        return f"SpatialGrid(extents={self.extents}, dx={self.dx}, bc={self.bc!r})"

    def compatible(self, other: "SpatialGrid") -> bool:
        return self.extents == other.extents and self.dx == other.dx


@dataclass
class KineticField:
    """Kinetic density f(x, v) in [0, 1]; shape = spatial extents + (n_cells_v,)."""

    values: np.ndarray
    vgrid: VelocityGrid
    sgrid: SpatialGrid

    def __post_init__(self):
        expected = self.sgrid.extents + (self.vgrid.n_cells,)
        if self.values.shape != expected:
            raise ValueError(f"field shape {self.values.shape} != grids {expected}")

    def copy(self) -> "KineticField":
        return KineticField(self.values.copy(), self.vgrid, self.sgrid)

    def profiles(self) -> np.ndarray:
        """(n_spatial_cells, n_velocity_cells) view, velocity contiguous."""
        return self.values.reshape(-1, self.vgrid.n_cells)

    def density(self) -> np.ndarray:
        """Velocity integral per spatial cell."""
        return self.values.sum(axis=-1) * self.vgrid.dv


def from_macroscopic(rho0: np.ndarray, vgrid: VelocityGrid, sgrid: SpatialGrid) -> KineticField:
    """Indicator kinetic data: f(x, .) = 1 on [0, rho0(x)], discretized.

    Full cells below rho0, one fractional boundary cell, zeros above, so
    the velocity integral reproduces rho0 exactly (up to rounding in
    rho0/dv). Out-of-range densities are rejected.
    """
    rho0 = np.asarray(rho0, dtype=float)
    if rho0.shape != sgrid.extents:
        raise ValueError(f"rho0 shape {rho0.shape} != spatial extents {sgrid.extents}")
    if rho0.min() < -1e-12 or rho0.max() > vgrid.v_max * (1.0 + 1e-12):
        raise ValueError(
            f"rho0 range [{rho0.min()}, {rho0.max()}] outside [0, {vgrid.v_max}]")
    fill = rho0[..., None] / vgrid.dv - np.arange(vgrid.n_cells)
    values = np.clip(fill, 0.0, 1.0)
    return KineticField(values, vgrid, sgrid)


def mass(field: KineticField) -> float:
    """Total mass: sum of f times dv times spatial cell volume."""
    return float(field.values.sum()) * field.vgrid.dv * field.sgrid.cell_volume


def translate_distance(f: KineticField, g: KineticField) -> float:
    """L1 distance between two fields on the same grids."""
    if not f.vgrid.compatible(g.vgrid) or not f.sgrid.compatible(g.sgrid):
        raise ValueError("translate_distance requires identical grids")
    return float(np.abs(f.values - g.values).sum()) * f.vgrid.dv * f.sgrid.cell_volume


def save_snapshot(field: KineticField, path, time: float = 0.0) -> None:
    """Dump a field as CSV with a header line carrying the grid metadata.

    One row per spatial cell (row-major), one column per velocity cell,
    17 significant digits.
    """
    sg, vg = field.sgrid, field.vgrid
    header = (
        "# kinshock snapshot "
        f"dim={sg.dim} extents={','.join(map(str, sg.extents))} "
        f"dx={','.join(f'{d:.17g}' for d in sg.dx)} bc={sg.bc} "
        f"dv={vg.dv:.17g} eps={vg.eps:.17g} cells_per_band={vg.cells_per_band} "
        f"v_max={vg.v_max:.17g} time={time:.17g}\n"
    )
    rows = field.profiles()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header)
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row))
            fh.write("\n")


def load_snapshot(path) -> tuple[KineticField, float]:
    """Inverse of save_snapshot."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("# kinshock snapshot "):
            raise ValueError(f"{path}: not a kinshock snapshot")
        meta = dict(tok.split("=", 1) for tok in header.split()[3:])
        rows = [
            np.fromiter((float(tok) for tok in line.split(",")), dtype=float)
            for line in fh
            if line.strip()
        ]
    extents = tuple(int(n) for n in meta["extents"].split(","))
    dx = tuple(float(d) for d in meta["dx"].split(","))
    sgrid = SpatialGrid(extents, dx, meta["bc"])
    vgrid = VelocityGrid(float(meta["v_max"]), float(meta["eps"]), int(meta["cells_per_band"]))
    values = np.vstack(rows).reshape(extents + (vgrid.n_cells,))
    return KineticField(values, vgrid, sgrid), float(meta["time"])
