"""Randomized and exhaustive invariant suites for the projection, the
transport step, and the full scheme.

Each check runs over a batch of profiles (or fields) and reports the
number of cases, the number of violations, and the worst remaining
slack (non-negative slack = pass). Violations carry the offending
profile verbatim so a failure is reproducible by eye.

The projection checks accept swap_cases=True, which mis-applies the
two-case construction on purpose; the harness self-test uses it to
prove the suite would catch a broken selection rule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .flux import builtin_flux
from .oracles import enumerate_profiles, greedy_minimizer
from .projection import collapse_profiles, minimal_entropy_moment
from .scheme import run
from .state import (KineticField, SpatialGrid, VelocityGrid, from_macroscopic,
                    translate_distance)
from .transport import TransportConfig, transport_step

__all__ = ["PropertyResult", "run_property_suite", "report_csv"]

SLACK = 1e-10

# (cells_per_band, n_bands) pairs the random batches cycle through;
# the largest grid has 512 velocity cells.
GRID_SHAPES = [(2, 16), (4, 16), (8, 8), (2, 256), (4, 128), (8, 64)]


@dataclass
class PropertyResult:
    name: str
    cases: int
    violations: int
    worst_margin: float
    counterexample: str = ""

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _verbatim(profile: np.ndarray) -> str:
    return np.array2string(np.asarray(profile), threshold=np.inf,
                           max_line_width=100000, separator=", ")


class _Check:
    """Accumulates margins batch by batch; remembers the worst offender."""

    def __init__(self, name: str):
        self.name = name
        self.cases = 0
        self.violations = 0
        self.worst = np.inf
        self.counterexample = ""

    def add(self, margins: np.ndarray, profiles: np.ndarray | None = None):
        margins = np.atleast_1d(margins)
        self.cases += margins.size
        bad = margins < 0.0
        self.violations += int(np.count_nonzero(bad))
        batch_worst = float(margins.min()) if margins.size else np.inf
        if batch_worst < self.worst:
            self.worst = batch_worst
            if batch_worst < 0.0 and profiles is not None:
                self.counterexample = _verbatim(profiles[int(np.argmin(margins))])

    def result(self) -> PropertyResult:
        worst = self.worst if np.isfinite(self.worst) else 0.0
        return PropertyResult(self.name, self.cases, self.violations,
                              worst, self.counterexample)


def _random_profiles(rng: np.random.Generator, count: int, n_cells: int) -> np.ndarray:
    """A mix of dense, sparse, binary, and indicator-plus-noise profiles."""
    kinds = rng.integers(0, 4, size=count)
    out = rng.random((count, n_cells))
    sparse = rng.random((count, n_cells)) * (rng.random((count, n_cells)) < 0.3)
    binary = (rng.random((count, n_cells)) < rng.random((count, 1))).astype(float)
    fill = np.clip(rng.random((count, 1)) * n_cells - np.arange(n_cells), 0.0, 1.0)
    noisy = np.clip(fill + 0.2 * (rng.random((count, n_cells)) - 0.5), 0.0, 1.0)
    out[kinds == 1] = sparse[kinds == 1]
    out[kinds == 2] = binary[kinds == 2]
    out[kinds == 3] = noisy[kinds == 3]
    return out


def _nondecreasing_weights(rng: np.random.Generator, count: int, n_cells: int) -> np.ndarray:
    start = rng.uniform(-1.0, 1.0, size=(count, 1))
    steps = rng.random((count, n_cells)) * (rng.random((count, n_cells)) < 0.5)
    return start + np.cumsum(steps, axis=1)


def _projection_checks(checks: dict, F: np.ndarray, vgrid: VelocityGrid,
                       rng: np.random.Generator, swap_cases: bool,
                       binary_pairs: bool = True) -> None:
    m, dv, eps = vgrid.cells_per_band, vgrid.dv, vgrid.eps
    w = vgrid.band_weights().astype(float)
    M, info = collapse_profiles(F, m, swap_cases=swap_cases)

    mass_err = np.abs(M.sum(axis=1) - F.sum(axis=1)) * dv
    checks["mass_preservation"].add(1e-12 * vgrid.v_max - mass_err, F)

    defect = info["defect_cells"] * dv
    drop = info["drop_cells"] * dv
    checks["entropy_drop_sign"].add(drop + SLACK, F)
    checks["defect_entropy_control"].add((2.0 / eps) * drop - defect + SLACK, F)

    eta = _nondecreasing_weights(rng, 100, F.shape[1])
    conv = ((F - M) @ eta.T) * dv                  # (cases, 100)
    checks["monotone_weight_sign"].add(conv.min(axis=1) + SLACK, F)

    rho = F.sum(axis=1) * dv
    value = (M @ w) * dv
    optimum = np.array([minimal_entropy_moment(r, eps, vgrid.v_max * (1 + 1e-9))
                        for r in rho])
    checks["optimality"].add(SLACK - np.abs(value - optimum), F)
    greedy_prof = np.clip((rho / dv)[:, None] - np.arange(F.shape[1]), 0.0, 1.0)
    greedy_val = (greedy_prof @ w) * dv
    checks["greedy_oracle_match"].add(SLACK - np.abs(value - greedy_val), F)

    M2, _ = collapse_profiles(M, m, swap_cases=swap_cases)
    idem = np.abs(M2 - M).max(axis=1)
    checks["idempotence"].add(np.where(idem == 0.0, 0.0, -idem), M)

    if binary_pairs:
        B = (F > 0.5).astype(float)
        perm = rng.permutation(B.shape[0])
        MB, _ = collapse_profiles(B, m, swap_cases=swap_cases)
        lhs = np.abs(MB - MB[perm]).sum(axis=1) * dv
        rhs = np.abs(B - B[perm]).sum(axis=1) * dv
        checks["l1_contraction"].add(rhs - lhs + SLACK, B)


def _transport_checks(checks: dict, rng: np.random.Generator) -> None:
    fluxes = [
        builtin_flux("burgers"),
        builtin_flux("linear", [0.7]),
        builtin_flux("custom_polynomial", [list(rng.uniform(-1.0, 1.0, size=3))]),
    ]
    vgrid = VelocityGrid(1.0, 0.25, 4)
    for flux in fluxes:
        for bc in ("periodic", "outflow"):
            sgrid = SpatialGrid((32,), (1.0 / 32,), bc)
            values = rng.random(sgrid.extents + (vgrid.n_cells,))
            f = KineticField(values, vgrid, sgrid)
            dt = 0.9 * sgrid.dx[0] / max(flux.max_speed, 1e-12)
            cfg = TransportConfig(dt=dt)
            out = transport_step(f, flux, cfg)
            checks["transport_range"].add(
                np.array([out.values.min() + 1e-12, 1.0 + 1e-12 - out.values.max()]))
            if bc == "periodic":
                slice_mass = out.values.sum(axis=0) - values.sum(axis=0)
                rel = np.abs(slice_mass) / np.maximum(values.sum(axis=0), 1e-30)
                checks["transport_conservation"].add(1e-12 - rel)
                rolled = KineticField(np.roll(values, 5, axis=0), vgrid, sgrid)
                lhs = transport_step(rolled, flux, cfg).values
                rhs = np.roll(out.values, 5, axis=0)
                equal = np.array_equal(lhs, rhs)
                checks["transport_shift_equivariance"].add(
                    np.array([0.0 if equal else -np.abs(lhs - rhs).max()]))


def _scheme_checks(checks: dict) -> None:
    flux = builtin_flux("burgers")
    vgrid = VelocityGrid(1.0, 0.125, 4)
    sgrid = SpatialGrid((64,), (1.0 / 64,), "periodic")
    x = sgrid.axis_centers(0)
    rho0 = np.where(x < 0.3, 0.8, 0.2)
    f0 = from_macroscopic(rho0, vgrid, sgrid)
    dt = 0.9 * sgrid.dx[0] / flux.max_speed
    final, diag = run(f0, flux, TransportConfig(dt=dt), 0.2)
    mass = np.asarray(diag.mass_series)
    entropy = np.asarray(diag.entropy_series)
    checks["scheme_mass_constant"].add(
        1e-10 * mass[0] - np.abs(mass - mass[0]))
    checks["scheme_entropy_monotone"].add(
        -np.diff(entropy) + 1e-10 * (1.0 + entropy[0]))
    checks["scheme_budget"].add(
        np.array([diag.entropy_budget - diag.defect_total
                  + 1e-10 * (1.0 + entropy[0])]))

    shifted0 = KineticField(np.roll(f0.values, 7, axis=0), vgrid, sgrid)
    shifted_final = KineticField(np.roll(final.values, 7, axis=0), vgrid, sgrid)
    bound0 = translate_distance(shifted0, f0)
    bound_t = translate_distance(shifted_final, final)
    checks["scheme_translation_bound"].add(np.array([bound0 - bound_t + SLACK]))


def _exhaustive_checks(checks: dict, rng: np.random.Generator,
                       swap_cases: bool, max_binary_cells: int) -> None:
    # every {0,1} profile, projection invariants
    for m, n_cells in ((2, 8), (4, 12 if max_binary_cells >= 12 else 8)):
        vgrid = VelocityGrid(1.0, m / n_cells, m)
        F = enumerate_profiles(n_cells, (0.0, 1.0))
        _projection_checks(checks, F, vgrid, rng, swap_cases, binary_pairs=False)
        if n_cells <= 8:
            M, _ = collapse_profiles(F, m, swap_cases=swap_cases)
            dv = vgrid.dv
            lhs = np.abs(M[:, None, :] - M[None, :, :]).sum(axis=2) * dv
            rhs = np.abs(F[:, None, :] - F[None, :, :]).sum(axis=2) * dv
            checks["l1_contraction_all_pairs"].add((rhs - lhs).ravel() + SLACK)

    # every {0, 1/2, 1} profile on 9 cells against the enumerated optimum
    m, n_cells = 3, 9
    vgrid = VelocityGrid(1.0, m / n_cells, m)
    dv, w = vgrid.dv, vgrid.band_weights().astype(float)
    G = enumerate_profiles(n_cells, (0.0, 0.5, 1.0))
    values = (G @ w) * dv
    masses = G.sum(axis=1) * dv
    M, _ = collapse_profiles(G, m, swap_cases=swap_cases)
    proj_values = (M @ w) * dv
    greedy_vals = np.array([greedy_minimizer(r, vgrid)[1] for r in masses])
    checks["exhaustive_projection_optimum"].add(
        SLACK - np.abs(proj_values - greedy_vals), G)
    # group by mass class (multiples of dv/2) and compare class minima
    keys = np.rint(G.sum(axis=1) * 2).astype(int)
    for key in np.unique(keys):
        sel = keys == key
        enumerated = float(values[sel].min())
        greedy = float(greedy_minimizer(key * dv / 2.0, vgrid)[1])
        checks["exhaustive_greedy_is_optimal"].add(
            np.array([SLACK - abs(enumerated - greedy)]))


def run_property_suite(seed: int = 0, n_random: int = 10000,
                       exhaustive: bool = False,
                       swap_cases: bool = False) -> list:
    """Run every suite; returns a list of PropertyResult rows."""
    rng = np.random.default_rng(seed)
    names = [
        "mass_preservation", "entropy_drop_sign", "defect_entropy_control",
        "monotone_weight_sign", "optimality", "greedy_oracle_match",
        "idempotence", "l1_contraction", "l1_contraction_all_pairs",
        "exhaustive_projection_optimum", "exhaustive_greedy_is_optimal",
        "transport_range", "transport_conservation",
        "transport_shift_equivariance", "scheme_mass_constant",
        "scheme_entropy_monotone", "scheme_budget", "scheme_translation_bound",
    ]
    checks = {name: _Check(name) for name in names}

    per_shape = max(1, n_random // len(GRID_SHAPES))
    for m, n_bands in GRID_SHAPES:
        vgrid = VelocityGrid(1.0, 1.0 / n_bands, m)
        F = _random_profiles(rng, per_shape, vgrid.n_cells)
        _projection_checks(checks, F, vgrid, rng, swap_cases)

    _exhaustive_checks(checks, rng, swap_cases,
                       max_binary_cells=12 if exhaustive else 10)
    _transport_checks(checks, rng)
    if not swap_cases:
        _scheme_checks(checks)

    return [checks[name].result() for name in names if checks[name].cases > 0]


def report_csv(results) -> str:
    """CSV report: one row per check with counts and the worst slack."""
    lines = ["check,cases,violations,worst_margin"]
    for r in results:
        lines.append(f"{r.name},{r.cases},{r.violations},{r.worst_margin:.17g}")
    return "\n".join(lines) + "\n"
