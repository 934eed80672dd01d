"""The band-entropy projection against its oracles and inequalities.

Expected values for the worked profiles were computed with the greedy
bottom-up fill (see kinshock.oracles.greedy_minimizer), which is the
exact optimum of the discrete problem, and are frozen here.
"""

import numpy as np
import pytest

import kinshock as ks
from kinshock.projection import collapse_profiles


@pytest.fixture
def grid_02():
    # dv = 0.025, eps = 0.05, v_max = 0.2: the worked 8-cell examples
    return ks.VelocityGrid(0.2, 0.05, 2)


# ── band index and entropy moment ──────────────────────────────────────

def test_band_index_values():
    assert ks.band_index(0.0, 0.05) == 0
    assert ks.band_index(0.12, 0.05) == 2
    assert ks.band_index(0.05, 0.05) == 1          # half-open bands
    with pytest.raises(ValueError):
        ks.band_index(-0.01, 0.05)
    with pytest.raises(ValueError):
        ks.band_index(0.3, 0.05, v_max=0.2)


def test_entropy_moment_band_indicators(grid_02):
    zero = np.zeros(8)
    assert ks.entropy_moment(zero, grid_02) == 0.0
    low_two_bands = np.array([1.0, 1, 1, 1, 0, 0, 0, 0])   # [0, 2 eps]
    assert ks.entropy_moment(low_two_bands, grid_02) == pytest.approx(0.05, abs=1e-15)
    second_band = np.array([0.0, 0, 1, 1, 0, 0, 0, 0])     # [eps, 2 eps]
    assert ks.entropy_moment(second_band, grid_02) == pytest.approx(0.05, abs=1e-15)


# ── minimal value against the greedy oracle ────────────────────────────

def test_minimal_entropy_moment_frozen_values():
    eps = 0.05
    assert ks.minimal_entropy_moment(0.5 * eps, eps) == 0.0
    assert ks.minimal_entropy_moment(2.5 * eps, eps) == pytest.approx(2 * eps, abs=1e-15)
    assert ks.minimal_entropy_moment(3.0 * eps, eps) == pytest.approx(3 * eps, abs=1e-12)
    with pytest.raises(ValueError):
        ks.minimal_entropy_moment(-0.1, eps)
    with pytest.raises(ValueError):
        ks.minimal_entropy_moment(1.5, eps, v_max=1.0)


def test_minimal_value_matches_greedy_everywhere():
    vgrid = ks.VelocityGrid(1.0, 0.125, 4)
    for rho in np.linspace(0.0, 1.0, 101):
        _, greedy_value = ks.greedy_minimizer(rho, vgrid)
        direct = ks.minimal_entropy_moment(rho, vgrid.eps, vgrid.v_max)
        assert abs(direct - greedy_value) <= 1e-12


def test_minimal_value_continuous_at_band_boundaries():
    eps = 0.05
    for n in range(1, 5):
        below = ks.minimal_entropy_moment(n * eps - 1e-13, eps)
        at = ks.minimal_entropy_moment(n * eps, eps)
        assert abs(below - at) < 1e-11


# ── worked projection profiles ─────────────────────────────────────────

def test_project_trim_case(grid_02):
    out = ks.project_slice(np.array([1.0, 1, 0, 0, 1, 1, 0, 0]), grid_02)
    assert np.array_equal(out.projected, [1.0, 1, 1, 1, 0, 0, 0, 0])
    assert out.case == "trim"
    assert out.band == 2
    assert out.band_threshold == 0.0        # ones region ends exactly at 2*eps
    assert out.defect_l1 == pytest.approx(0.1, abs=1e-14)   # 2 * holes


def test_project_fill_case(grid_02):
    out = ks.project_slice(np.array([1.0, 0, 0, 0, 0, 0, 1, 1]), grid_02)
    assert np.array_equal(out.projected, [1.0, 1, 1, 0, 0, 0, 0, 0])
    assert out.case == "fill"
    assert out.band == 1
    assert out.band_threshold == pytest.approx(0.025, abs=1e-14)


def test_project_identity_case(grid_02):
    slice_ = np.array([1.0, 1, 1, 1, 0.3, 0.7, 0, 0])       # junk only in band 2
    out = ks.project_slice(slice_, grid_02)
    assert out.case == "identity"
    assert np.array_equal(out.projected, slice_)
    assert out.defect_l1 == 0.0


def test_project_rejects_out_of_range(grid_02):
    with pytest.raises(ValueError):
        ks.project_slice(np.full(8, 1.5), grid_02)


def test_projected_moment_equals_minimum(grid_02):
    rng = np.random.default_rng(5)
    for _ in range(50):
        profile = rng.random(8)
        out = ks.project_slice(profile, grid_02)
        rho = profile.sum() * grid_02.dv
        assert ks.entropy_moment(out.projected, grid_02) == pytest.approx(
            ks.minimal_entropy_moment(rho, grid_02.eps, grid_02.v_max), abs=1e-12)
        assert out.projected.sum() * grid_02.dv == pytest.approx(rho, abs=1e-13)
        assert 0.0 <= out.band_threshold <= grid_02.eps


# ── field projection ───────────────────────────────────────────────────

def test_project_field_indicator_data_is_identity():
    vgrid = ks.VelocityGrid(1.0, 0.125, 4)
    sgrid = ks.SpatialGrid((10,), (0.1,))
    rho0 = np.linspace(0.05, 0.95, 10)
    f = ks.from_macroscopic(rho0, vgrid, sgrid)
    projected, summary = ks.project_field(f)
    assert np.array_equal(projected.values, f.values)
    assert summary.defect_l1 == 0.0
    assert summary.case_counts["identity"] == 10


def test_project_field_all_ones_fixed():
    vgrid = ks.VelocityGrid(1.0, 0.25, 4)
    sgrid = ks.SpatialGrid((4,), (0.25,))
    f = ks.KineticField(np.ones((4, 16)), vgrid, sgrid)
    projected, summary = ks.project_field(f)
    assert np.array_equal(projected.values, f.values)
    assert summary.entropy_drop == 0.0


def test_project_field_matches_slice_projection(grid_02):
    profile = np.array([1.0, 0, 0, 0, 0, 0, 1, 1])
    sgrid = ks.SpatialGrid((3,), (1.0,))
    f = ks.KineticField(np.tile(profile, (3, 1)), grid_02, sgrid)
    projected, summary = ks.project_field(f)
    single = ks.project_slice(profile, grid_02)
    for cell in range(3):
        assert np.array_equal(projected.values[cell], single.projected)
    assert summary.defect_l1 == pytest.approx(3 * single.defect_l1 * sgrid.dx[0],
                                              abs=1e-14)


# ── inequality properties on random profiles ───────────────────────────

@pytest.mark.parametrize("cells_per_band,n_bands", [(2, 8), (4, 8), (8, 4)])
def test_projection_inequalities_randomized(cells_per_band, n_bands):
    rng = np.random.default_rng(cells_per_band * 100 + n_bands)
    vgrid = ks.VelocityGrid(1.0, 1.0 / n_bands, cells_per_band)
    n = vgrid.n_cells
    F = rng.random((500, n))
    M, info = collapse_profiles(F, cells_per_band)
    dv, eps = vgrid.dv, vgrid.eps

    defect = info["defect_cells"] * dv
    drop = info["drop_cells"] * dv
    assert drop.min() >= -1e-12
    assert np.all(defect <= (2.0 / eps) * drop + 1e-10)
    assert np.abs((M - F).sum(axis=1)).max() * dv <= 1e-12

    # non-decreasing step weights never see the projection as an increase
    steps = np.cumsum(rng.random((100, n)) * (rng.random((100, n)) < 0.5), axis=1)
    assert (((F - M) @ steps.T) * dv).min() >= -1e-10

    # idempotence is exact
    M2, _ = collapse_profiles(M, cells_per_band)
    assert np.array_equal(M2, M)


def test_contraction_on_binary_profiles():
    rng = np.random.default_rng(99)
    vgrid = ks.VelocityGrid(1.0, 0.125, 4)
    n = vgrid.n_cells
    F = (rng.random((400, n)) < rng.random((400, 1))).astype(float)
    G = (rng.random((400, n)) < rng.random((400, 1))).astype(float)
    MF, _ = collapse_profiles(F, 4)
    MG, _ = collapse_profiles(G, 4)
    lhs = np.abs(MF - MG).sum(axis=1) * vgrid.dv
    rhs = np.abs(F - G).sum(axis=1) * vgrid.dv
    assert np.all(lhs <= rhs + 1e-10)


def test_exhaustive_binary_profiles_small_grid():
    vgrid = ks.VelocityGrid(1.0, 0.25, 2)       # 8 cells
    F = ks.enumerate_profiles(8, (0.0, 1.0))
    M, info = collapse_profiles(F, 2)
    dv, eps = vgrid.dv, vgrid.eps
    w = vgrid.band_weights().astype(float)
    assert np.abs((M - F).sum(axis=1)).max() * dv <= 1e-12
    assert np.all(info["defect_cells"] * dv
                  <= (2.0 / eps) * info["drop_cells"] * dv + 1e-10)
    values = (M @ w) * dv
    for row in range(F.shape[0]):
        rho = F[row].sum() * dv
        assert abs(values[row] - ks.greedy_minimizer(rho, vgrid)[1]) <= 1e-10
