import random
from dataclasses import replace

import numpy as np
import pytest

from decoplate import sweep
from decoplate.errors import DomainError
from decoplate.interference import GeometrySpec
from decoplate.output import csv_text
from decoplate.quantities import metre

TAU_D = 1.0378308918889961e-05
D_HEADLINE = 0.3815367451186197
Z_STAR = 9.876986695651208e-05


@pytest.fixture(scope="module")
def default_grid(electron_spec):
    return sweep.SweepGrid.spaced(electron_spec, 1e-5, 1e-3, 25, 1e-6, 1e-3, 25)


@pytest.fixture(scope="module")
def default_result(default_grid):
    return sweep.run_sweep(default_grid)


def test_single_point(electron_spec):
    res = sweep.run_sweep(sweep.SweepGrid((1e-4,), (1e-4,), electron_spec))
    (row,) = res.rows
    assert row.tau_d == pytest.approx(TAU_D, rel=1e-12)
    assert row.D_magnitude == pytest.approx(D_HEADLINE, rel=1e-12)
    assert abs(row.visibility - D_HEADLINE) < 1e-3


@pytest.mark.parametrize("dx", [(0.0, 1e-4), (1e-4, 1e-5), (), (-1e-4,)])
def test_bad_axes_rejected(electron_spec, dx):
    with pytest.raises(DomainError):
        sweep.SweepGrid((1e-4,), dx, electron_spec)


def test_visibility_strictly_increasing_in_height(electron_spec):
    grid = sweep.SweepGrid((1e-5, 1e-4, 1e-3), (1e-6, 1e-5, 1e-4), electron_spec)
    vis = sweep.run_sweep(grid).column("visibility").reshape(3, 3)
    assert np.all(np.diff(vis, axis=0) > 0)


def test_rows_are_z_major(default_grid, default_result):
    z = default_result.column("z_m").reshape(25, 25)
    dx = default_result.column("dx_m").reshape(25, 25)
    assert np.all(z == np.array(default_grid.z_values)[:, None])
    assert np.all(dx == np.array(default_grid.dx_values)[None, :])


def test_default_grid_monotone(default_result):
    vis = default_result.column("visibility").reshape(25, 25)
    assert np.all(np.diff(vis, axis=0) >= 0)
    assert np.all(np.diff(vis, axis=1) <= 0)
    assert np.all((vis >= 0) & (vis <= 1))


def test_visibility_tracks_coherence(default_result):
    vis = default_result.column("visibility")
    mag = default_result.column("d_magnitude")
    assert np.max(np.abs(vis - mag)) <= 1e-3


def test_saturating_plateau(electron_spec):
    ell = metre(2e-5)
    dxs = tuple(np.geomspace(10 * ell.value, 1e-2, 7))
    res = sweep.run_sweep(sweep.SweepGrid((1e-4,), dxs, electron_spec), "saturating", ell)
    vis = res.column("visibility")
    assert (vis.max() - vis.min()) / vis.min() <= 0.01
    # far below the quadratic prediction at the same separations
    quad = sweep.run_sweep(sweep.SweepGrid((1e-4,), dxs, electron_spec)).column("visibility")
    assert np.all(quad < vis)


def test_order_independence(electron_spec):
    grid = sweep.SweepGrid(tuple(np.geomspace(1e-5, 1e-3, 4)), tuple(np.geomspace(1e-6, 1e-3, 5)),
                           electron_spec)
    points = [(z, dx) for z in grid.z_values for dx in grid.dx_values]
    shuffled = points[:]
    random.Random(0).shuffle(shuffled)
    rows = [sweep.evaluate_point(electron_spec, z, dx) for z, dx in shuffled]
    rows.sort(key=lambda r: (r.z, r.dx))
    assert tuple(rows) == sweep.run_sweep(grid).rows
    assert sweep.run_sweep(grid, workers=3).rows == sweep.run_sweep(grid).rows


def test_mass_independence_of_visibility(electron_spec, proton_spec):
    grid_e = sweep.SweepGrid.spaced(electron_spec, 1e-5, 1e-3, 6, 1e-6, 1e-3, 6)
    grid_p = sweep.SweepGrid.spaced(proton_spec, 1e-5, 1e-3, 6, 1e-6, 1e-3, 6)
    ve = sweep.run_sweep(grid_e).column("visibility")
    vp = sweep.run_sweep(grid_p).column("visibility")
    assert np.max(np.abs(ve - vp)) <= 1e-6


def test_csv_deterministic(default_grid):
    a = csv_text(sweep.COLUMNS, (r.values() for r in sweep.run_sweep(default_grid).rows))
    b = csv_text(sweep.COLUMNS, (r.values() for r in sweep.run_sweep(default_grid, workers=4).rows))
    assert a == b
    assert a.splitlines()[0] == "z_m,dx_m,tau_r_s,tau_d_s,t_flight_s,d_magnitude,visibility"


def test_crossover_curve(electron_spec):
    grid = sweep.SweepGrid((1e-4,), (1e-5, 2.5e-5, 4e-5, 1e-4, 8e-4), electron_spec)
    curve = dict(sweep.crossover_curve(grid))
    assert curve[1e-4] == pytest.approx(Z_STAR, rel=1e-12)
    assert curve[4e-5] / curve[1e-5] == pytest.approx(4 ** (2 / 3), rel=1e-12)
    assert curve[8e-4] / curve[1e-4] == pytest.approx(4, rel=1e-12)
    dx = np.array(list(curve))
    z = np.array(list(curve.values()))
    assert np.allclose(z / dx ** (2 / 3), z[0] / dx[0] ** (2 / 3), rtol=1e-12)


def test_point_error_names_grid_point(electron_spec):
    bad = replace(electron_spec, geometry=GeometrySpec(n_samples=16, window=1e-9))
    with pytest.raises(DomainError, match="z=0.0001"):
        sweep.run_sweep(sweep.SweepGrid((1e-4,), (1e-4,), bad))


def test_linear_spacing(electron_spec):
    grid = sweep.SweepGrid.spaced(electron_spec, 1e-5, 1e-3, 3, 1e-6, 1e-3, 2, "linear")
    assert grid.z_values == pytest.approx((1e-5, 5.05e-4, 1e-3))
    with pytest.raises(DomainError):
        sweep.SweepGrid.spaced(electron_spec, 1e-5, 1e-3, 3, 1e-6, 1e-3, 2, "cubic")
