import math

import numpy as np
import pytest

import rotaflow


def cosine(grid):
    theta = np.asarray(grid.nodes(0))
    return np.cos(2 * np.pi * theta)


def test_heat_propagate_single_mode():
    grid = rotaflow.PeriodicGrid([1.0], [64])
    out = rotaflow.heat_propagate(grid, cosine(grid), 0.01)
    assert out.shape == (64,)
    np.testing.assert_allclose(out, math.exp(-4 * math.pi**2 * 0.01) * cosine(grid), atol=1e-14)


def test_burgers_conserves_mean_and_relaxes():
    grid = rotaflow.PeriodicGrid([1.0], [128])
    r0 = 1.0 + 0.3 * cosine(grid)
    traj = rotaflow.evolve(grid, r0, rotaflow.FluxSpec.burgers(1), 1e-3, 1.0, 100)
    assert traj["max_principle_ok"] and traj["positivity_ok"]
    assert len(traj["times"]) == 11
    final = traj["radii"][-1]
    assert abs(final.mean() - 1.0) < 1e-12
    assert np.max(np.abs(final - 1.0)) < 1e-6


def test_two_dimensional_arrays_keep_grid_shape():
    grid = rotaflow.PeriodicGrid([1.0, 2.0], [16, 8])
    x = np.asarray(grid.nodes(0))[:, None]
    y = np.asarray(grid.nodes(1))[None, :]
    f = np.sin(2 * np.pi * x) * np.cos(np.pi * y)
    out = rotaflow.heat_propagate(grid, f, 0.002)
    assert out.shape == (16, 8)
    np.testing.assert_allclose(out, math.exp(-5 * math.pi**2 * 0.002) * f, atol=1e-14)


def test_duhamel_constants():
    assert abs(rotaflow.contraction_horizon(1.0, 2.0, 1) - math.pi / 64) < 1e-12
    assert abs(rotaflow.kernel_gradient_l1(1.0) - 1 / math.sqrt(math.pi)) < 1e-8
    assert rotaflow.flux_bound_H(rotaflow.FluxSpec.burgers(1), 1.0, 1) == pytest.approx(2.0)


def test_picard_matches_spectral():
    grid = rotaflow.PeriodicGrid([1.0], [64])
    r0 = 1.0 + 0.2 * np.sin(2 * np.pi * np.asarray(grid.nodes(0)))
    spec = rotaflow.FluxSpec.burgers(1)
    rep = rotaflow.picard_solve(grid, r0, spec)
    assert rep["converged"]
    n = math.ceil(rep["T"] / 1e-4)
    traj = rotaflow.evolve(grid, r0, spec, rep["T"] / n, rep["T"], n)
    assert np.max(np.abs(rep["final"] - traj["radii"][-1])) < 1e-4


def test_cell_problem_closed_form():
    grid = rotaflow.PeriodicGrid([1.0], [128])
    spec = rotaflow.FluxSpec.constant([1.0]).with_modulation(0, 0.0, [[1]], [0.0], [1.0])
    sol = rotaflow.solve_cell(spec, grid, 1.0)
    theta = np.asarray(grid.nodes(0))
    shape = np.exp(-np.cos(2 * np.pi * theta) / (2 * np.pi))
    np.testing.assert_allclose(sol["v"], shape / shape.mean(), atol=1e-10)
    assert sol["residual"] < 1e-10


def test_ellipse_reconstruction():
    grid = rotaflow.PeriodicGrid([1.0], [64])
    r, P = rotaflow.ellipse(grid, 2.0, 1.0)
    assert P.shape == (64, 2)
    x = rotaflow.reconstruct(grid, r, P)
    theta = np.asarray(grid.nodes(0))
    np.testing.assert_allclose(x[:, 0], 2 * np.cos(2 * np.pi * theta), atol=1e-14)
    np.testing.assert_allclose(x[:, 1], np.sin(2 * np.pi * theta), atol=1e-14)


def test_errors_are_translated():
    with pytest.raises(ValueError):
        rotaflow.PeriodicGrid([1.0], [7])
    with pytest.raises(rotaflow.ConfigError):
        rotaflow.config_hash("grid.m = 1\nnot a line\n")
    grid = rotaflow.PeriodicGrid([1.0], [64])
    with pytest.raises(rotaflow.SolverError):
        rotaflow.evolve(grid, 1.0 + 0.3 * cosine(grid), rotaflow.FluxSpec.burgers(1), 0.1, 0.2)


def test_config_hash_is_stable():
    a = rotaflow.config_hash("grid.m = 1\nsolver.dt = 1e-3\n")
    b = rotaflow.config_hash("# comment\ngrid.m = 1\n\nsolver.dt = 0.001\n")
    assert a == b and len(a) == 16


def test_verify_suite():
    res = rotaflow.run_verify("heat")
    assert res["passed"]
    assert {c["criterion"] for c in res["checks"]} == {1, 2}
