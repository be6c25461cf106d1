"""Smoke tests for the python bindings, including sympy-based oracles for the
correction sources."""

import math

import numpy as np
import pytest
import sympy as sp

import iawlab


@pytest.fixture(scope="module")
def grid():
    return iawlab.make_grid(2.0 * math.pi, 64)


def test_grid_properties(grid):
    assert grid.n == 64
    assert grid.spacing == pytest.approx(2.0 * math.pi / 64)
    k = grid.wavenumbers
    assert k[1] == pytest.approx(1.0)
    assert k[-1] == pytest.approx(-1.0)


def test_deriv_sin(grid):
    x = grid.points
    d = iawlab.deriv(grid, np.sin(x), 1)
    assert np.max(np.abs(d - np.cos(x))) < 1e-12


def test_antideriv_reports_mean(grid):
    x = grid.points
    f = np.cos(x) + 0.7
    g, mean = iawlab.antideriv_zero_mean(grid, f)
    assert mean == pytest.approx(0.7)
    assert np.max(np.abs(g - np.sin(x))) < 1e-12


def test_norms_closed_form(grid):
    l2, linf, mean = iawlab.norms(grid, np.ones(grid.n))
    assert l2 == pytest.approx(math.sqrt(2.0 * math.pi))
    assert linf == 1.0
    assert mean == pytest.approx(1.0)


def test_poisson_single_mode(grid):
    x = grid.points
    eps, k, a = 0.07, 3.0, 0.2
    rho = 1.0 + a * np.cos(k * x)
    phi = iawlab.poisson_solve(grid, rho, eps)
    gain = 1.0 / (eps * eps * k * k + eps)
    assert np.max(np.abs(phi - a * gain * np.cos(k * x))) < 1e-12 * a * gain


def test_n1_source_against_sympy():
    g = iawlab.make_grid(2.0 * math.pi, 32)
    x = g.points

    xs = sp.symbols("x")
    U0 = sp.sin(xs)
    dtU0 = -sp.Rational(1, 2) * sp.diff(U0, xs, 3) - sp.Rational(3, 2) * U0 * sp.diff(U0, xs)
    N1 = (sp.Rational(1, 4) * sp.diff(dtU0, xs, 2)
          - sp.Rational(1, 4) * U0 * dtU0
          - sp.Rational(1, 4) * sp.diff(U0, xs, 5)
          - sp.Rational(1, 8) * sp.diff(U0**2, xs, 3)
          - sp.Rational(1, 2) * sp.diff(
              (-sp.Rational(1, 2) * sp.diff(U0, xs, 2) + sp.Rational(1, 4) * U0**2) * U0, xs)
          - sp.Rational(5, 6) * sp.diff(U0, xs))
    expected = sp.lambdify(xs, sp.simplify(N1), "numpy")(x)

    got = iawlab.n1_source(g, np.sin(x))
    assert np.max(np.abs(got - expected)) < 1e-10


def test_n2_source_against_sympy():
    g = iawlab.make_grid(2.0 * math.pi, 64)
    x = g.points

    xs = sp.symbols("x")
    U0, U1 = sp.sin(xs), sp.cos(xs)
    rho2, theta2 = sp.sin(2 * xs), sp.cos(3 * xs)
    N2 = (-U1 * sp.diff(U1, xs) - sp.diff(rho2, xs)
          + sp.Rational(1, 3) * U0 * sp.diff(U0, xs)
          - sp.Rational(2, 3) * sp.diff(theta2, xs))
    expected = sp.lambdify(xs, sp.simplify(N2), "numpy")(x)

    got = iawlab.n2_source(g, np.sin(x), np.cos(x), np.sin(2 * x), np.cos(3 * x))
    assert np.max(np.abs(got - expected)) < 1e-10


def test_kdv_soliton_short_run():
    g = iawlab.make_grid(40.0 * math.pi, 512)
    init = iawlab.soliton_exact(g, 0.5, 0.0)
    times, snaps = iawlab.kdv_solve(g, init, T=0.2, dt=1e-3, stride=200)
    ref = iawlab.soliton_exact(g, 0.5, times[-1])
    l2_err, _, _ = iawlab.norms(g, snaps[-1] - ref)
    l2_ref, _, _ = iawlab.norms(g, ref)
    assert l2_err / l2_ref < 1e-7

    m0, p0, h0 = iawlab.kdv_invariants(g, snaps[0])
    m1, p1, h1 = iawlab.kdv_invariants(g, snaps[-1])
    assert abs(m1 - m0) < 1e-9 * abs(m0)
    assert abs(p1 - p0) < 1e-9 * abs(p0)
    assert abs(h1 - h0) < 1e-9 * abs(h0)


def test_hierarchy_residuals_small_run():
    g = iawlab.make_grid(40.0 * math.pi, 512)
    init = iawlab.soliton_exact(g, 0.5, 0.0)
    traj = iawlab.solve_hierarchy(g, init, T=0.1, dt=1e-3, stride=2)
    res = iawlab.hierarchy_residuals(traj)
    assert res["poisson1"] == 0.0
    assert res["mass3"] < 1e-5
    assert res["velocity4"] < 1e-5

    r = iawlab.profile_residuals(traj, 0.1)
    r2 = iawlab.profile_residuals(traj, 0.05)
    assert 6.0 < r["mass"] / r2["mass"] < 11.0
    assert 11.0 < r["poisson"] / r2["poisson"] < 22.0


def test_ep_mode_frequency_value():
    eps, k = 0.1, 5.0
    g = 1.0 / (eps**2 * (1.0 + eps * k * k))
    assert iawlab.ep_mode_frequency(k, eps) == pytest.approx(k * (1 / eps + math.sqrt(5 / 3 + g)))


def test_run_fluid_equilibrium():
    g = iawlab.make_grid(2.0 * math.pi, 64)
    out = iawlab.run_fluid(g, np.ones(g.n), np.zeros(g.n), 1.5 * np.ones(g.n),
                           epsilon=0.1, T=0.2, dt=1e-2, stride=10)
    assert max(abs(m) for m in out["mass_mean"]) < 1e-14
    assert np.max(np.abs(out["rho"][-1] - 1.0)) < 1e-14


def test_fit_order_power_law():
    slope, intercept, stderr = iawlab.fit_order([(0.1, 5e-3), (0.05, 6.25e-4), (0.025, 7.8125e-5)])
    assert slope == pytest.approx(3.0)
    assert intercept == pytest.approx(math.log(5.0))
    assert stderr < 1e-12


def test_delta_and_regime():
    assert iawlab.delta_from_nu(0.01, 0.01) == pytest.approx(1e-5)
    r = iawlab.check_regime(0.01, 0.01, band="finite")
    assert r["in_band"] and r["in_main_band"]
    r3 = iawlab.check_regime(0.01, 1e-6, band="global")
    assert r3["in_band"] and r3["on_lower_boundary"]
    assert not iawlab.check_regime(0.01, 1e-8, band="global")["in_band"]


def test_lab_frame_round_trip():
    eps = 0.25
    gs = iawlab.make_grid(2.0 * math.pi, 64)
    gl = iawlab.make_grid(2.0 * math.pi / math.sqrt(eps), 128)
    x = gs.points
    rho = 1.0 + 0.1 * np.cos(2 * x)
    u1 = 0.3 * np.sin(x)
    theta = 1.5 + 0.05 * np.sin(3 * x)
    phi = 0.2 * np.cos(x)
    lab = iawlab.to_lab_frame(gs, rho, u1, theta, phi, eps, 1.3, gl)
    back = iawlab.from_lab_frame(gl, *lab, eps, 1.3, gs)
    assert np.max(np.abs(back[0] - rho)) < 1e-10
    assert np.max(np.abs(back[1] - u1)) < 1e-10
