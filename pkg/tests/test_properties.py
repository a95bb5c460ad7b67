"""Invariants across the parameter sweep eps x geometry."""

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import marshak_bc_residuals, pde_residuals
from marshak_bench import DimensionlessProblem, build_series
from marshak_bench.model import beta_squared
from marshak_bench.roots import scaled_residual

EPSILONS = (0.05, 0.1, 0.5)
GEOMETRIES = (("slab", 0.5), ("slab", 1.0), ("slab", 2.0), ("shell", (1.0, 2.0)), ("shell", (2.0, 3.0)))
TAUS = np.concatenate([[0.01, 0.02], np.linspace(0.05, 20.0, 60)])


def make(kind, g, eps):
    return DimensionlessProblem.slab(g, eps) if kind == "slab" else DimensionlessProblem.shell(*g, eps)


CASES = [make(k, g, e) for e, (k, g) in itertools.product(EPSILONS, GEOMETRIES)]
IDS = [f"{p.kind}{p.geometry.bounds}-eps{p.eps}" for p in CASES]


@pytest.fixture(scope="module", params=CASES, ids=IDS)
def case(request):
    problem = request.param
    series = build_series(problem, 30)
    lo, hi = problem.geometry.bounds
    x = np.linspace(lo, hi, 41)
    u = np.array([series.evaluate_fields(x, t)[0] for t in TAUS])
    v = np.array([series.evaluate_fields(x, t)[1] for t in TAUS])
    tol = np.array([series.truncation_bound(x, t) for t in TAUS])
    return problem, series, x, u, v, tol


def test_root_residuals(case):
    problem, series, *_ = case
    assert scaled_residual(problem, series.roots.roots).max() <= 1e-12


def test_poles_real_negative_and_on_the_dispersion_curve(case):
    problem, series, *_ = case
    s = series.poles.s
    assert np.all(np.isreal(s)) and np.all(s < 0)
    np.testing.assert_allclose(beta_squared(s, problem.eps), series.poles.beta**2, rtol=1e-9)


@pytest.mark.parametrize("tau", [0.01, 0.1, 1.0, 10.0])
def test_boundary_residuals(case, tau):
    _, series, *_ = case
    lo, hi = marshak_bc_residuals(series, tau)
    tol = series.truncation_bound(np.array(series.bounds), tau).max()
    assert lo <= max(tol, 1e-12) and hi <= max(tol, 1e-12)


def test_material_lags_radiation(case):
    *_, u, v, tol = case
    assert np.all(v <= u + 2 * tol)


def test_monotone_heating(case):
    *_, u, v, tol = case
    slack = tol[1:] + tol[:-1]
    assert np.all(np.diff(u, axis=0) >= -slack)
    assert np.all(np.diff(v, axis=0) >= -slack)


def test_bounded_between_zero_and_one(case):
    *_, u, v, tol = case
    assert np.all(u >= -tol) and np.all(u <= 1 + tol)
    assert np.all(v >= -tol) and np.all(v <= 1 + tol)


def test_pde_residual_second_order(case):
    problem, series, *_ = case
    lo, hi = problem.geometry.bounds
    w = hi - lo
    x = np.linspace(lo + 0.2 * w, hi - 0.2 * w, 5)
    coarse = pde_residuals(series, x, 1.0, 0.02 * w)
    fine = pde_residuals(series, x, 1.0, 0.01 * w)
    for c, f in zip(coarse, fine):
        assert 3.0 < c / f < 5.0


@given(
    b=st.floats(0.2, 3.0),
    eps=st.floats(0.01, 1.0),
    tau=st.floats(0.05, 30.0),
    frac=st.floats(0.0, 1.0),
)
def test_random_slab_points_stay_physical(b, eps, tau, frac):
    series = build_series(DimensionlessProblem.slab(b, eps), 30)
    x = frac * b
    u, v = series.evaluate_fields(x, tau)
    tol = series.truncation_bound(x, tau)
    assert -tol <= v <= u + 2 * tol
    assert u <= 1 + tol
