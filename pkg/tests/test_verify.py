import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from marshak_bench import DimensionlessProblem, build_series
from marshak_bench.model import DomainError, FieldSnapshot
from marshak_bench.planar import eps0_initial_profile, steady_profile
from marshak_bench.spherical import steady_profile_shell
from marshak_bench.verify import (
    compare,
    convergence_study,
    invert_numerically,
    laplace_space_u,
    laplace_space_v,
    stehfest,
    stehfest_coefficients,
)

SLAB = DimensionlessProblem.slab(1.0, 0.1)
SHELL = DimensionlessProblem.shell(1.0, 2.0, 0.1)


def test_stehfest_weights_sum_to_zero():
    for n in (10, 14, 18):
        assert sum(stehfest_coefficients(n)) == 0


def test_self_test_on_exponential():
    assert abs(stehfest(lambda s: 1 / (s + 1), 1.0) - math.exp(-1)) <= 1e-8


def test_self_test_on_ramp():
    assert stehfest(lambda s: 1 / s**2, 2.5) == pytest.approx(2.5, rel=1e-8)


def test_term_count_validation():
    with pytest.raises(DomainError):
        invert_numerically(0.5, 1.0, SLAB, terms=11)
    with pytest.raises(DomainError):
        invert_numerically(0.5, 1.0, SLAB, terms=20)
    with pytest.raises(DomainError):
        invert_numerically(0.5, 0.0, SLAB)
    with pytest.raises(DomainError):
        laplace_space_u(0.5, -1.0, SLAB)


@pytest.mark.parametrize("problem", [SLAB, SHELL], ids=["slab", "shell"])
def test_small_s_limit_gives_steady_profile(problem):
    x = np.linspace(*problem.geometry.bounds, 7)
    s = 1e-9
    steady = steady_profile(x, 1.0)[0] if problem.kind == "slab" else steady_profile_shell(x, 1.0, 2.0)[0]
    np.testing.assert_allclose(s * laplace_space_u(x, s, problem), steady, rtol=1e-6)


def test_large_s_limit_vanishes_with_retardation():
    x = np.linspace(0, 1, 5)
    assert np.all(np.abs(1e8 * laplace_space_u(x[1:], 1e8, SLAB)) < 1e-6)


def test_large_s_limit_without_retardation():
    x = np.linspace(0, 1, 5)
    s = 1e9
    np.testing.assert_allclose(s * laplace_space_u(x, s, DimensionlessProblem.slab(1.0, 0.0)),
                               eps0_initial_profile(x, 1.0), rtol=1e-6)


def test_transform_overflow_safe():
    assert np.isfinite(laplace_space_u(0.3, 1e12, DimensionlessProblem.slab(50.0))).all()


@pytest.mark.parametrize("problem", [SLAB, SHELL], ids=["slab", "shell"])
@given(s=st.floats(0.05, 50.0))
def test_transform_satisfies_s_space_equation(problem, s):
    lo, hi = problem.geometry.bounds
    x = np.linspace(lo + 0.2, hi - 0.2, 4)
    h = 1e-3
    u = lambda xx: laplace_space_u(xx, s, problem)  # noqa: E731
    uxx = (u(x + h) - 2 * u(x) + u(x - h)) / h**2
    if problem.kind == "shell":
        uxx = uxx + (2 / x) * (u(x + h) - u(x - h)) / (2 * h)
    # eps s ubar = ubar'' + vbar - ubar, with vbar = ubar / (s + 1); the source is the boundary
    res = problem.eps * s * u(x) - uxx - laplace_space_v(x, s, problem) + u(x)
    assert np.abs(res).max() <= 1e-5 * (1 + np.abs(u(x)).max())


@pytest.mark.parametrize("problem", [SLAB, SHELL], ids=["slab", "shell"])
def test_s_space_equation_at_tight_tolerance(problem):
    # fourth-order stencil in mpmath-free double arithmetic at a few s
    lo, hi = problem.geometry.bounds
    x = np.linspace(lo + 0.25, hi - 0.25, 3)
    h = 2e-3
    for s in (0.1, 1.0, 10.0):
        f = lambda xx: laplace_space_u(xx, s, problem)  # noqa: E731
        uxx = (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h**2)
        if problem.kind == "shell":
            ux = (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)
            uxx = uxx + 2 / x * ux
        res = problem.eps * s * f(x) - uxx - laplace_space_v(x, s, problem) + f(x)
        assert np.abs(res).max() <= 1e-8


def test_double_and_extended_transforms_agree():
    from marshak_bench.verify import _planar_ubar

    for s in (0.01, 1.0, 100.0):
        hi = _planar_ubar(mpmath.mpf(0.3), mpmath.mpf(s), mpmath.mpf(1), mpmath.mpf(0.1), mpmath)
        assert float(hi) == pytest.approx(float(laplace_space_u(0.3, s, SLAB)), rel=1e-13)


@pytest.mark.parametrize("problem,x", [(SLAB, 0.0), (SLAB, 0.5), (SHELL, 1.5)], ids=["slab0", "slab05", "shell"])
def test_inversion_agrees_with_series(problem, x):
    series = build_series(problem, 30)
    res = invert_numerically(x, 1.0, problem)
    u, v = series.evaluate_fields(x, 1.0)
    assert abs(res.u - u) <= 1e-5 and abs(res.v - v) <= 1e-5
    assert res.stable


def test_inversion_late_time_is_steady():
    res = invert_numerically(0.4, 100.0, SLAB)
    assert res.u == pytest.approx(steady_profile(0.4, 1.0)[0], abs=1e-6)


def test_instability_flag():
    res = invert_numerically(0.0, 0.01, SLAB, terms=10, tol=1e-12)
    assert not res.stable and res.spread > 1e-12


def _snap(u, x=None, tau=1.0):
    x = np.linspace(0, 1, len(u)) if x is None else x
    u = np.asarray(u, dtype=float)
    return FieldSnapshot(tau, x, u, u, u, u)


def test_compare_identical_inputs():
    rep = compare(_snap([0.5, 0.25, 0.0]), _snap([0.5, 0.25, 0.0]), 1e-12)
    assert rep.max_abs == 0 and rep.max_rel == 0 and rep.passed


def test_compare_relative_floor_and_norms():
    rep = compare(_snap([1.0, 0.0, 2.0]), _snap([1.1, 1e-14, 2.0]), 0.05)
    np.testing.assert_allclose(rep.rel_err, [0.1 / 1.1, 1e-14 / 1e-12, 0.0])
    assert rep.max_rel == pytest.approx(0.1 / 1.1)
    assert rep.mean_abs == pytest.approx(np.mean(rep.abs_err))
    assert not rep.passed
    assert "FAIL" in rep.summary()


def test_compare_grid_mismatch():
    a = _snap([0.0, 1.0, 2.0])
    b = _snap([0.0, 2.0], x=np.array([0.0, 1.0]))
    with pytest.raises(DomainError):
        compare(a, b, 0.1)
    rep = compare(a, b, 0.1, interpolate=True)
    assert rep.max_abs == 0.0


def test_convergence_sequence_slab():
    rows = convergence_study(SLAB, (0.0, 2.5), 30)
    assert [r.n_roots for r in rows] == list(range(1, 31))
    assert rows[0].n_beta_roots == 0 and rows[1].n_beta_roots == 1
    assert rows[1].n_poles == 3
    assert rows[1].pct_error == pytest.approx(2.1, abs=0.1)
    errs = [r.pct_error for r in rows[1:-1]]
    assert all(b <= a for a, b in zip(errs, errs[1:]))
    assert rows[-1].pct_error == 0.0


def test_convergence_sequence_shell_is_slower():
    slab = convergence_study(SLAB, (0.0, 2.5), 30)
    shell = convergence_study(SHELL, (1.0, 2.5), 30)
    assert shell[1].pct_error > slab[1].pct_error
    assert shell[1].pct_error == pytest.approx(3.4, abs=0.2)


def test_convergence_validation():
    with pytest.raises(DomainError):
        convergence_study(SLAB, (0.0, 2.5), 5)
    with pytest.raises(DomainError):
        convergence_study(build_series(SLAB, 10), (0.0, 2.5), 30)
