import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from marshak_bench import roots as roots_mod
from marshak_bench.model import DimensionlessProblem, DomainError
from marshak_bench.roots import (
    RootFindingError,
    find_roots,
    planar_residual,
    planar_residual_deriv,
    scaled_residual,
    spherical_residual,
    spherical_residual_deriv,
)

# independent high-precision roots (mpmath.findroot, 30 digits)
SLAB_B1 = [1.22825922991864, 3.61220893560253, 6.54624468807102, 9.60462665986949, 12.7025148866871]
SHELL_12 = [1.25974855492714, 3.70643568592177, 6.61348002324609, 9.65361880384368, 12.7405217397392]


def test_slab_roots_match_frozen_oracle():
    r = find_roots(DimensionlessProblem.slab(1.0), 5)
    np.testing.assert_allclose(r.roots, SLAB_B1, rtol=1e-13)


def test_shell_roots_match_frozen_oracle():
    r = find_roots(DimensionlessProblem.shell(1.0, 2.0), 5)
    np.testing.assert_allclose(r.roots, SHELL_12, rtol=1e-13)


@pytest.mark.parametrize(
    "problem",
    [DimensionlessProblem.slab(b) for b in (0.05, 0.5, 1.0, 2.0, 10.0)]
    + [DimensionlessProblem.shell(*p) for p in ((1.0, 2.0), (2.0, 3.0), (0.5, 5.0), (100.0, 101.0))],
    ids=lambda p: f"{p.kind}-{p.geometry.bounds}",
)
def test_many_roots_are_clean_ordered_and_complete(problem):
    r = find_roots(problem, 200)
    assert len(r) == 200
    assert np.all(np.diff(r.roots) > 0)
    # relative Newton-step size: the absolute one reaches ~1e-12 once beta*width ~ 600
    assert (scaled_residual(problem, r.roots) / np.maximum(1.0, r.roots)).max() <= 1e-14
    assert scaled_residual(problem, r.roots[:30]).max() <= 1e-12
    # roots settle to one per pi/width interval; none skipped
    gaps = np.diff(r.roots) * problem.geometry.width / math.pi
    assert gaps.min() > 0.5 and gaps.max() < 1.5
    assert r.roots[-1] * problem.geometry.width / math.pi == pytest.approx(199.5, abs=1.0)


def test_finer_scan_finds_the_same_roots():
    p = DimensionlessProblem.shell(2.0, 3.0)
    np.testing.assert_allclose(find_roots(p, 40).roots, find_roots(p, 40, resolution=4).roots, rtol=1e-12)


@given(beta=st.floats(0.01, 60.0), b=st.floats(0.1, 5.0))
def test_planar_derivative_matches_difference_quotient(beta, b):
    h = 1e-6
    fd = (planar_residual(beta + h, b) - planar_residual(beta - h, b)) / (2 * h)
    assert fd == pytest.approx(planar_residual_deriv(beta, b), abs=1e-5 * (1 + beta**2) * (1 + b) ** 2)


@given(beta=st.floats(0.01, 40.0), x1=st.floats(0.2, 5.0), w=st.floats(0.1, 3.0))
def test_spherical_derivative_matches_difference_quotient(beta, x1, w):
    x2 = x1 + w
    h = 1e-6
    fd = (spherical_residual(beta + h, x1, x2) - spherical_residual(beta - h, x1, x2)) / (2 * h)
    scale = (1 + beta**2) * (1 + x2) ** 4
    assert fd == pytest.approx(spherical_residual_deriv(beta, x1, x2), abs=1e-5 * scale)


def test_invalid_requests():
    with pytest.raises(DomainError):
        find_roots(DimensionlessProblem.slab(1.0), 0)
    with pytest.raises(DomainError):
        spherical_residual(1.0, 2.0, 1.0)


def test_exhausted_bracket_names_the_missing_branch(monkeypatch):
    monkeypatch.setattr(roots_mod, "residual_functions", lambda p: (lambda b: 1.0 + b * b, lambda b: 2.0 * b))
    with pytest.raises(RootFindingError, match="branch 1 of 3"):
        find_roots(DimensionlessProblem.slab(1.0), 3)


def test_root_set_slicing():
    r = find_roots(DimensionlessProblem.slab(1.0), 10)
    assert len(r.first(4)) == 4
    assert r[0] == r.roots[0]
    assert list(r)[:2] == list(r.roots[:2])
