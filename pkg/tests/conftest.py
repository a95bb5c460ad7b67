import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from marshak_bench import DimensionlessProblem
from marshak_bench.planar import PlanarSeries
from marshak_bench.spherical import SphericalSeries

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def slab_problem():
    return DimensionlessProblem.slab(1.0, 0.1)


@pytest.fixture(scope="session")
def shell_problem():
    return DimensionlessProblem.shell(1.0, 2.0, 0.1)


@pytest.fixture(scope="session")
def slab_series(slab_problem):
    return PlanarSeries.build(slab_problem, 30)


@pytest.fixture(scope="session")
def shell_series(shell_problem):
    return SphericalSeries.build(shell_problem, 30)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in mod.CHECKS:
        if key in results:
            terminalreporter.write_line(mod.line(key, *results[key]))
