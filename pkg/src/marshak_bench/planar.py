"""Analytic solution for the finite planar slab.

    u(x, tau) = u_inf(x) + sum_n exp(s_n tau) N(x; beta_n) / [s_n D'(beta_n) beta'(s_n)]

with ``N(x; beta) = 3 sin(beta (b - x)) + 2 sqrt3 beta cos(beta (b - x))`` and
``D(beta) = (3 - 4 beta^2) sin(beta b) + 4 sqrt3 beta cos(beta b)``.
"""

from __future__ import annotations

import numpy as np

from .model import SQRT3, DimensionlessProblem, Slab, check_interval
from .roots import DEFAULT_N_ROOTS, planar_residual_deriv
from .series import ResidueSeries

DEFAULT_TAUS = (0.01, 0.1, 0.5, 1.0, 2.5, 5.0, 10.0, 50.0)


def steady_profile(x, b: float):
    """Equilibrium ``u = v = (3b + 2 sqrt3 - 3x) / (3b + 4 sqrt3)``."""
    x = check_interval(x, 0.0, b)
    u = (3.0 * b + 2.0 * SQRT3 - 3.0 * x) / (3.0 * b + 4.0 * SQRT3)
    u = u if np.ndim(u) else float(u)
    return u, u


def steady_slope(b: float) -> float:
    return -3.0 / (3.0 * b + 4.0 * SQRT3)


def steady_integral(b: float) -> float:
    return b * (1.5 * b + 2.0 * SQRT3) / (3.0 * b + 4.0 * SQRT3)


def eps0_initial_profile(x, b: float):
    """Radiation density at tau = 0 for eps = 0; the material density is zero there."""
    x = check_interval(x, 0.0, b)
    u = (3.0 * np.sinh(b - x) + 2.0 * SQRT3 * np.cosh(b - x)) / (7.0 * np.sinh(b) + 4.0 * SQRT3 * np.cosh(b))
    return u if np.ndim(u) else float(u)


def eps0_initial_slope(x, b: float):
    x = check_interval(x, 0.0, b)
    du = -(3.0 * np.cosh(b - x) + 2.0 * SQRT3 * np.sinh(b - x)) / (7.0 * np.sinh(b) + 4.0 * SQRT3 * np.cosh(b))
    return du if np.ndim(du) else float(du)


class PlanarSeries(ResidueSeries):
    geometry_type = Slab

    @property
    def b(self) -> float:
        return self.problem.geometry.b

    @staticmethod
    def _denominator_deriv(beta, geometry):
        return planar_residual_deriv(beta, geometry.b)

    def _steady(self, x):
        return steady_profile(x, self.b)[0]

    def _steady_dx(self, x):
        return np.full(x.shape, steady_slope(self.b))

    def _steady_integral(self):
        return steady_integral(self.b)

    def _shape(self, x):
        be = self.poles.beta[None, :]
        arg = be * (self.b - x[:, None])
        return 3.0 * np.sin(arg) + 2.0 * SQRT3 * be * np.cos(arg)

    def _shape_dx(self, x):
        be = self.poles.beta[None, :]
        arg = be * (self.b - x[:, None])
        return -3.0 * be * np.cos(arg) + 2.0 * SQRT3 * be**2 * np.sin(arg)

    def _shape_envelope(self, x):
        be = self.poles.beta[None, :]
        return np.broadcast_to(np.sqrt(9.0 + 12.0 * be**2), (len(x), be.shape[1]))

    def _shape_integral(self):
        be = self.poles.beta
        bb = be * self.b
        return 6.0 * np.sin(0.5 * bb) ** 2 / be + 2.0 * SQRT3 * np.sin(bb)

    def _flux_difference(self, dn_lo, dn_hi):
        return np.concatenate([dn_hi, -dn_lo])


def build_series(problem: DimensionlessProblem, n_roots: int = DEFAULT_N_ROOTS) -> PlanarSeries:
    return PlanarSeries.build(problem, n_roots)
