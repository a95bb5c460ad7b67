"""Analytic solution for the finite spherical shell X1 <= x <= X2.

With w = u x the shell equations reduce to the slab ones, so the Laplace-space
solution is ``u_bar = sqrt3 X1^2 n(x; beta) / (s x D(beta))`` where

    n(x; beta) = (2 - sqrt3 X2) sin(beta (X2 - x)) - 2 beta X2 cos(beta (X2 - x))

and ``D`` is the cleared shell transcendental function. The residue weights use
``dD/dbeta`` derived from ``D`` directly; its sin coefficient is
``4 beta (X1^2 + X2^2) + 4 sqrt3 beta X1 X2 (X2 - X1)``.
"""

from __future__ import annotations

import math

import numpy as np

from .model import SQRT3, DimensionlessProblem, Shell, check_interval
from .roots import DEFAULT_N_ROOTS, spherical_residual_deriv
from .series import ResidueSeries


def steady_coefficients(x1: float, x2: float) -> tuple[float, float]:
    """``(A, B)`` of the steady profile ``A/x + B``."""
    k = 2.0 / SQRT3
    a = 1.0 / (1.0 / x1 - 1.0 / x2 + k * (1.0 / x1**2 + 1.0 / x2**2))
    b = -a / x2 + k * a / x2**2
    return a, b


def steady_profile_shell(x, x1: float, x2: float):
    x = check_interval(x, x1, x2)
    num = SQRT3 * x1**2 * x2**2 + x1**2 * x * (2.0 - SQRT3 * x2)
    den = x * (2.0 * x1**2 - SQRT3 * x1**2 * x2 + SQRT3 * x1 * x2**2 + 2.0 * x2**2)
    u = num / den
    u = u if np.ndim(u) else float(u)
    return u, u


def shell_volume(x1: float, x2: float) -> float:
    return 4.0 * math.pi * (x2**3 - x1**3) / 3.0


class SphericalSeries(ResidueSeries):
    geometry_type = Shell

    @property
    def x1(self) -> float:
        return self.problem.geometry.x1

    @property
    def x2(self) -> float:
        return self.problem.geometry.x2

    @staticmethod
    def _denominator_deriv(beta, geometry):
        return spherical_residual_deriv(beta, geometry.x1, geometry.x2)

    def _steady(self, x):
        return steady_profile_shell(x, self.x1, self.x2)[0]

    def _steady_dx(self, x):
        a, _ = steady_coefficients(self.x1, self.x2)
        return -a / x**2

    def _steady_integral(self):
        a, b = steady_coefficients(self.x1, self.x2)
        return 4.0 * math.pi * (a * (self.x2**2 - self.x1**2) / 2.0 + b * (self.x2**3 - self.x1**3) / 3.0)

    def _parts(self, x):
        be = self.poles.beta[None, :]
        phi = be * (self.x2 - x[:, None])
        p = 2.0 - SQRT3 * self.x2
        m = p * np.sin(phi) - 2.0 * be * self.x2 * np.cos(phi)
        dm = -be * p * np.cos(phi) - 2.0 * be**2 * self.x2 * np.sin(phi)
        return m, dm

    def _shape(self, x):
        m, _ = self._parts(x)
        return SQRT3 * self.x1**2 * m / x[:, None]

    def _shape_dx(self, x):
        m, dm = self._parts(x)
        xi = x[:, None]
        return SQRT3 * self.x1**2 * (dm / xi - m / xi**2)

    def _shape_envelope(self, x):
        be = self.poles.beta[None, :]
        amp = np.sqrt((2.0 - SQRT3 * self.x2) ** 2 + 4.0 * be**2 * self.x2**2)
        return SQRT3 * self.x1**2 * amp / x[:, None]

    def _shape_integral(self):
        # int_{X1}^{X2} 4 pi x^2 shape dx, substituting y = X2 - x
        be = self.poles.beta
        L = self.x2 - self.x1
        bl = be * L
        sin_l, cos_l = np.sin(bl), np.cos(bl)
        s0 = 2.0 * np.sin(0.5 * bl) ** 2 / be
        s1 = sin_l / be**2 - L * cos_l / be
        c0 = sin_l / be
        c1 = -2.0 * np.sin(0.5 * bl) ** 2 / be**2 + L * sin_l / be
        p = 2.0 - SQRT3 * self.x2
        q = -2.0 * be * self.x2
        inner = p * (self.x2 * s0 - s1) + q * (self.x2 * c0 - c1)
        return 4.0 * math.pi * SQRT3 * self.x1**2 * inner

    def _flux_difference(self, dn_lo, dn_hi):
        return 4.0 * math.pi * np.concatenate([self.x2**2 * dn_hi, -(self.x1**2) * dn_lo])

    def volume_averaged_densities(self, tau: float) -> tuple[float, float]:
        """Integrated densities divided by the shell volume."""
        vol = shell_volume(self.x1, self.x2)
        psi_r, psi_m = self.integrated_densities(tau)
        return psi_r / vol, psi_m / vol


def build_series(problem: DimensionlessProblem, n_roots: int = DEFAULT_N_ROOTS) -> SphericalSeries:
    return SphericalSeries.build(problem, n_roots)
