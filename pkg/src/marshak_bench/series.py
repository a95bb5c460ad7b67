"""Residue-series machinery shared by the slab and shell solutions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .model import SQRT3, DimensionlessProblem, DomainError, FieldSnapshot, PoleTable, check_interval, fsum_rows, pole_table
from .roots import DEFAULT_N_ROOTS, RootSet, find_roots


def decay_factors(s: np.ndarray, tau: float):
    """exp(s tau) and the material factor (exp(s tau) - exp(-tau)) / (s + 1)."""
    e = np.exp(s * tau)
    # stable near s = -1, where one pole family accumulates
    g = np.exp(-tau) * np.expm1((s + 1.0) * tau) / (s + 1.0)
    return e, g


@dataclass(frozen=True)
class ResidueSeries:
    """Steady term plus residue sum, truncated at ``len(roots)`` roots.

    A pole term of u is ``weight_u[k] * shape_k(x) * exp(s_k tau)`` with
    ``weight_u = 1 / (s D'(beta) beta'(s))``; ``weight_v = weight_u / (s + 1)``.

    The material density is summed as
    ``v = v_inf (1 - e^-tau) + sum_k weight_u shape_k (e^{s tau} - e^{-tau}) / (s + 1)``,
    i.e. the residue series plus the zero sum ``e^-tau * v(x, 0)``. It vanishes
    identically at tau = 0 and converges like the radiation series rather than like
    1/n. The pure residue form is what :meth:`energy_balance_terms` differentiates.
    """

    problem: DimensionlessProblem
    roots: RootSet
    poles: PoleTable
    weight_u: np.ndarray
    weight_v: np.ndarray

    # -- geometry hooks -----------------------------------------------------
    geometry_type: ClassVar[type] = object

    def _steady(self, x):
        raise NotImplementedError

    def _steady_dx(self, x):
        raise NotImplementedError

    def _steady_integral(self) -> float:
        raise NotImplementedError

    def _shape(self, x):
        raise NotImplementedError

    def _shape_dx(self, x):
        raise NotImplementedError

    def _shape_integral(self):
        raise NotImplementedError

    def _shape_envelope(self, x):
        """Amplitude bounding ``|shape|`` at ``x`` over the trig phase."""
        raise NotImplementedError

    @staticmethod
    def _denominator_deriv(beta, geometry):
        raise NotImplementedError

    def _flux_difference(self, du_lo: np.ndarray, du_hi: np.ndarray) -> np.ndarray:
        """Terms of the boundary flux difference matching ``_shape_integral``."""
        raise NotImplementedError

    # -- construction -------------------------------------------------------
    @classmethod
    def build(cls, problem: DimensionlessProblem, n_roots: int = DEFAULT_N_ROOTS, roots: RootSet | None = None):
        if not isinstance(problem.geometry, cls.geometry_type):
            raise DomainError(f"{cls.__name__} cannot take a {problem.kind} problem")
        if roots is None:
            roots = find_roots(problem, n_roots)
        poles = pole_table(roots.roots, problem.eps)
        denom = cls._denominator_deriv(poles.beta, problem.geometry) * poles.dbeta_ds
        if np.any(np.abs(denom) < 1e-300):
            raise DomainError("degenerate pole: D'(beta) * dbeta/ds vanishes (root finder fault?)")
        w = 1.0 / (poles.s * denom)
        return cls(problem, roots, poles, w, w / (poles.s + 1.0))

    def truncated(self, n_roots: int):
        return type(self).build(self.problem, roots=self.roots.first(n_roots))

    @property
    def n_roots(self) -> int:
        return len(self.roots)

    @property
    def eps(self) -> float:
        return self.problem.eps

    @property
    def bounds(self) -> tuple[float, float]:
        return self.problem.geometry.bounds

    def _x(self, x):
        return np.atleast_1d(check_interval(x, *self.bounds))

    @staticmethod
    def _check_tau(tau):
        if tau < 0:
            raise DomainError(f"tau must be >= 0, got {tau}")

    def _combine(self, tau, shape, steady, scalar):
        e, g = decay_factors(self.poles.s, tau)
        u = steady + fsum_rows(shape * (self.weight_u * e))
        v = -steady * math.expm1(-tau) + fsum_rows(shape * (self.weight_u * g))
        if scalar:
            return float(u[0]), float(v[0])
        return u, v

    # -- public evaluation --------------------------------------------------
    def evaluate_fields(self, x, tau: float):
        """Scaled radiation and material energy densities ``(u, v)`` at ``x``."""
        self._check_tau(tau)
        xa = self._x(x)
        return self._combine(tau, self._shape(xa), self._steady(xa), np.ndim(x) == 0)

    def material_residue_form(self, x, tau: float):
        """``v`` as the plain residue sum ``v_inf + sum weight_v shape e^{s tau}``.

        Equal to the ``v`` of :meth:`evaluate_fields` in the converged limit; under
        truncation the two differ by ``e^-tau`` times this form at tau = 0, which
        decays only like 1/n. Together with ``u`` it satisfies both field
        equations exactly term by term.
        """
        self._check_tau(tau)
        xa = self._x(x)
        e = np.exp(self.poles.s * tau)
        v = self._steady(xa) + fsum_rows(self._shape(xa) * (self.weight_v * e))
        return float(v[0]) if np.ndim(x) == 0 else v

    def evaluate_gradients(self, x, tau: float):
        """``(du/dx, dv/dx)`` from term-wise differentiation."""
        self._check_tau(tau)
        xa = self._x(x)
        return self._combine(tau, self._shape_dx(xa), self._steady_dx(xa), np.ndim(x) == 0)

    def truncation_bound(self, x, tau: float):
        """Twice the largest term contributed by the last included root.

        The shape factor is replaced by its envelope so the bound does not
        collapse at nodes of that one term.
        """
        self._check_tau(tau)
        xa = self._x(x)
        last = self.poles.root_index == self.poles.root_index.max()
        e, g = decay_factors(self.poles.s[last], tau)
        n = np.abs(self._shape_envelope(xa)[:, last] * self.weight_u[last])
        out = 2.0 * np.maximum(np.abs(n * e).max(axis=1), np.abs(n * g).max(axis=1))
        return float(out[0]) if np.ndim(x) == 0 else out

    def leakage_currents(self, tau: float) -> tuple[float, float]:
        """``(J_minus, J_plus)``: ``u + (2/sqrt3) u'`` at the irradiated face and
        ``u - (2/sqrt3) u'`` at the far face."""
        faces = np.array(self.bounds)
        u, _ = self.evaluate_fields(faces, tau)
        du, _ = self.evaluate_gradients(faces, tau)
        k = 2.0 / SQRT3
        return float(u[0] + k * du[0]), float(u[1] - k * du[1])

    def integrated_densities(self, tau: float) -> tuple[float, float]:
        """``(psi_r, psi_m)``: u and v integrated over the domain."""
        self._check_tau(tau)
        psi_inf = self._steady_integral()
        e, g = decay_factors(self.poles.s, tau)
        I = self._shape_integral()
        psi_r = psi_inf + math.fsum(self.weight_u * I * e)
        psi_m = -psi_inf * math.expm1(-tau) + math.fsum(self.weight_u * I * g)
        return psi_r, psi_m

    def energy_balance_terms(self, tau: float) -> tuple[float, float]:
        """Left side ``eps psi_r' + psi_m'`` from term-wise tau derivatives of the
        residue series, and the right side boundary-flux difference."""
        s = self.poles.s
        e = np.exp(s * tau)
        I = self._shape_integral()
        lhs = math.fsum(self.weight_u * I * e * s * (self.eps + 1.0 / (s + 1.0)))
        dn = self._shape_dx(np.array(self.bounds)) * (self.weight_u * e)
        rhs = math.fsum(self._flux_difference(dn[0], dn[1]))
        return lhs, rhs

    def energy_balance_residual(self, tau: float) -> float:
        if tau <= 0:
            raise DomainError("energy balance is checked for tau > 0")
        lhs, rhs = self.energy_balance_terms(tau)
        return lhs - rhs

    def snapshot(self, x, tau: float) -> FieldSnapshot:
        x = np.asarray(x, dtype=float)
        u, v = self.evaluate_fields(x, tau)
        du, dv = self.evaluate_gradients(x, tau)
        return FieldSnapshot(tau, x, u, v, du, dv, self.truncation_bound(x, tau))
