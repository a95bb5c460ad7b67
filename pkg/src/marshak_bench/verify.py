"""Independent oracles and cross-checks.

* closed-form Laplace-space solutions on the positive real ``s`` axis,
* Gaver-Stehfest inversion of those transforms in extended precision,
* point-wise comparison reports between any two field sources,
* convergence of the residue series with the number of roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .model import SQRT3, DimensionlessProblem, DomainError, FieldSnapshot, Slab, check_interval
from .series import ResidueSeries

DEFAULT_GS_TERMS = 18


# ---------------------------------------------------------------------------
# Laplace-space solutions. For real s > 0, beta = i*gamma with
# gamma^2 = s/(s+1) + eps*s, and every trig factor folds into a real hyperbolic one.
# Numerators and denominators are scaled by exp(-gamma*width) to avoid overflow.


def _gamma(s, eps, lib):
    return lib.sqrt(s / (s + 1) + eps * s)


def _planar_ubar(x, s, b, eps, lib):
    g = _gamma(s, eps, lib)
    ex, e2 = lib.exp(-g * x), lib.exp(-g * (2 * b - x))
    num = 3 * (ex - e2) + 2 * SQRT3 * g * (ex + e2)
    eb = lib.exp(-2 * g * b)
    den = (3 + 4 * g * g) * (1 - eb) + 4 * SQRT3 * g * (1 + eb)
    return num / (s * den)


def _shell_ubar(x, s, x1, x2, eps, lib):
    g = _gamma(s, eps, lib)
    L = x2 - x1
    y = x2 - x
    # 2 sinh(g y) e^{-g L} and 2 cosh(g y) e^{-g L}
    sh = lib.exp(-g * (L - y)) - lib.exp(-g * (L + y))
    ch = lib.exp(-g * (L - y)) + lib.exp(-g * (L + y))
    num = SQRT3 * x1**2 * ((2 - SQRT3 * x2) * sh - 2 * g * x2 * ch)
    el = lib.exp(-2 * g * L)
    c1 = (-4 * g * g - 3) * x1 * x2 - 2 * SQRT3 * L + 4
    c2 = g * (4 * SQRT3 * x1 * x2 + 4 * L)
    den = c1 * (1 - el) - c2 * (1 + el)
    return num / (s * x * den)


class _NumpyLib:
    exp = staticmethod(np.exp)
    sqrt = staticmethod(np.sqrt)


def _ubar(x, s, problem: DimensionlessProblem, lib):
    geom = problem.geometry
    if isinstance(geom, Slab):
        return _planar_ubar(x, s, geom.b, problem.eps, lib)
    return _shell_ubar(x, s, geom.x1, geom.x2, problem.eps, lib)


def laplace_space_u(x, s: float, problem: DimensionlessProblem):
    """Closed-form transform of the radiation density at real ``s > 0``."""
    if not s > 0:
        raise DomainError(f"the real-axis transform needs s > 0, got {s}")
    x = check_interval(x, *problem.geometry.bounds)
    return _ubar(x, s, problem, _NumpyLib)


def laplace_space_v(x, s: float, problem: DimensionlessProblem):
    return laplace_space_u(x, s, problem) / (s + 1.0)


# ---------------------------------------------------------------------------
# Gaver-Stehfest


@lru_cache(maxsize=None)
def stehfest_coefficients(n: int) -> tuple[Fraction, ...]:
    """Exact rational weights V_1..V_n."""
    if n % 2 or n < 2:
        raise DomainError(f"Stehfest term count must be even and >= 2, got {n}")
    h = n // 2
    f = math.factorial
    out = []
    for k in range(1, n + 1):
        acc = Fraction(0)
        for j in range((k + 1) // 2, min(k, h) + 1):
            acc += Fraction(j**h * f(2 * j), f(h - j) * f(j) * f(j - 1) * f(k - j) * f(2 * j - k))
        out.append((-1) ** (k + h) * acc)
    return tuple(out)


def _working_dps(terms: int) -> int:
    # the weights grow like 10^(0.45 n); keep ~20 digits beyond the cancellation
    return max(30, int(0.5 * terms) + 25)


def stehfest(transform, tau: float, terms: int = DEFAULT_GS_TERMS) -> float:
    """Gaver-Stehfest estimate of ``f(tau)`` from ``transform(s)`` on the real axis.

    ``transform`` receives an ``mpmath.mpf`` and should compute in mpmath arithmetic.
    """
    if not tau > 0:
        raise DomainError(f"Gaver-Stehfest needs tau > 0, got {tau}")
    weights = stehfest_coefficients(terms)
    with mpmath.workdps(_working_dps(terms)):
        a = mpmath.log(2) / mpmath.mpf(tau)
        total = mpmath.fsum(mpmath.mpf(w.numerator) / w.denominator * transform(k * a) for k, w in enumerate(weights, 1))
        return float(a * total)


@dataclass(frozen=True)
class InversionResult:
    u: float
    v: float
    spread: float
    terms: int
    stable: bool


def invert_numerically(
    x: float, tau: float, problem: DimensionlessProblem, terms: int = DEFAULT_GS_TERMS, tol: float = 1e-5
) -> InversionResult:
    """Gaver-Stehfest inversion of the closed-form transforms at one point.

    ``spread`` is the largest change against the ``terms - 2`` estimate; the
    result is flagged unstable when it exceeds ``tol``.
    """
    if terms < 10 or terms > 18 or terms % 2:
        raise DomainError(f"terms must be an even count in 10..18, got {terms}")
    xa = float(check_interval(x, *problem.geometry.bounds))
    geom = problem.geometry
    if isinstance(geom, Slab):
        b = mpmath.mpf(geom.b)
    else:
        x1, x2 = mpmath.mpf(geom.x1), mpmath.mpf(geom.x2)
    eps = mpmath.mpf(problem.eps)

    def ubar(s):
        xm = mpmath.mpf(xa)
        if isinstance(geom, Slab):
            return _planar_ubar(xm, s, b, eps, mpmath)
        return _shell_ubar(xm, s, x1, x2, eps, mpmath)

    def vbar(s):
        return ubar(s) / (s + 1)

    u = stehfest(ubar, tau, terms)
    v = stehfest(vbar, tau, terms)
    u2 = stehfest(ubar, tau, terms - 2)
    v2 = stehfest(vbar, tau, terms - 2)
    spread = max(abs(u - u2), abs(v - v2))
    return InversionResult(u, v, spread, terms, spread <= tol)


def inversion_snapshot(x, tau: float, problem: DimensionlessProblem, terms: int = DEFAULT_GS_TERMS) -> FieldSnapshot:
    res = [invert_numerically(float(xi), tau, problem, terms, tol=math.inf) for xi in np.atleast_1d(x)]
    u = np.array([r.u for r in res])
    v = np.array([r.v for r in res])
    nan = np.full(u.shape, np.nan)
    return FieldSnapshot(tau, np.atleast_1d(np.asarray(x, dtype=float)), u, v, nan, nan, np.array([r.spread for r in res]))


# ---------------------------------------------------------------------------
# comparisons


@dataclass(frozen=True)
class ComparisonReport:
    method_a: str
    method_b: str
    quantity: str
    tau: float
    x: np.ndarray
    abs_err: np.ndarray
    rel_err: np.ndarray
    tolerance: float

    @property
    def max_abs(self) -> float:
        return float(self.abs_err.max())

    @property
    def max_rel(self) -> float:
        return float(self.rel_err.max())

    @property
    def mean_abs(self) -> float:
        return float(self.abs_err.mean())

    @property
    def mean_rel(self) -> float:
        return float(self.rel_err.mean())

    @property
    def passed(self) -> bool:
        return self.max_rel < self.tolerance

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{verdict} {self.method_a} vs {self.method_b} [{self.quantity}] tau={self.tau:.6g}: "
            f"max rel {self.max_rel:.3e} (tol {self.tolerance:.1e}), max abs {self.max_abs:.3e}"
        )


def compare(
    a: FieldSnapshot,
    b: FieldSnapshot,
    tolerance: float,
    names: tuple[str, str] = ("a", "b"),
    quantity: str = "u",
    interpolate: bool = False,
    floor: float = 1e-12,
) -> ComparisonReport:
    """Point-wise errors of ``b`` against ``a``; the relative error is taken
    against ``max(|a|, |b|, floor)``."""
    fa = np.asarray(getattr(a, quantity), dtype=float)
    fb = np.asarray(getattr(b, quantity), dtype=float)
    if a.x.shape != b.x.shape or not np.allclose(a.x, b.x, rtol=1e-12, atol=1e-14):
        if not interpolate:
            raise DomainError("grids differ; pass interpolate=True to map b onto a's grid linearly")
        fb = np.interp(a.x, b.x, fb)
    diff = np.abs(fa - fb)
    rel = diff / np.maximum(np.maximum(np.abs(fa), np.abs(fb)), floor)
    return ComparisonReport(names[0], names[1], quantity, float(a.tau), np.asarray(a.x), diff, rel, tolerance)


# ---------------------------------------------------------------------------
# convergence with the number of roots


@dataclass(frozen=True)
class ConvergenceRow:
    n_roots: int  # counts the s = 0 steady pole as the first root
    n_beta_roots: int
    n_poles: int
    value: float
    pct_error: float  # relative to the transient part u_ref - u_inf
    pct_error_value: float  # relative to u_ref itself


def series_for(problem: DimensionlessProblem, n_roots: int) -> ResidueSeries:
    from .planar import PlanarSeries
    from .spherical import SphericalSeries

    cls = PlanarSeries if isinstance(problem.geometry, Slab) else SphericalSeries
    return cls.build(problem, n_roots)


def convergence_study(
    problem: DimensionlessProblem | ResidueSeries, probe: tuple[float, float], max_roots: int = 30
) -> list[ConvergenceRow]:
    """Percentage error of ``u`` at ``probe = (x, tau)`` against the ``max_roots`` value.

    Roots are counted with the steady (s = 0) pole as root 1, so ``N`` roots means
    the steady term plus ``N - 1`` transcendental roots. The primary error is taken
    relative to the transient part ``|u_ref - u_inf|``.
    """
    if max_roots < 6:
        raise DomainError("max_roots must be at least 6")
    series = problem if isinstance(problem, ResidueSeries) else series_for(problem, max_roots - 1)
    if series.n_roots < max_roots - 1:
        raise DomainError(f"series has {series.n_roots} roots, need {max_roots - 1}")
    x, tau = probe
    values = []
    for n in range(1, max_roots + 1):
        if n == 1:
            u_inf = float(series._steady(np.atleast_1d(float(x)))[0])
            values.append((0, 1, u_inf))
        else:
            part = series.truncated(n - 1)
            values.append((n - 1, len(part.poles) + 1, part.evaluate_fields(float(x), tau)[0]))
    ref = values[-1][2]
    u_inf = values[0][2]
    transient = abs(ref - u_inf)
    rows = []
    for n, (nb, npole, val) in enumerate(values, 1):
        err = abs(val - ref)
        rows.append(ConvergenceRow(n, nb, npole, val, 100.0 * err / transient, 100.0 * err / abs(ref)))
    return rows
