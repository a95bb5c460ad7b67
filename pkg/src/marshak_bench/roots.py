"""Positive roots of the slab and shell transcendental equations.

Both equations are used in their cleared, singularity-free form
``g(beta) = P(beta) sin(beta w) + Q(beta) cos(beta w)`` rather than as
``tan(beta w) = f(beta)``, so a uniform sign-change scan brackets every root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import SQRT3, DimensionlessProblem, DomainError, Shell, Slab

DEFAULT_N_ROOTS = 30


class RootFindingError(RuntimeError):
    pass


def planar_residual(beta, b: float):
    """(3 - 4 beta^2) sin(beta b) + 4 sqrt(3) beta cos(beta b)."""
    return (3.0 - 4.0 * beta**2) * np.sin(beta * b) + 4.0 * SQRT3 * beta * np.cos(beta * b)


def planar_residual_deriv(beta, b: float):
    return (3.0 * b + 4.0 * SQRT3 - 4.0 * beta**2 * b) * np.cos(beta * b) - (
        4.0 * SQRT3 * beta * b + 8.0 * beta
    ) * np.sin(beta * b)


def _check_shell(x1, x2):
    if not (0 < x1 < x2):
        raise DomainError(f"need 0 < X1 < X2, got X1={x1}, X2={x2}")


def spherical_residual(beta, x1: float, x2: float):
    _check_shell(x1, x2)
    w = x2 - x1
    p = (4.0 * beta**2 - 3.0) * x1 * x2 - 2.0 * SQRT3 * w + 4.0
    q = 4.0 * SQRT3 * beta * x1 * x2 + 4.0 * beta * w
    return p * np.sin(beta * w) - q * np.cos(beta * w)


def spherical_residual_deriv(beta, x1: float, x2: float):
    _check_shell(x1, x2)
    w = x2 - x1
    sin_c = 4.0 * beta * (x1**2 + x2**2) + 4.0 * SQRT3 * beta * x1 * x2 * w
    cos_c = 4.0 * beta**2 * x1 * x2 * w - 3.0 * x1 * x2 * w - 2.0 * SQRT3 * (x1**2 + x2**2)
    return sin_c * np.sin(beta * w) + cos_c * np.cos(beta * w)


def residual_functions(problem: DimensionlessProblem):
    """Return ``(g, dg/dbeta)`` for the problem's geometry as one-argument callables."""
    geom = problem.geometry
    if isinstance(geom, Slab):
        return (lambda be: planar_residual(be, geom.b)), (lambda be: planar_residual_deriv(be, geom.b))
    return (
        (lambda be: spherical_residual(be, geom.x1, geom.x2)),
        (lambda be: spherical_residual_deriv(be, geom.x1, geom.x2)),
    )


@dataclass(frozen=True)
class RootSet:
    geometry: str
    params: tuple[float, ...]
    roots: np.ndarray
    residual: np.ndarray

    def __len__(self) -> int:
        return len(self.roots)

    def __getitem__(self, i):
        return self.roots[i]

    def __iter__(self):
        return iter(self.roots)

    def first(self, n: int) -> "RootSet":
        return RootSet(self.geometry, self.params, self.roots[:n], self.residual[:n])


def _refine(g, dg, lo: float, hi: float, glo: float) -> float:
    while True:
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-13 * max(1.0, mid) or mid in (lo, hi):
            break
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(2):
        d = dg(x)
        if d == 0.0:
            break
        x_new = x - g(x) / d
        if not (lo <= x_new <= hi):
            break
        x = x_new
    return x


def find_roots(problem: DimensionlessProblem, n: int = DEFAULT_N_ROOTS, resolution: int = 1) -> RootSet:
    """The ``n`` smallest positive roots, in increasing order.

    Scans g at step ``pi / (20 * resolution * width)`` starting just above zero,
    bisects each sign change and polishes with two Newton steps.
    """
    if n < 1:
        raise DomainError(f"need at least one root, got n={n}")
    g, dg = residual_functions(problem)
    width = problem.geometry.width
    step = math.pi / (20.0 * resolution * width)
    # roots settle one per pi/width interval; leave generous slack before giving up
    beta_max = (n + 3) * math.pi / width + 10.0
    a = 1e-6 / width
    ga = float(g(a))
    found: list[float] = []
    while len(found) < n:
        c = a + step
        if c > beta_max:
            raise RootFindingError(
                f"bracket exhausted: branch {len(found) + 1} of {n} not found below beta={beta_max:.6g}"
            )
        gc = float(g(c))
        if gc == 0.0:
            found.append(c)
            c += 1e-3 * step
            gc = float(g(c))
        elif (ga > 0) != (gc > 0):
            found.append(_refine(g, dg, a, c, ga))
        a, ga = c, gc
    roots = np.array(found)
    res = np.abs(g(roots))
    if isinstance(problem.geometry, Slab):
        params: tuple[float, ...] = (problem.geometry.b,)
    else:
        params = (problem.geometry.x1, problem.geometry.x2)
    return RootSet(problem.kind, params, roots, res)


def scaled_residual(problem: DimensionlessProblem, roots) -> np.ndarray:
    """|g(beta)| / (1 + |g'(beta)|), the size-independent root quality measure."""
    g, dg = residual_functions(problem)
    r = np.asarray(roots, dtype=float)
    return np.abs(g(r)) / (1.0 + np.abs(dg(r)))
