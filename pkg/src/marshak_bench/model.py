"""Problem definition, unit maps and the dispersion relation shared by both geometries."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SQRT3 = math.sqrt(3.0)

#: speed of light, cm/s (only products such as tau = eps*c*kappa*t matter)
C_LIGHT = 2.99792458e10
#: radiation constant, erg/(cm^3 K^4)
A_RAD = 7.5657e-15


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


@dataclass(frozen=True)
class Slab:
    b: float

    def __post_init__(self):
        if not self.b > 0:
            raise DomainError(f"slab thickness must be positive, got b={self.b}")

    @property
    def width(self) -> float:
        return self.b

    @property
    def bounds(self) -> tuple[float, float]:
        return 0.0, self.b


@dataclass(frozen=True)
class Shell:
    x1: float
    x2: float

    def __post_init__(self):
        if not (0 < self.x1 < self.x2):
            raise DomainError(f"need 0 < X1 < X2, got X1={self.x1}, X2={self.x2}")

    @property
    def width(self) -> float:
        return self.x2 - self.x1

    @property
    def bounds(self) -> tuple[float, float]:
        return self.x1, self.x2


Geometry = Slab | Shell


@dataclass(frozen=True)
class DimensionlessProblem:
    """Scaled geometry plus the retardation parameter ``eps = 4a/alpha``.

    ``eps == 0`` selects the no-retardation branch (one pole per root).
    """

    geometry: Geometry
    eps: float = 0.1

    def __post_init__(self):
        if not (self.eps >= 0 and math.isfinite(self.eps)):
            raise DomainError(f"eps must be finite and >= 0, got {self.eps}")

    @classmethod
    def slab(cls, b: float = 1.0, eps: float = 0.1) -> "DimensionlessProblem":
        return cls(Slab(b), eps)

    @classmethod
    def shell(cls, x1: float = 1.0, x2: float = 2.0, eps: float = 0.1) -> "DimensionlessProblem":
        return cls(Shell(x1, x2), eps)

    @property
    def kind(self) -> str:
        return "slab" if isinstance(self.geometry, Slab) else "shell"


@dataclass(frozen=True)
class PhysicalParams:
    """Physical inputs in cgs units. Give ``length`` for a slab or ``r1, r2`` for a shell."""

    kappa: float
    alpha: float
    a: float = A_RAD
    c: float = C_LIGHT
    f_inc: float = C_LIGHT / 4
    length: float | None = None
    r1: float | None = None
    r2: float | None = None

    def __post_init__(self):
        for name in ("kappa", "alpha", "a", "c", "f_inc"):
            val = getattr(self, name)
            if not (val > 0 and math.isfinite(val)):
                raise DomainError(f"{name} must be positive and finite, got {val}")
        if self.length is not None:
            if self.r1 is not None or self.r2 is not None:
                raise DomainError("give either length or (r1, r2), not both")
            if not self.length > 0:
                raise DomainError(f"length must be positive, got {self.length}")
        else:
            if self.r1 is None or self.r2 is None:
                raise DomainError("need length (slab) or r1 and r2 (shell)")
            if not (0 < self.r1 < self.r2):
                raise DomainError(f"need 0 < r1 < r2, got r1={self.r1}, r2={self.r2}")
        if not math.isfinite(self.eps) or self.eps <= 0:
            raise DomainError(f"eps = 4a/alpha must be finite and positive, got {self.eps}")

    @property
    def eps(self) -> float:
        return 4.0 * self.a / self.alpha

    @property
    def is_slab(self) -> bool:
        return self.length is not None


@dataclass(frozen=True)
class ScaleFactors:
    """Multiply a physical quantity by the factor to get its scaled counterpart."""

    x_per_length: float
    tau_per_time: float
    u_per_energy: float

    def to_tau(self, t):
        return t * self.tau_per_time

    def to_time(self, tau):
        return tau / self.tau_per_time


def scale_factors(kappa: float, eps: float, c: float, f_inc: float) -> ScaleFactors:
    return ScaleFactors(
        x_per_length=SQRT3 * kappa,
        tau_per_time=eps * c * kappa,
        u_per_energy=c / (4.0 * f_inc),
    )


def nondimensionalize(p: PhysicalParams) -> tuple[DimensionlessProblem, ScaleFactors]:
    """Map physical inputs to the scaled problem: x = sqrt(3)*kappa*z, tau = eps*c*kappa*t."""
    sf = scale_factors(p.kappa, p.eps, p.c, p.f_inc)
    if p.is_slab:
        geom: Geometry = Slab(sf.x_per_length * p.length)
    else:
        geom = Shell(sf.x_per_length * p.r1, sf.x_per_length * p.r2)
    return DimensionlessProblem(geom, p.eps), sf


def dimensionalize(
    problem: DimensionlessProblem,
    kappa: float = 100.0,
    c: float = C_LIGHT,
    a: float = A_RAD,
    f_inc: float | None = None,
) -> PhysicalParams:
    """Inverse of :func:`nondimensionalize` for a chosen opacity, light speed and
    radiation constant. ``alpha`` is fixed by ``eps``; ``f_inc`` defaults to ``c/4``
    so that scaled and physical energy densities coincide."""
    if problem.eps <= 0:
        raise DomainError("eps = 0 has no physical counterpart (alpha would be infinite)")
    f_inc = c / 4.0 if f_inc is None else f_inc
    alpha = 4.0 * a / problem.eps
    k = SQRT3 * kappa
    g = problem.geometry
    if isinstance(g, Slab):
        return PhysicalParams(kappa, alpha, a, c, f_inc, length=g.b / k)
    return PhysicalParams(kappa, alpha, a, c, f_inc, r1=g.x1 / k, r2=g.x2 / k)


# --------------------------------------------------------------------------
# dispersion relation beta^2(s) = -s [1 + eps (s+1)] / (s+1)


def beta_squared(s, eps: float):
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr == -1.0):
        raise DomainError("beta^2(s) has a pole at s = -1")
    out = -s_arr * (1.0 + eps * (s_arr + 1.0)) / (s_arr + 1.0)
    return out if np.ndim(s) else float(out)


def dbeta2_ds(s, eps: float):
    # beta^2 = -s/(s+1) - eps*s
    s = np.asarray(s, dtype=float) if np.ndim(s) else float(s)
    return -1.0 / (s + 1.0) ** 2 - eps


@dataclass(frozen=True)
class PolePair:
    """Poles of the Laplace-space solution belonging to one root ``beta``."""

    beta: float
    s_values: tuple[float, ...]
    dbeta_ds: tuple[float, ...] = field(default=())


def pole_pair(beta: float, eps: float) -> PolePair:
    """Solve ``eps s^2 + (1 + eps + beta^2) s + beta^2 = 0`` for the poles of one root.

    For ``eps > 0`` both roots are real and negative; the larger-magnitude root is
    taken first and the other recovered from the product ``beta^2/eps``. For
    ``eps == 0`` the single pole is ``-beta^2/(beta^2 + 1)``.
    """
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    if eps < 0:
        raise DomainError(f"eps must be >= 0, got {eps}")
    b2 = beta * beta
    if eps == 0:
        s_vals: tuple[float, ...] = (-b2 / (b2 + 1.0),)
    else:
        bb = 1.0 + eps + b2
        disc = math.sqrt((b2 + 1.0 - eps) ** 2 + 4.0 * eps)
        s_big = -(bb + disc) / (2.0 * eps)
        s_small = b2 / (eps * s_big)
        s_vals = (s_small, s_big)
    d = tuple(dbeta2_ds(s, eps) / (2.0 * beta) for s in s_vals)
    return PolePair(beta, s_vals, d)


@dataclass(frozen=True)
class PoleTable:
    """Flattened pole data for a root set; one entry per pole, ordered by root."""

    beta: np.ndarray
    s: np.ndarray
    dbeta_ds: np.ndarray
    root_index: np.ndarray

    def __len__(self) -> int:
        return len(self.s)

    def first_roots(self, n: int) -> "PoleTable":
        m = self.root_index < n
        return PoleTable(self.beta[m], self.s[m], self.dbeta_ds[m], self.root_index[m])


def pole_table(roots, eps: float) -> PoleTable:
    beta, s, d, idx = [], [], [], []
    for i, r in enumerate(roots):
        pp = pole_pair(float(r), eps)
        for sv, dv in zip(pp.s_values, pp.dbeta_ds):
            beta.append(pp.beta)
            s.append(sv)
            d.append(dv)
            idx.append(i)
    return PoleTable(np.array(beta), np.array(s), np.array(d), np.array(idx, dtype=int))


@dataclass(frozen=True)
class FieldSnapshot:
    """Scaled fields on a spatial grid at one time; ``tol`` is the truncation bound
    for series output and zero for discrete solutions."""

    tau: float
    x: np.ndarray
    u: np.ndarray
    v: np.ndarray
    du_dx: np.ndarray
    dv_dx: np.ndarray
    tol: np.ndarray | float = 0.0


def fsum_rows(terms: np.ndarray) -> np.ndarray:
    """Correctly rounded sum along the last axis (terms alternate in sign)."""
    terms = np.atleast_2d(terms)
    return np.array([math.fsum(row) for row in terms])


def check_interval(x, lo: float, hi: float, what: str = "x"):
    arr = np.asarray(x, dtype=float)
    slack = 1e-12 * max(1.0, abs(hi))
    if np.any(arr < lo - slack) or np.any(arr > hi + slack):
        raise DomainError(f"{what} outside [{lo}, {hi}]")
    return arr
