"""Fully implicit staggered-mesh finite-difference solver for slab and shell.

Energy densities live at cell centres, fluxes at cell edges. Each backward-Euler
step solves one tridiagonal system for the radiation density and then updates the
material density explicitly in the new radiation density. The solver runs in
physical (cgs) units; with ``f_inc = c/4`` the cell values are the scaled fields.

For the shell the unknowns are ``E' = E r`` and ``theta' = a T^4 r``, which obey
the slab equations; only the two boundary rows differ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .model import (
    C_LIGHT,
    SQRT3,
    DimensionlessProblem,
    DomainError,
    FieldSnapshot,
    PhysicalParams,
    ScaleFactors,
    Shell,
    Slab,
    scale_factors,
)

PAPER_DT_FINE = 3.33e-15
PAPER_DT_COARSE = 3.33e-12
PAPER_KAPPA = 100.0
PAPER_CELLS = 100


class DominanceError(ArithmeticError):
    """The assembled system is not strictly diagonally dominant."""


class ScheduleExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class FdParams:
    kappa: float = PAPER_KAPPA
    eps: float = 0.1
    c: float = C_LIGHT
    f_inc: float | None = None

    def __post_init__(self):
        if self.f_inc is None:
            object.__setattr__(self, "f_inc", self.c / 4.0)
        for name in ("kappa", "eps", "c", "f_inc"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive for the finite-difference solver")

    @classmethod
    def from_physical(cls, p: PhysicalParams) -> "FdParams":
        return cls(p.kappa, p.eps, p.c, p.f_inc)

    @property
    def scales(self) -> ScaleFactors:
        return scale_factors(self.kappa, self.eps, self.c, self.f_inc)

    def dtau(self, dt: float) -> float:
        return self.eps * self.c * self.kappa * dt

    def dt(self, dtau: float) -> float:
        return dtau / (self.eps * self.c * self.kappa)


@dataclass(frozen=True)
class FdMesh:
    geometry: str
    edges: np.ndarray

    @property
    def n_cells(self) -> int:
        return len(self.edges) - 1

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[1:] + self.edges[:-1])

    @property
    def half_widths(self) -> np.ndarray:
        """``dz_{i+1/2} = (dz_i + dz_{i+1}) / 2`` for the N - 1 interior edges."""
        w = self.widths
        return 0.5 * (w[1:] + w[:-1])

    @property
    def length(self) -> float:
        return float(self.edges[-1] - self.edges[0])


def build_mesh(geometry: str, extent, cells: int, grading: str = "uniform") -> FdMesh:
    """``extent`` is the slab length or the ``(R1, R2)`` pair, in cm."""
    if cells < 3:
        raise DomainError(f"need at least 3 cells, got {cells}")
    if grading != "uniform":
        raise DomainError(f"unsupported grading {grading!r}")
    if geometry == "slab":
        lo, hi = 0.0, float(extent)
    elif geometry == "shell":
        lo, hi = map(float, extent)
    else:
        raise DomainError(f"unknown geometry {geometry!r}")
    if not hi > lo:
        raise DomainError("mesh extent must be positive")
    edges = np.linspace(lo, hi, cells + 1)
    return FdMesh(geometry, edges)


def mesh_for(problem: DimensionlessProblem, params: FdParams, cells: int = PAPER_CELLS) -> FdMesh:
    k = SQRT3 * params.kappa
    g = problem.geometry
    if isinstance(g, Slab):
        return build_mesh("slab", g.b / k, cells)
    return build_mesh("shell", (g.x1 / k, g.x2 / k), cells)


@dataclass
class FdState:
    """Cell-centred radiation ``E`` and material ``theta`` (transformed for the shell)."""

    E: np.ndarray
    theta: np.ndarray
    n: int = 0
    tau: float = 0.0

    @classmethod
    def cold(cls, mesh: FdMesh) -> "FdState":
        return cls(np.zeros(mesh.n_cells), np.zeros(mesh.n_cells))


@dataclass(frozen=True)
class TridiagonalSystem:
    """``lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]``; ``lower[0]`` and
    ``upper[-1]`` are ignored."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        n = len(self.diag)
        if not (len(self.lower) == len(self.upper) == len(self.rhs) == n):
            raise DomainError("tridiagonal arrays must share one length")

    def dominance_margin(self) -> np.ndarray:
        off = np.abs(self.lower) + np.abs(self.upper)
        off[0] -= abs(self.lower[0])
        off[-1] -= abs(self.upper[-1])
        return np.abs(self.diag) - off

    def to_dense(self) -> np.ndarray:
        n = len(self.diag)
        a = np.diag(self.diag.astype(float))
        a[np.arange(1, n), np.arange(n - 1)] = self.lower[1:]
        a[np.arange(n - 1), np.arange(1, n)] = self.upper[:-1]
        return a


def thomas_solve(sys: TridiagonalSystem, check: bool = True) -> np.ndarray:
    """Tridiagonal elimination without pivoting; safe for strictly dominant rows."""
    if check:
        margin = sys.dominance_margin()
        if np.any(margin <= 0):
            bad = int(np.argmin(margin))
            raise DominanceError(f"row {bad} is not strictly diagonally dominant (margin {margin[bad]:.3e})")
    n = len(sys.diag)
    cp = np.empty(n)
    dp = np.empty(n)
    cp[0] = sys.upper[0] / sys.diag[0]
    dp[0] = sys.rhs[0] / sys.diag[0]
    for i in range(1, n):
        m = sys.diag[i] - sys.lower[i] * cp[i - 1]
        cp[i] = sys.upper[i] / m
        dp[i] = (sys.rhs[i] - sys.lower[i] * dp[i - 1]) / m
    x = np.empty(n)
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


def _interior(state: FdState, mesh: FdMesh, params: FdParams, dt: float):
    """Rows scaled by ``3 kappa dz_i dz_{i-1/2}`` (first and last cells use their one neighbour)."""
    kap, eps = params.kappa, params.eps
    gam = 1.0 / (params.c * dt)
    k1 = kap / (gam + eps * kap)
    dz = mesh.widths
    h = mesh.half_widths
    n = mesh.n_cells
    h_left = np.concatenate([[h[0]], h])  # dz_{i-1/2}; the first row uses dz_{3/2}
    h_right = np.concatenate([h, [h[-1]]])
    A = 3.0 * kap * dz * h_left * gam
    ratio = h_left / h_right
    lower = -np.ones(n)
    upper = -ratio
    diag = 1.0 + ratio + A * (1.0 + k1)
    rhs = A * (state.E + k1 * state.theta)
    upper[0] = -1.0
    return lower, diag, upper, rhs, A, k1


def assemble_slab_system(state: FdState, mesh: FdMesh, params: FdParams, dt: float) -> TridiagonalSystem:
    if len(state.E) != mesh.n_cells or len(state.theta) != mesh.n_cells:
        raise DomainError("state arrays do not match the mesh")
    kap, c = params.kappa, params.c
    lower, diag, upper, rhs, A, k1 = _interior(state, mesh, params, dt)
    dz, h = mesh.widths, mesh.half_widths
    q1 = 1.0 / (dz[0] / h[0] + 4.0 / (3.0 * kap * h[0]))
    diag[0] = 1.0 + 2.0 * q1 + A[0] * (1.0 + k1)
    rhs[0] += 8.0 / c * params.f_inc * q1
    # the far-face leak carries the same factor 2 as the irradiated face
    qn = 1.0 / (dz[-1] / h[-1] + 4.0 / (3.0 * kap * h[-1]))
    diag[-1] = 1.0 + 2.0 * qn + A[-1] * (1.0 + k1)
    upper[-1] = 0.0
    lower[0] = 0.0
    return TridiagonalSystem(lower, diag, upper, rhs)


def assemble_shell_system(state: FdState, mesh: FdMesh, params: FdParams, dt: float) -> TridiagonalSystem:
    if len(state.E) != mesh.n_cells or len(state.theta) != mesh.n_cells:
        raise DomainError("state arrays do not match the mesh")
    kap, c = params.kappa, params.c
    r1, r2 = float(mesh.edges[0]), float(mesh.edges[-1])
    lower, diag, upper, rhs, A, k1 = _interior(state, mesh, params, dt)
    dr, h = mesh.widths, mesh.half_widths
    diag[0] = (
        1.0
        + 2.0 * (2.0 + 3.0 * kap * r1) * h[0] / (4.0 * r1 + 3.0 * kap * r1 * dr[0] + 2.0 * dr[0])
        + A[0] * (1.0 + k1)
    )
    rhs[0] += (24.0 * params.f_inc / c) / (
        4.0 / (r1 * kap * h[0]) + 3.0 * dr[0] / (h[0] * r1) + 2.0 * dr[0] / (r1**2 * kap * h[0])
    )
    m = 3.0 * kap * r2 - 2.0
    diag[-1] = 1.0 + 2.0 * h[-1] * m / (m * dr[-1] + 4.0 * r2) + A[-1] * (1.0 + k1)
    upper[-1] = 0.0
    lower[0] = 0.0
    return TridiagonalSystem(lower, diag, upper, rhs)


def assemble(state: FdState, mesh: FdMesh, params: FdParams, dt: float) -> TridiagonalSystem:
    if mesh.geometry == "slab":
        return assemble_slab_system(state, mesh, params, dt)
    return assemble_shell_system(state, mesh, params, dt)


def advance(state: FdState, mesh: FdMesh, params: FdParams, dt: float) -> FdState:
    """One backward-Euler step of length ``dt`` seconds."""
    E_new = thomas_solve(assemble(state, mesh, params, dt))
    gam = 1.0 / (params.c * dt)
    ek = params.eps * params.kappa
    theta_new = (gam * state.theta + ek * E_new) / (gam + ek)
    return FdState(E_new, theta_new, state.n + 1, state.tau + params.dtau(dt))


# ---------------------------------------------------------------------------
# edge quantities


def edge_fluxes(E: np.ndarray, mesh: FdMesh, params: FdParams):
    """Interior-edge fluxes seen from the left and right cells, and the edge density.

    The edge density is the width-weighted average that makes the two one-sided
    fluxes equal."""
    dz = mesh.widths
    w_l, w_r = dz[:-1], dz[1:]
    e_edge = (w_r * E[:-1] + w_l * E[1:]) / (w_l + w_r)
    k = 2.0 * params.c / (3.0 * params.kappa)
    f_left = -k * (e_edge - E[:-1]) / w_l
    f_right = -k * (E[1:] - e_edge) / w_r
    return f_left, f_right, e_edge


def boundary_fluxes(E: np.ndarray, mesh: FdMesh, params: FdParams) -> tuple[float, float]:
    """Fluxes through the first and last edges implied by the Marshak rows."""
    kap, c, f = params.kappa, params.c, params.f_inc
    dz = mesh.widths
    k1 = 4.0 / (3.0 * kap * dz[0])
    kn = 4.0 / (3.0 * kap * dz[-1])
    if mesh.geometry == "slab":
        a1, an, src = 1.0, 1.0, 4.0 * f / c
    else:
        r1, r2 = float(mesh.edges[0]), float(mesh.edges[-1])
        a1, an, src = 1.0 + 2.0 / (3.0 * kap * r1), 1.0 - 2.0 / (3.0 * kap * r2), 4.0 * r1 * f / c
    e_lo = (src + k1 * E[0]) / (a1 + k1)
    e_hi = kn * E[-1] / (an + kn)
    g = 2.0 * c / (3.0 * kap)
    return float(-g * (E[0] - e_lo) / dz[0]), float(-g * (e_hi - E[-1]) / dz[-1])


# ---------------------------------------------------------------------------
# schedules and runs


@dataclass(frozen=True)
class TimeSchedule:
    """Piecewise-constant steps: ``phases[k] = (dt_seconds, until_tau)``."""

    phases: tuple[tuple[float, float], ...]

    @classmethod
    def paper(cls) -> "TimeSchedule":
        return cls(((PAPER_DT_FINE, 0.1), (PAPER_DT_COARSE, math.inf)))

    @classmethod
    def uniform_dtau(cls, dtau: float, params: FdParams, until: float = math.inf) -> "TimeSchedule":
        return cls(((params.dt(dtau), until),))

    def scaled(self, factor: float) -> "TimeSchedule":
        """Every step multiplied by ``factor`` (refinement studies)."""
        return TimeSchedule(tuple((dt * factor, until) for dt, until in self.phases))

    def steps(self, params: FdParams):
        """Yield ``(dt, tau_after)``. Each phase runs while the next step lands
        closer to ``until`` than the current time does."""
        tau = 0.0
        for dt, until in self.phases:
            dtau = params.dtau(dt)
            start, k = tau, 0
            while tau + 0.5 * dtau < until:
                k += 1
                tau = start + k * dtau
                yield dt, tau


@dataclass
class FdRun:
    mesh: FdMesh
    params: FdParams
    snapshots: list[FieldSnapshot] = field(default_factory=list)
    states: list[FdState] = field(default_factory=list)
    balance: list[tuple[float, float, float, float]] = field(default_factory=list)


def _energy(state: FdState, mesh: FdMesh, params: FdParams) -> float:
    """``sum (E + theta/eps) dz`` -- conserved by the scheme up to boundary fluxes."""
    return float(np.dot(state.E + state.theta / params.eps, mesh.widths))


def to_snapshot(state: FdState, mesh: FdMesh, params: FdParams) -> FieldSnapshot:
    sf = params.scales
    r = mesh.centers
    E, th = state.E, state.theta
    if mesh.geometry == "shell":
        E, th = E / r, th / r
    u = E * sf.u_per_energy
    v = th * sf.u_per_energy
    x = r * sf.x_per_length
    return FieldSnapshot(state.tau, x, u, v, np.gradient(u, x), np.gradient(v, x), 0.0)


def run(
    problem: DimensionlessProblem,
    mesh: FdMesh | None = None,
    schedule: TimeSchedule | None = None,
    probe_times=(0.01, 0.1, 1.0),
    params: FdParams | None = None,
    kappa: float = PAPER_KAPPA,
    keep_balance: bool = False,
) -> FdRun:
    """March from a cold start and record snapshots at the completed step nearest each probe.

    Snapshots carry the actual scaled time reached. With ``keep_balance`` every step
    appends ``(tau, energy change, flux x dt at new time, trapezoid flux x dt)`` in
    physical units per unit area (per unit steradian-free radius for the shell).
    """
    if params is None:
        params = FdParams(kappa=kappa, eps=problem.eps)
    if mesh is None:
        mesh = mesh_for(problem, params)
    schedule = schedule or TimeSchedule.paper()
    probes = [float(p) for p in probe_times]
    if any(b <= a for a, b in zip(probes, probes[1:])):
        raise DomainError("probe times must be strictly increasing")
    out = FdRun(mesh, params)
    state = FdState.cold(mesh)
    pending = list(probes)
    while pending and pending[0] <= 0.0:
        out.snapshots.append(to_snapshot(state, mesh, params))
        out.states.append(state)
        pending.pop(0)
    flux_prev = boundary_fluxes(state.E, mesh, params)
    for dt, tau_after in schedule.steps(params):
        if not pending:
            break
        new = advance(state, mesh, params, dt)
        new = replace(new, tau=tau_after)
        if keep_balance:
            flux_new = boundary_fluxes(new.E, mesh, params)
            net_new = flux_new[0] - flux_new[1]
            net_old = flux_prev[0] - flux_prev[1]
            d_energy = _energy(new, mesh, params) - _energy(state, mesh, params)
            out.balance.append((new.tau, d_energy, dt * net_new, 0.5 * dt * (net_new + net_old)))
            flux_prev = flux_new
        while pending and new.tau >= pending[0]:
            best = new if abs(new.tau - pending[0]) <= abs(pending[0] - state.tau) else state
            out.snapshots.append(to_snapshot(best, mesh, params))
            out.states.append(best)
            pending.pop(0)
        state = new
    if pending:
        raise ScheduleExhausted(f"schedule ended at tau={state.tau:.6g} before probe tau={pending[0]:.6g}")
    return out
