"""Shared numerical checks for the analytic series."""

import numpy as np


def pde_residuals(series, x, tau, h):
    """Central-difference residuals of both field equations.

    The radiation equation is checked with the plain residue form of ``v``, which
    pairs with ``u`` term by term; the material equation with the default ``v``.
    """
    eps = series.eps
    shell = series.problem.kind == "shell"

    def u(xx, t):
        return series.evaluate_fields(xx, t)[0]

    def v(xx, t):
        return series.evaluate_fields(xx, t)[1]

    ut = (u(x, tau + h) - u(x, tau - h)) / (2 * h)
    vt = (v(x, tau + h) - v(x, tau - h)) / (2 * h)
    uxx = (u(x + h, tau) - 2 * u(x, tau) + u(x - h, tau)) / h**2
    lap = uxx + (2 / x) * (u(x + h, tau) - u(x - h, tau)) / (2 * h) if shell else uxx
    r_rad = eps * ut - lap - series.material_residue_form(x, tau) + u(x, tau)
    r_mat = vt - u(x, tau) + v(x, tau)
    return float(np.abs(r_rad).max()), float(np.abs(r_mat).max())


def marshak_bc_residuals(series, tau):
    """Residuals of ``u - (2/sqrt3) u' = 1`` (inner face) and ``u + (2/sqrt3) u' = 0`` (outer face)."""
    faces = np.array(series.bounds)
    u, _ = series.evaluate_fields(faces, tau)
    du, _ = series.evaluate_gradients(faces, tau)
    k = 2 / np.sqrt(3)
    return abs(u[0] - k * du[0] - 1.0), abs(u[1] + k * du[1])


def trapezoid(y, x):
    return float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(x)))
