"""Multidimensional Godunov scheme, split upwind baseline and time loop.

All steps act on fields in symmetric variables (pressure divided by
``c * epsilon``); :func:`run` converts physical input when the config says
so.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import (
    AcousticConfig,
    BoundaryKind,
    FieldSet,
    Grid2D,
    bracket_ops,
    bracket_stencils,
    ghost_fill,
    neighborhood,
    symmetrize,
    unsymmetrize,
)

__all__ = [
    "BilinearReconstruction",
    "SchemeKind",
    "StepReport",
    "godunov_step_flux",
    "godunov_step_update",
    "run",
    "sliding_average_reconstruction",
    "split_upwind_step",
    "step",
    "stencil_table",
]

INV_2PI = 1.0 / (2.0 * math.pi)


class SchemeKind(Enum):
    MULTIDIM_GODUNOV = "multidim"
    SPLIT_UPWIND = "split"


@dataclass(frozen=True)
class StepReport:
    dt: float
    cfl: float
    totals_before: tuple[float, float, float]
    totals_after: tuple[float, float, float]


def _require_symmetric(cfg: AcousticConfig):
    if not cfg.symmetric:
        raise ValueError("scheme steps need symmetric variables; call symmetrize() first")


def _coefficients(cfg: AcousticConfig, dt: float | None):
    dt = cfg.dt if dt is None else dt
    s = cfg.speed
    lam_x = s * dt / cfg.dx
    lam_y = s * dt / cfg.dy
    mu = (s * dt) ** 2 / (cfg.dx * cfg.dy)
    return dt, lam_x, lam_y, mu


def realized_cfl(cfg: AcousticConfig, dt: float) -> float:
    return cfg.speed * dt / min(cfg.dx, cfg.dy)


# -- update form --------------------------------------------------------------


def godunov_step_update(fields: FieldSet, cfg: AcousticConfig,
                        bc: BoundaryKind = BoundaryKind.PERIODIC,
                        dt: float | None = None) -> FieldSet:
    """One step of the multidimensional Godunov scheme in update form."""
    _require_symmetric(cfg)
    dt, lx, ly, mu = _coefficients(cfg, dt)
    u = bracket_ops(neighborhood(fields.u, bc))
    v = bracket_ops(neighborhood(fields.v, bc))
    p = bracket_ops(neighborhood(fields.p, bc))

    u_new = (fields.u
             - 0.5 * lx * (p.diff_wide_x - u.second_diff_x)
             - 0.5 * mu * (-INV_2PI * u.cross_second
                           - 0.25 * v.cross_wide
                           + 0.25 * p.wide_x_second_y))
    v_new = (fields.v
             - 0.5 * ly * (p.diff_wide_y - v.second_diff_y)
             - 0.5 * mu * (-INV_2PI * v.cross_second
                           - 0.25 * u.cross_wide
                           + 0.25 * p.second_x_wide_y))
    p_new = (fields.p
             - 0.5 * lx * (u.diff_wide_x - p.second_diff_x)
             - 0.5 * ly * (v.diff_wide_y - p.second_diff_y)
             - 0.5 * mu * (0.25 * u.wide_x_second_y
                           + 0.25 * v.second_x_wide_y
                           - 2.0 * INV_2PI * p.cross_second))
    return FieldSet(u_new, v_new, p_new)


# -- flux form ----------------------------------------------------------------


def _interface_fluxes(fields: FieldSet, cfg: AcousticConfig, bc: BoundaryKind,
                      dt: float, multidim: bool):
    """Fluxes through every x-face ``(nx+1, ny)`` and y-face ``(nx, ny+1)``.

    Returned arrays have a leading component axis (u, v, p).
    """
    s = cfg.speed
    nx, ny = fields.shape
    g = [ghost_fill(q, bc, width=2) for q in (fields.u, fields.v, fields.p)]

    def xface(q, dj):
        # left/right states of faces i-1/2 .. nx-1/2 in row j+dj
        rows = slice(2 + dj, 2 + dj + ny)
        return q[1:nx + 2, rows], q[2:nx + 3, rows]

    def yface(q, di):
        cols = slice(2 + di, 2 + di + nx)
        return q[cols, 1:ny + 2].T, q[cols, 2:ny + 3].T

    fx = _face_flux(xface, g[0], g[1], g[2], s, s * dt / cfg.dy, multidim)
    # the y-flux is the mirror image: swap the roles of (x, u) and (y, v)
    fy = _face_flux(yface, g[1], g[0], g[2], s, s * dt / cfg.dx, multidim)
    fy = np.stack([fy[1], fy[0], fy[2]])
    return fx, np.transpose(fy, (0, 2, 1))


def _face_flux(face, qn, qt, qp, s, lam_t, multidim):
    """Flux through faces normal to a direction.

    ``qn``/``qt`` are the normal/tangential velocity components and ``face``
    extracts left and right states offset by ``dj`` cells along the face.
    Output components are ordered (normal, tangential, pressure).
    """
    nl, nr = face(qn, 0)
    pl, pr = face(qp, 0)
    flux_n = 0.5 * s * ((pr + pl) - (nr - nl))
    flux_p = 0.5 * s * ((nr + nl) - (pr - pl))
    flux_t = np.zeros_like(flux_n)
    if multidim:
        def jump(q, dj):
            left, right = face(q, dj)
            return right - left

        def mean(q, dj):
            left, right = face(q, dj)
            return right + left

        def second(fn, q):
            return fn(q, 1) - 2.0 * fn(q, 0) + fn(q, -1)

        def wide(fn, q):
            return fn(q, 1) - fn(q, -1)

        k = 0.5 * lam_t * s
        flux_n = flux_n + k * (-INV_2PI * second(jump, qn)
                               - 0.25 * wide(mean, qt)
                               + 0.25 * second(mean, qp))
        flux_p = flux_p + k * (0.25 * wide(jump, qt)
                               - INV_2PI * second(jump, qp))
    return np.stack([flux_n, flux_t, flux_p])


def _conservative_update(fields, fx, fy, cfg, dt):
    q = fields.as_array()
    q = q - dt / cfg.dx * (fx[:, 1:, :] - fx[:, :-1, :]) - dt / cfg.dy * (fy[:, :, 1:] - fy[:, :, :-1])
    return FieldSet.from_array(q)


def _report(before: FieldSet, after: FieldSet, cfg, dt) -> StepReport:
    area = cfg.dx * cfg.dy
    return StepReport(dt, realized_cfl(cfg, dt), before.totals(area), after.totals(area))


def godunov_step_flux(fields: FieldSet, cfg: AcousticConfig,
                      bc: BoundaryKind = BoundaryKind.PERIODIC,
                      dt: float | None = None) -> tuple[FieldSet, StepReport]:
    """One multidimensional Godunov step written as a conservative update."""
    _require_symmetric(cfg)
    dt = cfg.dt if dt is None else dt
    fx, fy = _interface_fluxes(fields, cfg, BoundaryKind(bc), dt, multidim=True)
    new = _conservative_update(fields, fx, fy, cfg, dt)
    return new, _report(fields, new, cfg, dt)


def split_upwind_step(fields: FieldSet, cfg: AcousticConfig,
                      bc: BoundaryKind = BoundaryKind.PERIODIC,
                      dt: float | None = None) -> FieldSet:
    """Unsplit update with the one-dimensional upwind (Roe) face fluxes."""
    _require_symmetric(cfg)
    dt = cfg.dt if dt is None else dt
    fx, fy = _interface_fluxes(fields, cfg, BoundaryKind(bc), dt, multidim=False)
    return _conservative_update(fields, fx, fy, cfg, dt)


def step(fields: FieldSet, cfg: AcousticConfig, bc: BoundaryKind, scheme: SchemeKind,
         dt: float | None = None) -> tuple[FieldSet, StepReport]:
    dt = cfg.dt if dt is None else dt
    scheme = SchemeKind(scheme)
    if scheme is SchemeKind.MULTIDIM_GODUNOV:
        return godunov_step_flux(fields, cfg, bc, dt)
    if scheme is SchemeKind.SPLIT_UPWIND:
        new = split_upwind_step(fields, cfg, bc, dt)
        return new, _report(fields, new, cfg, dt)
    raise ValueError(f"unknown scheme {scheme!r}")


# -- stencil table ----------------------------------------------------------------


def stencil_table(scheme: SchemeKind, cfg: AcousticConfig, dt: float | None = None) -> np.ndarray:
    """Nine-point coefficients of one step.

    ``T[a, b, 1 + di, 1 + dj]`` multiplies component ``b`` of cell
    ``(i + di, j + dj)`` in the update of component ``a`` of cell ``(i, j)``;
    components are ordered (u, v, p).
    """
    _, lx, ly, mu = _coefficients(cfg, dt)
    w = bracket_stencils()
    ident = np.zeros((3, 3))
    ident[1, 1] = 1.0
    T = np.zeros((3, 3, 3, 3))
    U, V, P = 0, 1, 2
    for a in range(3):
        T[a, a] += ident
    T[U, P] -= 0.5 * lx * w.diff_wide_x
    T[U, U] += 0.5 * lx * w.second_diff_x
    T[V, P] -= 0.5 * ly * w.diff_wide_y
    T[V, V] += 0.5 * ly * w.second_diff_y
    T[P, U] -= 0.5 * lx * w.diff_wide_x
    T[P, P] += 0.5 * lx * w.second_diff_x
    T[P, V] -= 0.5 * ly * w.diff_wide_y
    T[P, P] += 0.5 * ly * w.second_diff_y
    if SchemeKind(scheme) is SchemeKind.MULTIDIM_GODUNOV:
        h = 0.5 * mu
        T[U, U] += h * INV_2PI * w.cross_second
        T[U, V] += h * 0.25 * w.cross_wide
        T[U, P] -= h * 0.25 * w.wide_x_second_y
        T[V, V] += h * INV_2PI * w.cross_second
        T[V, U] += h * 0.25 * w.cross_wide
        T[V, P] -= h * 0.25 * w.second_x_wide_y
        T[P, U] -= h * 0.25 * w.wide_x_second_y
        T[P, V] -= h * 0.25 * w.second_x_wide_y
        T[P, P] += h * 2.0 * INV_2PI * w.cross_second
    return T


# -- time loop --------------------------------------------------------------------


def run(fields: FieldSet, cfg: AcousticConfig, bc: BoundaryKind, scheme: SchemeKind,
        t_end: float, callback=None) -> tuple[FieldSet, list[StepReport]]:
    """Step with fixed ``cfg.dt`` until ``t_end``; the last step is shortened.

    Fields are returned in the representation they came in. ``callback``,
    if given, is called as ``callback(n, t, fields)`` after every step with
    the symmetric-variable fields.
    """
    if t_end < 0:
        raise ValueError("t_end must be non-negative")
    physical = not cfg.symmetric
    q = symmetrize(fields, cfg) if physical else fields.copy()
    work = cfg.with_(symmetric=True)
    dt = work.dt
    reports: list[StepReport] = []
    t = 0.0
    n = 0
    while t_end - t > 1e-12 * max(t_end, dt):
        h = min(dt, t_end - t)
        q, rep = step(q, work, bc, scheme, dt=h)
        if not q.isfinite():
            raise FloatingPointError(f"non-finite values after step {n + 1} (t={t + h:.6g})")
        reports.append(rep)
        n += 1
        t = n * dt if h == dt else t_end
        if callback is not None:
            callback(n, t, q)
    return (unsymmetrize(q, cfg) if physical else q), reports


# -- sliding-average reconstruction ----------------------------------------------------


class BilinearReconstruction:
    """Continuous piecewise-bilinear interpolant of cell values as point values.

    Implements the initial-data oracle interface (2D data embedded in 3D,
    constant along z). The gradient is the one-sided gradient of the
    bilinear piece containing the point; it jumps across the lines through
    cell centres.
    """

    def __init__(self, fields: FieldSet, grid: Grid2D):
        if fields.shape != grid.shape:
            raise ValueError("fields do not match grid")
        self.grid = grid
        self.q = fields.as_array()

    def _locate(self, x):
        g = self.grid
        x = np.asarray(x, dtype=np.float64)
        sx = (x[..., 0] - g.xc[0]) / g.dx
        sy = (x[..., 1] - g.yc[0]) / g.dy
        tol = 1e-9
        if (np.any(sx < -tol) or np.any(sx > g.nx - 1 + tol)
                or np.any(sy < -tol) or np.any(sy > g.ny - 1 + tol)):
            raise ValueError("query outside the hull of cell centres")
        i = np.clip(np.floor(sx).astype(int), 0, g.nx - 2)
        j = np.clip(np.floor(sy).astype(int), 0, g.ny - 2)
        return i, j, sx - i, sy - j

    def _corners(self, i, j):
        q = self.q
        return q[:, i, j], q[:, i + 1, j], q[:, i, j + 1], q[:, i + 1, j + 1]

    def value(self, x):
        i, j, a, b = self._locate(x)
        q00, q10, q01, q11 = self._corners(i, j)
        vals = (1 - a) * (1 - b) * q00 + a * (1 - b) * q10 + (1 - a) * b * q01 + a * b * q11
        v = np.zeros(np.shape(a) + (3,))
        v[..., 0] = vals[0]
        v[..., 1] = vals[1]
        return v, vals[2]

    def gradient(self, x):
        i, j, a, b = self._locate(x)
        q00, q10, q01, q11 = self._corners(i, j)
        gx = ((1 - b) * (q10 - q00) + b * (q11 - q01)) / self.grid.dx
        gy = ((1 - a) * (q01 - q00) + a * (q11 - q10)) / self.grid.dy
        dv = np.zeros(np.shape(a) + (3, 3))
        dv[..., 0, 0], dv[..., 0, 1] = gx[0], gy[0]
        dv[..., 1, 0], dv[..., 1, 1] = gx[1], gy[1]
        dp = np.zeros(np.shape(a) + (3,))
        dp[..., 0], dp[..., 1] = gx[2], gy[2]
        return dv, dp


def sliding_average_reconstruction(fields: FieldSet, grid: Grid2D) -> BilinearReconstruction:
    """Sliding average of the piecewise-constant reconstruction of ``fields``."""
    return BilinearReconstruction(fields, grid)
