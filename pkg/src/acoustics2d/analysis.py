"""Fourier symbols, stability scans, stationarity and convergence studies."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AcousticConfig, BoundaryKind, FieldSet, Grid2D, norms
from .exact.fourier import exact_symbol
from .exact.spherical import PlaneWave
from .schemes import SchemeKind, run, stencil_table

__all__ = [
    "ConvergenceResult",
    "convergence_order",
    "exact_stationarity_determinant",
    "spectral_radius_scan",
    "stationarity_determinant",
    "symbol",
]

_OFFSETS = np.arange(-1, 2)


def symbol(scheme: SchemeKind, cfg: AcousticConfig, theta_x, theta_y) -> np.ndarray:
    """Amplification matrix of one step for the mode ``exp(i(i theta_x + j theta_y))``.

    ``theta_x`` and ``theta_y`` may be broadcastable arrays; the result then
    has shape ``(*broadcast_shape, 3, 3)``.
    """
    table = stencil_table(scheme, cfg)
    tx, ty = np.broadcast_arrays(np.asarray(theta_x, float), np.asarray(theta_y, float))
    phase_x = np.exp(1j * tx[..., None] * _OFFSETS)     # (..., 3)
    phase_y = np.exp(1j * ty[..., None] * _OFFSETS)
    return np.einsum("abkl,...k,...l->...ab", table, phase_x, phase_y)


def spectral_radius_scan(scheme: SchemeKind, cfg: AcousticConfig, n: int = 128):
    """Largest spectral radius of the symbol over an ``n x n`` grid on ``[-pi, pi]^2``.

    Returns ``(rho_max, (theta_x, theta_y))`` at the maximiser.
    """
    if n < 64:
        raise ValueError("use at least 64 samples per direction")
    th = np.linspace(-np.pi, np.pi, n)
    tx, ty = np.meshgrid(th, th, indexing="ij")
    rho = np.max(np.abs(np.linalg.eigvals(symbol(scheme, cfg, tx, ty))), axis=-1)
    k = np.unravel_index(np.argmax(rho), rho.shape)
    return float(rho[k]), (float(tx[k]), float(ty[k]))


def stationarity_determinant(scheme: SchemeKind, cfg: AcousticConfig, theta_x, theta_y):
    """``det(G - I)``; it vanishes identically for stationarity-preserving schemes."""
    G = symbol(scheme, cfg, theta_x, theta_y)
    return np.linalg.det(G - np.eye(3))


def exact_stationarity_determinant(cfg: AcousticConfig, theta_x: float, theta_y: float) -> complex:
    """``det(G - I)`` for the exact evolution over one time step ``cfg.dt``."""
    k = (theta_x / cfg.dx, theta_y / cfg.dy)
    return complex(np.linalg.det(exact_symbol(k, cfg.dt, cfg) - np.eye(3)))


@dataclass
class ConvergenceResult:
    order: float
    errors: list[float]
    dx: list[float]
    degenerate: bool = False


def _mode_fields(wave: PlaneWave, grid: Grid2D) -> FieldSet:
    X, Y = grid.centers()
    pts = np.stack([X, Y, np.zeros_like(X)], axis=-1)
    v, p = wave.value(pts)
    return FieldSet(v[..., 0], v[..., 1], p)


def convergence_order(scheme, cfg: AcousticConfig, wave: PlaneWave,
                      resolutions=(32, 64, 128), t_end: float = 0.25,
                      floor: float = 1e-12) -> ConvergenceResult:
    """Observed order from a plane wave on the periodic unit square.

    ``cfg`` supplies ``c``, ``epsilon`` and ``cfl``; its cell sizes are
    replaced per resolution. ``scheme`` may also be the string ``"exact"``,
    which advances with the exact mode evolution and only checks that the
    error sits at the round-off floor. The order is the least-squares slope
    of ``log(L2 error)`` against ``log(dx)``. The wave vector must be
    periodic on the unit square.
    """
    errors, dxs = [], []
    for n in resolutions:
        grid = Grid2D.from_extents(n, n)
        c = cfg.with_(dx=grid.dx, dy=grid.dy, symmetric=True)
        q0 = _mode_fields(wave, grid)
        reference = _mode_fields(wave.evolved(t_end, c), grid)
        if scheme == "exact":
            q = reference
        else:
            q, _ = run(q0, c, BoundaryKind.PERIODIC, SchemeKind(scheme), t_end)
        e = norms(q, reference, grid)
        errors.append(float(np.sqrt(sum(e[k]["L2"] ** 2 for k in ("u", "v", "p")))))
        dxs.append(grid.dx)
    if max(errors) < floor:
        return ConvergenceResult(float("nan"), errors, dxs, degenerate=True)
    if min(errors) <= 0:
        raise ValueError("cannot fit an order to vanishing errors")
    slope = np.polyfit(np.log(dxs), np.log(errors), 1)[0]
    return ConvergenceResult(float(slope), errors, dxs)
