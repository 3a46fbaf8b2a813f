"""Corner Riemann problem: unit x-velocity in the quadrant ``x > 0, y > 0``.

All other initial data vanish. Along the jump line ``y = 0`` the
y-velocity has the closed form ``log_kernel(|x| / ct) / (2 pi)``, which is
singular at the corner. Away from that line the full solution is obtained
by treating the data as constant in a third coordinate and evaluating the
spherical means of the Heaviside data exactly in the azimuthal angle. Only
one-dimensional integrals in the polar angle remain.
"""
from __future__ import annotations

import numpy as np

from ..core import AcousticConfig
from .spherical import ConvergenceError

__all__ = ["log_kernel", "riemann_axis_velocity", "riemann_field", "riemann_initial"]

_TWO_PI = 2.0 * np.pi
_ANTIDERIVATIVES = {
    "1": lambda f: f,
    "c": np.sin,
    "cc": lambda f: 0.5 * f + 0.25 * np.sin(2 * f),
    "cs": lambda f: 0.5 * np.sin(f) ** 2,
}
_WEIGHTS = {
    "1": lambda f: np.ones_like(f),
    "c": np.cos,
    "cc": lambda f: np.cos(f) ** 2,
    "cs": lambda f: np.cos(f) * np.sin(f),
}


def log_kernel(s):
    """``ln((1 + sqrt(1 - s^2)) / s)`` for ``0 < s <= 1``."""
    s = np.asarray(s, dtype=np.float64)
    if np.any(~(s > 0)) or np.any(s > 1):
        raise ValueError("log_kernel needs 0 < s <= 1")
    out = np.log((1.0 + np.sqrt(1.0 - s * s)) / s)
    return float(out) if out.ndim == 0 else out


def _speed(cfg: AcousticConfig | None) -> float:
    return 1.0 if cfg is None else cfg.speed


def riemann_axis_velocity(t: float, z: float, cfg: AcousticConfig | None = None) -> float:
    """Transverse velocity at distance ``z`` from the corner along the jump line.

    Raises ``ValueError`` at ``z = 0``, where the value diverges
    logarithmically.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    if z == 0:
        raise ValueError("the axis velocity is singular at the corner")
    s = abs(z) / (_speed(cfg) * t)
    return 0.0 if s >= 1 else log_kernel(s) / _TWO_PI


def _heaviside(x: float) -> float:
    return 1.0 if x > 0 else (0.5 if x == 0 else 0.0)


def riemann_initial(x) -> tuple[float, float, float]:
    """Initial ``(u, v, p)``; the jump lines take the mean of both sides."""
    return _heaviside(x[0]) * _heaviside(x[1]), 0.0, 0.0


def _arc(d: float, rho: np.ndarray):
    """Half-width and its radial derivative of the arc ``{n.e(phi) > -d/rho}``."""
    ratio = np.clip(-d / rho, -1.0, 1.0)
    alpha = np.arccos(ratio)
    inside = np.abs(d) < rho
    dalpha = np.zeros_like(rho)
    dalpha[inside] = -d / (rho[inside] * np.sqrt(rho[inside] ** 2 - d * d))
    return alpha, dalpha


def _arc_integrals(X, rho: np.ndarray) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """``K_g(rho)`` and ``dK_g/drho`` for each azimuthal weight ``g``.

    ``K_g(rho)`` integrates ``g(phi)`` over the azimuths for which
    ``X + rho (cos phi, sin phi)`` lies in the open first quadrant.
    """
    a1, da1 = _arc(X[0], rho)          # arc centred on phi = 0
    a2, da2 = _arc(X[1], rho)          # arc centred on phi = pi/2
    out = {g: [np.zeros_like(rho), np.zeros_like(rho)] for g in _WEIGHTS}
    for shift in (-_TWO_PI, 0.0, _TWO_PI):
        lo2 = 0.5 * np.pi - a2 + shift
        hi2 = 0.5 * np.pi + a2 + shift
        lo_from_1 = -a1 >= lo2
        hi_from_1 = a1 <= hi2
        lo = np.where(lo_from_1, -a1, lo2)
        hi = np.where(hi_from_1, a1, hi2)
        dlo = np.where(lo_from_1, -da1, -da2)
        dhi = np.where(hi_from_1, da1, da2)
        live = hi > lo
        for g, G in _ANTIDERIVATIVES.items():
            w = _WEIGHTS[g]
            out[g][0] += np.where(live, G(hi) - G(lo), 0.0)
            out[g][1] += np.where(live, w(hi) * dhi - w(lo) * dlo, 0.0)
    return {g: (v[0], v[1]) for g, v in out.items()}


def _panel_rule(breaks: list[float], n: int):
    """Gauss-Legendre nodes on each panel, squared towards the left end.

    The substitution ``theta = a + (b - a) tau^2`` absorbs the inverse
    square-root growth of the arc derivatives just above each breakpoint.
    """
    tau, w = np.polynomial.legendre.leggauss(n)
    tau = 0.5 * (tau + 1.0)
    w = 0.5 * w
    nodes, weights = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b <= a:
            continue
        nodes.append(a + (b - a) * tau * tau)
        weights.append(2.0 * (b - a) * tau * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _field_at(X, R: float, n: int) -> np.ndarray:
    radii = (abs(X[0]), abs(X[1]), float(np.hypot(*X)))
    # geometric grading above each breakpoint resolves points close to a jump line
    graded = [r * 2.0**k for r in radii if 0 < r < R for k in range(64) if r * 2.0**k < R]
    breaks = sorted({0.0, 0.5 * np.pi, *(np.arcsin(r / R) for r in graded)})
    th, w = _panel_rule(breaks, n)
    s = np.sin(th)
    c2 = np.cos(th) ** 2
    K = _arc_integrals(X, R * s)
    K0 = _arc_integrals(X, np.array([1e-12 * radii[2]]))   # limit at the centre

    def mean(g, power):
        return np.sum(w * s ** power * K[g][0]) / _TWO_PI

    def dmean(g, power):
        return np.sum(w * s ** (power + 1) * K[g][1]) / _TWO_PI

    def tilde(g):
        return K[g][0] - K0[g][0][0]

    A_x, dA_x = mean("cc", 3), dmean("cc", 3)
    A_y, dA_y = mean("cs", 3), dmean("cs", 3)
    B_x = mean("1", 1)
    C, dC = mean("c", 2), dmean("c", 2)
    T_x = np.sum(w * c2 / s * (tilde("1") - (2 + s * s) * tilde("cc"))) / _TWO_PI
    T_y = -np.sum(w * c2 / s * (2 + s * s) * tilde("cs")) / _TWO_PI

    u0 = riemann_initial(X)[0]
    u = 2.0 / 3.0 * u0 + A_x + R * dA_x - (B_x - 3 * A_x) - T_x
    v = A_y + R * dA_y + 3 * A_y - T_y
    p = -2 * C - R * dC
    return np.array([u, v, p])


def riemann_field(t: float, x, cfg: AcousticConfig | None = None, n: int = 48,
                  tol: float = 1e-9) -> tuple[float, float, float]:
    """Exact ``(u, v, p)`` of the corner Riemann problem at time ``t`` and point ``x``.

    Pressure is in symmetric variables. Points on a jump line receive the
    mean of the two one-sided limits for the velocity tangential to that line.

    Parameters
    ----------
    t : float
        Positive time.
    x : array_like
        Point in the plane; the corner itself is rejected.
    cfg : AcousticConfig, optional
        Supplies the wave speed ``c / epsilon`` (1 when omitted).
    n : int
        Gauss-Legendre nodes per polar-angle panel.
    tol : float
        Maximum change allowed when ``n`` is doubled.

    Raises
    ------
    ConvergenceError
        If doubling ``n`` changes any component by more than ``tol``.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    X = np.asarray(x, dtype=np.float64).reshape(-1)[:2]
    if X[0] == 0 and X[1] == 0:
        raise ValueError("the solution is singular at the corner")
    R = _speed(cfg) * t
    first = _field_at(X, R, n)
    second = _field_at(X, R, 2 * n)
    diff = float(np.max(np.abs(second - first)))
    if not diff <= tol:
        raise ConvergenceError(f"polar quadrature changed by {diff:.3e} when doubled")
    return tuple(float(q) for q in second)
