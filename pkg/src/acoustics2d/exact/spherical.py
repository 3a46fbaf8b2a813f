"""Spherical means and pointwise exact evolution of smooth(ish) 3D data.

The solution at ``(t, x)`` is assembled from spherical means of the initial
data and of its first derivatives over spheres centred at ``x``. Radial
derivatives of spherical means are never taken numerically; inside the
mean ``d/dr`` is replaced by the directional derivative ``y . grad``.

Two-dimensional problems are handled as 3D data that do not depend on z.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

import numpy as np

from ..core import AcousticConfig
from .fourier import ModeState, fourier_mode_evolve

__all__ = [
    "ConstantData",
    "ConvergenceError",
    "GaussianPulse",
    "InitialDataOracle",
    "ModeSum",
    "PlaneWave",
    "SphereQuadrature",
    "evolve_point",
    "evolve_point_alt",
    "radial_nodes",
    "spherical_mean",
]


class ConvergenceError(RuntimeError):
    """Refining a quadrature changed the result by more than the tolerance."""


class InitialDataOracle(Protocol):
    """Point values and first gradients of the initial data ``(v0, p0)``.

    Both queries take points of shape ``(..., 3)``. ``value`` returns
    ``v0`` of shape ``(..., 3)`` and ``p0`` of shape ``(...)``.
    ``gradient`` returns ``dv[..., i, j] = d v0_i / d x_j`` and
    ``dp[..., j] = d p0 / d x_j``. Implementations must be safe to query
    concurrently.
    """

    def value(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]: ...

    def gradient(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]: ...


# -- oracles ------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantData:
    v: tuple = (0.0, 0.0, 0.0)
    p: float = 0.0

    def value(self, x):
        x = np.asarray(x)
        shape = x.shape[:-1]
        return np.broadcast_to(np.asarray(self.v, float), shape + (3,)).copy(), np.full(shape, float(self.p))

    def gradient(self, x):
        shape = np.asarray(x).shape[:-1]
        return np.zeros(shape + (3, 3)), np.zeros(shape + (3,))


@dataclass(frozen=True)
class PlaneWave:
    """Real data ``Re[(uhat, phat) exp(i k.x)]`` in three dimensions."""

    k: tuple
    uhat: tuple
    phat: complex

    def _phase(self, x):
        return np.exp(1j * (np.asarray(x) @ np.asarray(self.k, float)))

    def value(self, x):
        e = self._phase(x)
        uhat = np.asarray(self.uhat, complex)
        return np.real(e[..., None] * uhat), np.real(self.phat * e)

    def gradient(self, x):
        e = self._phase(x)
        k = np.asarray(self.k, float)
        uhat = np.asarray(self.uhat, complex)
        dv = np.real(1j * e[..., None, None] * np.outer(uhat, k))
        dp = np.real(1j * self.phat * e[..., None] * k)
        return dv, dp

    def evolved(self, t: float, cfg: AcousticConfig | None = None) -> "PlaneWave":
        m = fourier_mode_evolve(ModeState(self.k, self.uhat, self.phat), t, cfg)
        return PlaneWave(tuple(m.k), tuple(m.uhat), m.phat)


@dataclass(frozen=True)
class ModeSum:
    """Superposition of plane waves."""

    modes: Sequence[PlaneWave] = field(default_factory=tuple)

    def value(self, x):
        parts = [m.value(x) for m in self.modes]
        return sum(p[0] for p in parts), sum(p[1] for p in parts)

    def gradient(self, x):
        parts = [m.gradient(x) for m in self.modes]
        return sum(p[0] for p in parts), sum(p[1] for p in parts)

    def evolved(self, t: float, cfg: AcousticConfig | None = None) -> "ModeSum":
        return ModeSum(tuple(m.evolved(t, cfg) for m in self.modes))


@dataclass(frozen=True)
class GaussianPulse:
    """Gaussian bump in the (x, y) plane, constant along z.

    ``p0 = amplitude * g`` and ``v0 = velocity * g`` with
    ``g = exp(-|x_perp - center|^2 / width^2)``.
    """

    center: tuple = (0.0, 0.0)
    width: float = 1.0
    amplitude: float = 1.0
    velocity: tuple = (0.0, 0.0, 0.0)

    def _g(self, x):
        d = np.asarray(x)[..., :2] - np.asarray(self.center, float)
        return np.exp(-np.sum(d * d, axis=-1) / self.width**2), d

    def value(self, x):
        g, _ = self._g(x)
        return g[..., None] * np.asarray(self.velocity, float), self.amplitude * g

    def gradient(self, x):
        g, d = self._g(x)
        dg = np.zeros(g.shape + (3,))
        dg[..., :2] = -2.0 * d / self.width**2 * g[..., None]
        return dg[..., None, :] * np.asarray(self.velocity, float)[:, None], self.amplitude * dg


# -- quadrature -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SphereQuadrature:
    """Product rule on the unit sphere, polar axis along z.

    Gauss-Legendre in the polar angle (its ``sin`` Jacobian folded into the
    weights) times Gauss-Legendre on each of the four azimuthal quadrants.
    The quadrant panels keep the rule spectrally accurate for z-independent
    data whose kinks lie on the coordinate planes through the centre.
    Weights sum to ``4 pi``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    n_theta: int
    n_phi: int

    @classmethod
    def product(cls, n_theta: int = 24, n_phi: int = 12) -> "SphereQuadrature":
        """``n_theta`` polar nodes and ``n_phi`` nodes per azimuthal quadrant."""
        xt, wt = np.polynomial.legendre.leggauss(n_theta)
        theta = 0.5 * np.pi * (xt + 1.0)
        wtheta = 0.5 * np.pi * wt * np.sin(theta)
        xp, wp = np.polynomial.legendre.leggauss(n_phi)
        phi = np.concatenate([0.25 * np.pi * (xp + 1.0) + 0.5 * np.pi * q for q in range(4)])
        wphi = np.tile(0.25 * np.pi * wp, 4)
        th, ph = np.meshgrid(theta, phi, indexing="ij")
        nodes = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)
        return cls(nodes.reshape(-1, 3), np.outer(wtheta, wphi).ravel(), n_theta, n_phi)

    @property
    def n_quad(self) -> int:
        return len(self.weights)

    def average(self, values: np.ndarray, axis: int) -> np.ndarray:
        """Sphere mean of node samples stored along ``axis``."""
        return np.tensordot(np.moveaxis(values, axis, -1), self.weights, axes=1) / (4 * np.pi)


DEFAULT_QUADRATURE = SphereQuadrature.product()
DEFAULT_RADIAL = 16


def radial_nodes(radius: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on ``(0, radius)``, none at 0."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * radius * (x + 1.0), 0.5 * radius * w


def spherical_mean(f: Callable[[np.ndarray], np.ndarray], x, r: float,
                   quad: SphereQuadrature = DEFAULT_QUADRATURE):
    """Average of ``f`` over the sphere of radius ``r`` about ``x``.

    ``f`` maps points of shape ``(N, 3)`` to values of shape ``(N, ...)``.
    """
    x = np.asarray(x, dtype=np.float64)
    if r == 0:
        return np.asarray(f(x[None, :]))[0]
    vals = np.asarray(f(x[None, :] + r * quad.nodes))
    return quad.average(vals, axis=0)


# -- point evolution --------------------------------------------------------------


def _as_points(x) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[-1] == 2:
        x = np.concatenate([x, np.zeros(x.shape[:-1] + (1,))], axis=-1)
    return x, single


def _surface_terms(data, x, r, quad):
    """Sphere means at radius ``r`` needed by the solution formulae.

    Returns a dict of arrays with a leading axis over the points ``x``.
    """
    y = quad.nodes
    pts = x[:, None, :] + r * y[None, :, :]
    v0, p0 = data.value(pts)
    dv, dp = data.gradient(pts)
    ydp = np.einsum("mnj,nj->mn", dp, y)            # y . grad p0
    yv = np.einsum("mni,ni->mn", v0, y)             # y . v0
    ydvy = np.einsum("ni,mnij,nj->mn", y, dv, y)    # y . (grad v0) y
    avg = quad.average
    return {
        "p": avg(p0, 1),
        "yp_r": avg(ydp, 1),
        "yv": avg(yv, 1),
        "yv_r": avg(ydvy, 1),
        "py": avg(p0[..., None] * y, 1),
        "py_r": avg(ydp[..., None] * y, 1),
        "vyy": avg(yv[..., None] * y, 1),
        "vyy_r": avg(ydvy[..., None] * y, 1),
        "v": avg(v0, 1),
    }


def _timelike(data, x, radius, quad, n_radial, with_derivative=False):
    """Radial integrals over the interior of the ball.

    Returns ``int_0^R (B - 3A)/r dr`` where ``B = <v0>`` and
    ``A = <(v0.y) y>``; with ``with_derivative`` also ``int_0^R A'(r) dr``
    computed from the directional-derivative form of ``A'``.
    """
    r, w = radial_nodes(radius, n_radial)
    y = quad.nodes
    pts = x[:, None, None, :] + r[None, :, None, None] * y[None, None, :, :]
    v0, _ = data.value(pts)
    yv = np.einsum("mkni,ni->mkn", v0, y)
    deviator = quad.average(v0 - 3.0 * yv[..., None] * y, 2)   # (M, K, 3)
    tl = np.einsum("mki,k->mi", deviator, w / r)
    if not with_derivative:
        return tl
    dv, _ = data.gradient(pts)
    ydvy = np.einsum("ni,mknij,nj->mkn", y, dv, y)
    a_r = quad.average(ydvy[..., None] * y, 2)
    return tl, np.einsum("mki,k->mi", a_r, w)


def _checked(compute, n_radial, tol):
    first = compute(n_radial)
    if tol is None:
        return first
    second = compute(2 * n_radial)
    diff = float(np.max(np.abs(second - first)))
    if diff > tol:
        raise ConvergenceError(
            f"radial quadrature not converged: doubling n_radial={n_radial} changed result by {diff:.3e}"
        )
    return second


def evolve_point(data: InitialDataOracle, t: float, x, quad: SphereQuadrature | None = None,
                 n_radial: int = DEFAULT_RADIAL, *, speed: float = 1.0,
                 tol: float | None = None):
    """Exact solution ``(v, p)`` of the symmetric system at time ``t``.

    Parameters
    ----------
    data : InitialDataOracle
        Initial velocity and pressure with analytic first gradients.
    t : float
        Time, ``t >= 0``.
    x : array_like
        One point ``(3,)`` or many ``(M, 3)``; 2-vectors are placed at z=0.
    quad : SphereQuadrature, optional
        Rule for the unit sphere.
    n_radial : int
        Gauss-Legendre order for the radial integral over the ball.
    speed : float
        Wave speed ``c / epsilon``.
    tol : float, optional
        If given, the radial integral is recomputed with ``2 * n_radial``
        nodes and :class:`ConvergenceError` is raised when the two differ
        by more than ``tol``.

    Returns
    -------
    v : ndarray, shape (3,) or (M, 3)
    p : float or ndarray, shape (M,)

    Notes
    -----
    Only data inside the closed ball of radius ``speed * t`` about each
    point is queried. The radial integrand is bounded at ``r = 0`` because
    the deviatoric mean vanishes to second order there.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    quad = DEFAULT_QUADRATURE if quad is None else quad
    pts, single = _as_points(x)
    radius = speed * t
    if radius == 0.0:
        v, p = data.value(pts)
    else:
        s = _surface_terms(data, pts, radius, quad)
        p = s["p"] + radius * s["yp_r"] - 2.0 * s["yv"] - radius * s["yv_r"]
        tl = _checked(lambda n: _timelike(data, pts, radius, quad, n), n_radial, tol)
        v0c, _ = data.value(pts)
        v = (2.0 / 3.0 * v0c
             - (2.0 * s["py"] + radius * s["py_r"])
             + (s["vyy"] + radius * s["vyy_r"])
             - (s["v"] - 3.0 * s["vyy"])
             - tl)
    if single:
        return v[0], float(p[0])
    return v, p


def evolve_point_alt(data: InitialDataOracle, t: float, x, quad: SphereQuadrature | None = None,
                     n_radial: int = DEFAULT_RADIAL, *, speed: float = 1.0):
    """Velocity from the second radial-derivative form of the solution.

    Same quantity as the velocity of :func:`evolve_point`, but here the
    quadratic moment ``A(r) = <(v0.y) y>`` enters through the interior
    integral of its radial derivative instead of only at the sphere. Used
    to cross-check the two representations.
    """
    quad = DEFAULT_QUADRATURE if quad is None else quad
    pts, single = _as_points(x)
    radius = speed * t
    v0c, _ = data.value(pts)
    if radius == 0.0:
        return v0c[0] if single else v0c
    s = _surface_terms(data, pts, radius, quad)
    tl, a_int = _timelike(data, pts, radius, quad, n_radial, with_derivative=True)
    v = (v0c
         - (2.0 * s["py"] + radius * s["py_r"])
         + (3.0 * s["vyy"] + radius * s["vyy_r"] - s["v"])
         - tl + a_int)
    return v[0] if single else v
