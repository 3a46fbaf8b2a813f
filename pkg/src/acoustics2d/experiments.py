"""Experiment registry, initial conditions, profiles and the batch runner.

Every experiment starts from point values sampled at cell centres. Fields
are held in physical variables and the time loop symmetrizes them
internally.
"""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .core import AcousticConfig, BoundaryKind, FieldSet, Grid2D, norms
from .exact.riemann import riemann_axis_velocity, riemann_field
from .exact.spherical import PlaneWave
from .io import read_fields_csv, write_fields_csv
from .schemes import SchemeKind, run

__all__ = [
    "Experiment",
    "ExperimentConfig",
    "ExperimentResult",
    "RadialProfile",
    "VortexData",
    "default_config",
    "extract_axis_profile",
    "init_experiment",
    "kinetic_energy",
    "profile_l1_error",
    "run_experiment",
]


class Experiment(Enum):
    RIEMANN_CORNER = "RiemannCorner"
    RIEMANN_SIGN_XY = "RiemannSignXY"
    VORTEX = "Vortex"
    PLANE_WAVE = "PlaneWave"
    CUSTOM = "Custom"


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one run.

    ``t_end`` is a physical time; waves travel at ``c / epsilon``. The
    quadrature orders only matter when an exact reference is sampled.
    ``initial`` names a fields CSV and is required for ``Custom``.
    """

    experiment: Experiment = Experiment.RIEMANN_CORNER
    scheme: SchemeKind = SchemeKind.MULTIDIM_GODUNOV
    nx: int = 101
    ny: int = 101
    xlim: tuple[float, float] = (-1.0, 1.0)
    ylim: tuple[float, float] = (-1.0, 1.0)
    cfl: float = 0.99
    epsilon: float = 1.0
    c: float = 1.0
    t_end: float = 0.25
    boundary: BoundaryKind = BoundaryKind.ZERO_GRADIENT
    out_dir: str = "out"
    n_theta: int = 24
    n_phi: int = 12
    n_radial: int = 16
    reference: bool = False
    r0: float = 0.2
    initial: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "experiment", Experiment(self.experiment))
        object.__setattr__(self, "scheme", SchemeKind(self.scheme))
        object.__setattr__(self, "boundary", BoundaryKind(self.boundary))
        for name in ("nx", "ny", "n_theta", "n_phi", "n_radial"):
            if int(getattr(self, name)) != getattr(self, name) or getattr(self, name) <= 0:
                raise ValueError(f"{name} must be a positive integer")
        for name in ("cfl", "epsilon", "c", "r0"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not self.t_end >= 0:
            raise ValueError("t_end must be non-negative")
        if not (self.xlim[1] > self.xlim[0] and self.ylim[1] > self.ylim[0]):
            raise ValueError("domain extents must be increasing")
        if self.experiment is Experiment.CUSTOM and not self.initial:
            raise ValueError("Custom experiments need an 'initial' fields CSV")

    def grid(self) -> Grid2D:
        return Grid2D.from_extents(self.nx, self.ny, self.xlim, self.ylim)

    def acoustic(self) -> AcousticConfig:
        g = self.grid()
        return AcousticConfig(c=self.c, epsilon=self.epsilon, dx=g.dx, dy=g.dy,
                              cfl=self.cfl, symmetric=False)

    def with_(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)


_DEFAULTS = {
    Experiment.RIEMANN_CORNER: {},
    Experiment.RIEMANN_SIGN_XY: {},
    Experiment.VORTEX: dict(nx=51, ny=51, xlim=(-0.5, 0.5), ylim=(-0.5, 0.5), cfl=0.8,
                            epsilon=1e-2, t_end=1.0),
    Experiment.PLANE_WAVE: dict(nx=64, ny=64, xlim=(0.0, 1.0), ylim=(0.0, 1.0), cfl=0.45,
                                boundary=BoundaryKind.PERIODIC),
    Experiment.CUSTOM: {},
}


def default_config(experiment, **overrides) -> ExperimentConfig:
    """Registry defaults for ``experiment`` with ``overrides`` applied."""
    exp = Experiment(experiment)
    return ExperimentConfig(experiment=exp, **{**_DEFAULTS[exp], **overrides})


# -- initial data ------------------------------------------------------------------


def _snap(x: np.ndarray, h: float) -> np.ndarray:
    """Treat coordinates within round-off of zero as exactly zero."""
    return np.where(np.abs(x) < 1e-9 * h, 0.0, x)


def _heaviside(x: np.ndarray) -> np.ndarray:
    return np.where(x > 0, 1.0, np.where(x == 0, 0.5, 0.0))


def _vortex_profile(r, r0):
    return np.where(r < r0, r / r0, np.where(r < 2 * r0, 2.0 - r / r0, 0.0))


@dataclass(frozen=True)
class VortexData:
    """Compactly supported vortex with constant pressure, as an initial-data oracle.

    The velocity is ``e_phi * f(r)`` with ``f`` rising linearly to 1 at
    ``r0`` and falling back to 0 at ``2 r0``. It is divergence free, so the
    exact evolution leaves it unchanged.
    """

    r0: float = 0.2
    pressure: float = 1.0
    center: tuple = (0.0, 0.0)

    def _geometry(self, x):
        d = np.asarray(x, float)[..., :2] - np.asarray(self.center, float)
        r = np.hypot(d[..., 0], d[..., 1])
        return d, r

    def value(self, x):
        d, r = self._geometry(x)
        with np.errstate(invalid="ignore", divide="ignore"):
            h = np.where(r > 0, _vortex_profile(r, self.r0) / r, 0.0)
        v = np.zeros(r.shape + (3,))
        v[..., 0] = -h * d[..., 1]
        v[..., 1] = h * d[..., 0]
        return v, np.full(r.shape, float(self.pressure))

    def gradient(self, x):
        d, r = self._geometry(x)
        r0 = self.r0
        inner = r < r0
        ring = (r >= r0) & (r < 2 * r0)
        with np.errstate(invalid="ignore", divide="ignore"):
            h = np.where(inner, 1.0 / r0, np.where(ring, 2.0 / r - 1.0 / r0, 0.0))
            dh = np.where(ring, -2.0 / r**2, 0.0)
            dr = np.where(r > 0, 1.0, 0.0)[..., None] * d / np.where(r > 0, r, 1.0)[..., None]
        w = np.stack([-d[..., 1], d[..., 0]], axis=-1)
        dv = np.zeros(r.shape + (3, 3))
        dv[..., :2, :2] = (dh[..., None, None] * w[..., :, None] * dr[..., None, :])
        dv[..., 0, 1] -= h
        dv[..., 1, 0] += h
        return dv, np.zeros(r.shape + (3,))


def _plane_wave(cfg: ExperimentConfig) -> PlaneWave:
    Lx = cfg.xlim[1] - cfg.xlim[0]
    Ly = cfg.ylim[1] - cfg.ylim[0]
    k = np.array([2 * np.pi / Lx, 2 * np.pi / Ly, 0.0])
    return PlaneWave(tuple(k), tuple(k / np.linalg.norm(k)), 1.0)


def init_experiment(cfg: ExperimentConfig, grid: Grid2D | None = None) -> FieldSet:
    """Cell-centre samples of the initial data in physical variables.

    Heaviside jumps take the value 1/2 on cells centred on the jump line
    (the cell average), and ``sign(0) = 0``.
    """
    grid = cfg.grid() if grid is None else grid
    if grid.shape != (cfg.nx, cfg.ny):
        raise ValueError("grid does not match the experiment configuration")
    X, Y = grid.centers()
    X, Y = _snap(X, grid.dx), _snap(Y, grid.dy)
    zero = np.zeros(grid.shape)
    exp = cfg.experiment
    if exp is Experiment.RIEMANN_CORNER:
        return FieldSet(_heaviside(X) * _heaviside(Y), zero, zero)
    if exp is Experiment.RIEMANN_SIGN_XY:
        s = np.sign(X) * np.sign(Y)
        return FieldSet(s, s.copy(), zero)
    if exp is Experiment.VORTEX:
        v, p = VortexData(cfg.r0).value(np.stack([X, Y], axis=-1))
        return FieldSet(v[..., 0], v[..., 1], p)
    if exp is Experiment.PLANE_WAVE:
        v, p = _plane_wave(cfg).value(np.stack([X, Y, zero], axis=-1))
        return FieldSet(v[..., 0], v[..., 1], p * cfg.c * cfg.epsilon)
    if exp is Experiment.CUSTOM:
        fields, g = read_fields_csv(cfg.initial)
        if g.shape != grid.shape:
            raise ValueError(f"initial CSV has shape {g.shape}, expected {grid.shape}")
        return fields
    raise ValueError(f"unknown experiment {exp!r}")


def kinetic_energy(fields: FieldSet, grid: Grid2D) -> float:
    return float(0.5 * np.sum(fields.u**2 + fields.v**2) * grid.cell_area)


# -- profiles ----------------------------------------------------------------------


@dataclass
class RadialProfile:
    r: np.ndarray
    value: np.ndarray
    exact: np.ndarray | None = None

    def __post_init__(self):
        self.r = np.asarray(self.r, float)
        self.value = np.asarray(self.value, float)
        if self.exact is not None:
            self.exact = np.asarray(self.exact, float)
        if np.any(np.diff(self.r) <= 0):
            raise ValueError("profile radii must be strictly increasing")

    def to_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w") as fh:
            fh.write("r,value,exact\n")
            for i, (r, v) in enumerate(zip(self.r, self.value)):
                e = "" if self.exact is None else format(float(self.exact[i]), ".17g")
                fh.write(f"{float(r):.17g},{float(v):.17g},{e}\n")
        return path


def _row_at_zero(q: np.ndarray, grid: Grid2D) -> np.ndarray:
    """Values along the line ``y = 0``, interpolating linearly between rows."""
    s = (0.0 - grid.yc[0]) / grid.dy
    j = int(np.floor(s + 1e-9))
    a = s - j
    if not 0 <= j < grid.ny:
        raise ValueError("the line y = 0 lies outside the grid")
    if abs(a) < 1e-9 or j == grid.ny - 1:
        return q[:, j].copy()
    return (1 - a) * q[:, j] + a * q[:, j + 1]


def _ray(fields: FieldSet, grid: Grid2D, component: str):
    vals = _row_at_zero(getattr(fields, component), grid)
    x = _snap(grid.xc, grid.dx)
    keep = x > 0
    return x[keep], vals[keep]


def extract_axis_profile(fields: FieldSet, grid: Grid2D, cfg: ExperimentConfig,
                         t: float | None = None) -> RadialProfile:
    """Transverse velocity along the jump line ``y = 0``, ``x > 0``, of the corner problem.

    The exact column holds the closed-form axis velocity at time ``t``
    (``cfg.t_end`` by default).
    """
    if cfg.experiment is not Experiment.RIEMANN_CORNER:
        raise ValueError("axis profiles are defined for the RiemannCorner experiment only")
    t = cfg.t_end if t is None else t
    r, vals = _ray(fields, grid, "v")
    acfg = cfg.acoustic()
    exact = np.array([riemann_axis_velocity(t, ri, acfg) for ri in r]) if t > 0 else np.zeros_like(r)
    return RadialProfile(r, vals, exact)


def profile_l1_error(profile: RadialProfile, r_max: float | None = None) -> float:
    """``sum |value - exact| * dr`` over samples with ``r <= r_max``."""
    if profile.exact is None:
        raise ValueError("profile has no exact column")
    keep = np.ones_like(profile.r, bool) if r_max is None else profile.r <= r_max
    dr = np.diff(profile.r).mean() if len(profile.r) > 1 else 1.0
    return float(np.sum(np.abs(profile.value - profile.exact)[keep]) * dr)


# -- runner ------------------------------------------------------------------------


@dataclass
class ExperimentResult:
    fields: FieldSet
    grid: Grid2D
    report: dict
    profile: RadialProfile | None = None
    paths: dict = field(default_factory=dict)


def _config_dict(cfg: ExperimentConfig) -> dict:
    d = asdict(cfg)
    for k in ("experiment", "scheme", "boundary"):
        d[k] = getattr(cfg, k).value
    d["xlim"], d["ylim"] = list(cfg.xlim), list(cfg.ylim)
    return d


def _reference(cfg: ExperimentConfig, grid: Grid2D, q0: FieldSet) -> FieldSet | None:
    exp = cfg.experiment
    acfg = cfg.acoustic()
    if exp is Experiment.VORTEX:
        return q0.copy()
    if exp is Experiment.PLANE_WAVE:
        X, Y = grid.centers()
        v, p = _plane_wave(cfg).evolved(cfg.t_end, acfg).value(np.stack([X, Y, 0 * X], axis=-1))
        return FieldSet(v[..., 0], v[..., 1], p * cfg.c * cfg.epsilon)
    if exp is Experiment.RIEMANN_CORNER and cfg.t_end > 0:
        X, Y = grid.centers()
        out = np.zeros((3,) + grid.shape)
        for i in range(grid.nx):
            for j in range(grid.ny):
                x = (_snap(X[i, j], grid.dx), _snap(Y[i, j], grid.dy))
                if x == (0.0, 0.0):
                    out[:, i, j] = np.nan
                    continue
                out[:, i, j] = riemann_field(cfg.t_end, x, acfg)
        out[2] *= cfg.c * cfg.epsilon
        return FieldSet.from_array(out)
    return None


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> ExperimentResult:
    """Run one experiment and, if ``write``, store its artifacts in ``cfg.out_dir``.

    Files: ``fields.csv`` (final state), ``profile.csv`` (when a profile is
    defined), ``report.json`` (deterministic) and ``timing.json`` (wall time).
    """
    grid = cfg.grid()
    acfg = cfg.acoustic()
    q0 = init_experiment(cfg, grid)
    energy = [kinetic_energy(q0, grid)]

    def track(n, t, q):
        # q is in symmetric variables; velocities are unaffected
        energy.append(kinetic_energy(q, grid))

    start = time.perf_counter()
    q, reports = run(q0, acfg, cfg.boundary, cfg.scheme, cfg.t_end, callback=track)
    wall = time.perf_counter() - start

    before = reports[0].totals_before if reports else q0.totals(grid.cell_area)
    after = reports[-1].totals_after if reports else before
    report = {
        "config": _config_dict(cfg),
        "steps": len(reports),
        "dt": acfg.dt,
        "t_end": cfg.t_end,
        "totals_initial": list(before),
        "totals_final": list(after),
        "total_drift": [a - b for a, b in zip(after, before)],
        "max_step_drift": max((max(abs(a - b) for a, b in zip(r.totals_after, r.totals_before))
                               for r in reports), default=0.0),
        "kinetic_energy": energy,
        "finite": q.isfinite(),
    }

    profile = None
    if cfg.experiment is Experiment.RIEMANN_CORNER:
        profile = extract_axis_profile(q, grid, cfg)
        if cfg.t_end > 0:
            report["profile_l1_error"] = profile_l1_error(profile)
    elif cfg.experiment is Experiment.VORTEX:
        r, vals = _ray(q, grid, "v")
        profile = RadialProfile(r, vals)

    if cfg.reference or cfg.experiment in (Experiment.VORTEX, Experiment.PLANE_WAVE):
        ref = _reference(cfg, grid, q0)
        if ref is not None:
            mask = np.isfinite(ref.p)
            ref = FieldSet(*(np.where(mask, a, b) for a, b in
                             zip(ref.as_array(), q.as_array())))
            report["reference_error"] = norms(q, ref, grid)

    paths = {}
    if write:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths["fields"] = write_fields_csv(q, grid, out / "fields.csv")
        if profile is not None:
            paths["profile"] = profile.to_csv(out / "profile.csv")
        paths["report"] = out / "report.json"
        paths["report"].write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        paths["timing"] = out / "timing.json"
        paths["timing"].write_text(json.dumps({"wall_time_s": wall}) + "\n")
    return ExperimentResult(q, grid, report, profile, paths)
