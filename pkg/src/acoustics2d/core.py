"""Grids, field storage, configuration and the discrete bracket operators.

Cell arrays are indexed ``q[i, j]`` with ``i`` running along x and ``j``
along y, so a field on an ``nx x ny`` grid has shape ``(nx, ny)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

__all__ = [
    "AcousticConfig",
    "BoundaryKind",
    "BracketValues",
    "FieldSet",
    "Grid2D",
    "Neighborhood3x3",
    "bracket_ops",
    "bracket_stencils",
    "ghost_fill",
    "neighborhood",
    "norms",
    "symmetrize",
    "unsymmetrize",
]


@dataclass(frozen=True)
class AcousticConfig:
    """Physical and numerical parameters of the scaled acoustic system.

    Parameters
    ----------
    c : float
        Sound speed.
    epsilon : float
        Mach number scaling. Waves travel at ``c / epsilon``.
    dx, dy : float
        Cell sizes.
    cfl : float
        Courant number; ``dt = cfl * epsilon * min(dx, dy) / c``.
    symmetric : bool
        Whether fields handed to the time loop are in symmetric variables
        (``p / (c epsilon)``) or in the scaled physical variables.
    """

    c: float = 1.0
    epsilon: float = 1.0
    dx: float = 1.0
    dy: float = 1.0
    cfl: float = 0.5
    symmetric: bool = True

    def __post_init__(self):
        for name in ("c", "epsilon", "dx", "dy", "cfl"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @property
    def speed(self) -> float:
        """Wave speed ``c / epsilon`` of the symmetric system."""
        return self.c / self.epsilon

    @property
    def dt(self) -> float:
        return self.cfl * self.epsilon * min(self.dx, self.dy) / self.c

    def with_(self, **changes) -> "AcousticConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class Grid2D:
    """Uniform Cartesian cell layout."""

    nx: int
    ny: int
    dx: float
    dy: float
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise ValueError("grid needs at least 3 cells per direction")
        if self.dx <= 0 or self.dy <= 0:
            raise ValueError("cell sizes must be positive")

    @classmethod
    def from_extents(cls, nx: int, ny: int, xlim=(0.0, 1.0), ylim=(0.0, 1.0)) -> "Grid2D":
        return cls(
            nx=nx,
            ny=ny,
            dx=(xlim[1] - xlim[0]) / nx,
            dy=(ylim[1] - ylim[0]) / ny,
            x0=xlim[0],
            y0=ylim[0],
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @property
    def xc(self) -> np.ndarray:
        return self.x0 + (np.arange(self.nx) + 0.5) * self.dx

    @property
    def yc(self) -> np.ndarray:
        return self.y0 + (np.arange(self.ny) + 0.5) * self.dy

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell-center coordinate arrays, each of shape ``(nx, ny)``."""
        return np.meshgrid(self.xc, self.yc, indexing="ij")

    def config(self, **kwargs) -> AcousticConfig:
        """An :class:`AcousticConfig` sharing this grid's spacings."""
        return AcousticConfig(dx=self.dx, dy=self.dy, **kwargs)


@dataclass
class FieldSet:
    """Cell values of the two velocity components and the pressure."""

    u: np.ndarray
    v: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        self.u = np.ascontiguousarray(self.u, dtype=np.float64)
        self.v = np.ascontiguousarray(self.v, dtype=np.float64)
        self.p = np.ascontiguousarray(self.p, dtype=np.float64)
        if not (self.u.shape == self.v.shape == self.p.shape) or self.u.ndim != 2:
            raise ValueError(
                f"field shapes differ: u{self.u.shape} v{self.v.shape} p{self.p.shape}"
            )

    @classmethod
    def zeros(cls, grid: Grid2D) -> "FieldSet":
        return cls(np.zeros(grid.shape), np.zeros(grid.shape), np.zeros(grid.shape))

    @classmethod
    def from_array(cls, q: np.ndarray) -> "FieldSet":
        return cls(q[0], q[1], q[2])

    @property
    def shape(self) -> tuple[int, int]:
        return self.u.shape

    def as_array(self) -> np.ndarray:
        """Stacked ``(3, nx, ny)`` copy in the order u, v, p."""
        return np.stack([self.u, self.v, self.p])

    def copy(self) -> "FieldSet":
        return FieldSet(self.u.copy(), self.v.copy(), self.p.copy())

    def totals(self, cell_area: float = 1.0) -> tuple[float, float, float]:
        return tuple(float(np.sum(q) * cell_area) for q in (self.u, self.v, self.p))

    def isfinite(self) -> bool:
        return bool(np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.v))
                    and np.all(np.isfinite(self.p)))

    def __add__(self, other: "FieldSet") -> "FieldSet":
        return FieldSet(self.u + other.u, self.v + other.v, self.p + other.p)

    def __sub__(self, other: "FieldSet") -> "FieldSet":
        return FieldSet(self.u - other.u, self.v - other.v, self.p - other.p)

    def __mul__(self, a: float) -> "FieldSet":
        return FieldSet(a * self.u, a * self.v, a * self.p)

    __rmul__ = __mul__


class BoundaryKind(Enum):
    ZERO_GRADIENT = "zero-gradient"
    PERIODIC = "periodic"


def ghost_fill(q: np.ndarray, bc: BoundaryKind, width: int = 1) -> np.ndarray:
    """Pad a cell array with ``width`` ghost layers on every side."""
    mode = {BoundaryKind.ZERO_GRADIENT: "edge", BoundaryKind.PERIODIC: "wrap"}[BoundaryKind(bc)]
    return np.pad(q, width, mode=mode)


@dataclass
class Neighborhood3x3:
    """Values around cell ``(i, j)``; ``vals[1 + di][1 + dj] = q[i + di, j + dj]``.

    Entries may be scalars or equally shaped arrays, in which case every
    bracket operator acts elementwise (one patch per array element).
    """

    vals: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.vals) != 3 or any(len(row) != 3 for row in self.vals):
            raise ValueError("a 3x3 neighborhood needs exactly nine values")

    def __call__(self, di: int, dj: int):
        return self.vals[1 + di][1 + dj]

    @classmethod
    def from_array(cls, patch) -> "Neighborhood3x3":
        patch = np.asarray(patch, dtype=np.float64)
        return cls([[patch[a, b] for b in range(3)] for a in range(3)])


def neighborhood(q: np.ndarray, bc: BoundaryKind) -> Neighborhood3x3:
    """Neighborhoods of every cell of ``q`` as array views into a padded copy."""
    g = ghost_fill(q, bc)
    nx, ny = q.shape
    return Neighborhood3x3([[g[a:a + nx, b:b + ny] for b in range(3)] for a in range(3)])


@dataclass
class BracketValues:
    """Difference and sum operators on a 3x3 patch.

    Names follow the index direction: ``_x`` acts along ``i``, ``_y``
    along ``j``. For example ``diff_wide_x`` is ``q[i+1] - q[i-1]`` and
    ``second_diff_x`` is ``q[i+1] - 2 q[i] + q[i-1]``.
    """

    diff_half_x: object      # [q]_{i+1/2}
    diff_half_y: object      # [q]_{j+1/2}
    sum_half_x: object       # {q}_{i+1/2}
    sum_half_y: object       # {q}_{j+1/2}
    diff_wide_x: object      # [q]_{i±1}
    diff_wide_y: object      # [q]_{j±1}
    second_diff_x: object    # [[q]]_{i±1/2}
    second_diff_y: object    # [[q]]_{j±1/2}
    second_sum_x: object     # {{q}}_{i±1/2}
    second_sum_y: object     # {{q}}_{j±1/2}
    cross_half: object       # {[q]_{i+1/2}}_{j+1/2}
    cross_wide: object       # [[q]_{i±1}]_{j±1}
    wide_x_second_y: object  # [[ [q]_{i±1} ]]_{j±1/2}
    second_x_wide_y: object  # [ [[q]]_{i±1/2} ]_{j±1}
    cross_second: object     # [[ [[q]]_{i±1/2} ]]_{j±1/2}


def bracket_ops(n: Neighborhood3x3) -> BracketValues:
    q = n

    def wide_x(dj):
        return q(1, dj) - q(-1, dj)

    def second_x(dj):
        return q(1, dj) - 2 * q(0, dj) + q(-1, dj)

    return BracketValues(
        diff_half_x=q(1, 0) - q(0, 0),
        diff_half_y=q(0, 1) - q(0, 0),
        sum_half_x=q(1, 0) + q(0, 0),
        sum_half_y=q(0, 1) + q(0, 0),
        diff_wide_x=wide_x(0),
        diff_wide_y=q(0, 1) - q(0, -1),
        second_diff_x=second_x(0),
        second_diff_y=q(0, 1) - 2 * q(0, 0) + q(0, -1),
        second_sum_x=q(1, 0) + 2 * q(0, 0) + q(-1, 0),
        second_sum_y=q(0, 1) + 2 * q(0, 0) + q(0, -1),
        cross_half=q(1, 1) - q(0, 1) + q(1, 0) - q(0, 0),
        cross_wide=wide_x(1) - wide_x(-1),
        wide_x_second_y=wide_x(1) - 2 * wide_x(0) + wide_x(-1),
        second_x_wide_y=second_x(1) - second_x(-1),
        cross_second=second_x(1) - 2 * second_x(0) + second_x(-1),
    )


def bracket_stencils() -> BracketValues:
    """Every bracket operator as a 3x3 weight array ``w[1 + di, 1 + dj]``."""
    basis = np.eye(9).reshape(9, 3, 3)
    ops = bracket_ops(Neighborhood3x3([[basis[:, a, b] for b in range(3)] for a in range(3)]))
    return BracketValues(**{k: np.asarray(w).reshape(3, 3) for k, w in vars(ops).items()})


def symmetrize(fields: FieldSet, cfg: AcousticConfig) -> FieldSet:
    """Scaled physical variables to symmetric ones: ``p -> p / (c epsilon)``."""
    scale = cfg.c * cfg.epsilon
    if scale == 0:
        raise ValueError("c * epsilon must be nonzero")
    return FieldSet(fields.u.copy(), fields.v.copy(), fields.p / scale)


def unsymmetrize(fields: FieldSet, cfg: AcousticConfig) -> FieldSet:
    scale = cfg.c * cfg.epsilon
    if scale == 0:
        raise ValueError("c * epsilon must be nonzero")
    return FieldSet(fields.u.copy(), fields.v.copy(), fields.p * scale)


def norms(a: FieldSet, b: FieldSet, grid: Grid2D) -> dict[str, dict[str, float]]:
    """L1, L2 and max norms of ``a - b`` per component, weighted by cell area.

    Returns ``{"u": {"L1": ..., "L2": ..., "Linf": ...}, "v": ..., "p": ...}``.
    """
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    out = {}
    for name in ("u", "v", "p"):
        d = np.abs(getattr(a, name) - getattr(b, name))
        out[name] = {
            "L1": float(np.sum(d) * grid.cell_area),
            "L2": float(np.sqrt(np.sum(d * d) * grid.cell_area)),
            "Linf": float(np.max(d)),
        }
    return out
