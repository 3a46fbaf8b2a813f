"""Text output of cell fields: CSV and legacy VTK structured points."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .core import FieldSet, Grid2D

__all__ = ["read_fields_csv", "write_fields_csv", "write_vtk"]

CSV_HEADER = ("x", "y", "u", "v", "p")


def _fmt(a: float) -> str:
    return format(float(a), ".17g")


def write_fields_csv(fields: FieldSet, grid: Grid2D, path) -> Path:
    """Write one row per cell centre, ``i`` (x index) outermost.

    Values use 17 significant digits so that parsing restores every bit.
    """
    if fields.shape != grid.shape:
        raise ValueError("fields do not match grid")
    X, Y = grid.centers()
    cols = [a.ravel() for a in (X, Y, fields.u, fields.v, fields.p)]
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(",".join(CSV_HEADER) + "\n")
        for row in zip(*cols):
            fh.write(",".join(_fmt(a) for a in row) + "\n")
    return path


def read_fields_csv(path) -> tuple[FieldSet, Grid2D]:
    """Inverse of :func:`write_fields_csv`."""
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        data = np.array([[float(a) for a in row] for row in reader])
    xs = np.unique(data[:, 0])
    ys = np.unique(data[:, 1])
    nx, ny = len(xs), len(ys)
    if nx * ny != len(data) or nx < 2 or ny < 2:
        raise ValueError("CSV rows do not form a tensor grid")
    dx = (xs[-1] - xs[0]) / (nx - 1)
    dy = (ys[-1] - ys[0]) / (ny - 1)
    grid = Grid2D(nx, ny, dx, dy, xs[0] - 0.5 * dx, ys[0] - 0.5 * dy)
    order = np.lexsort((data[:, 1], data[:, 0]))
    q = data[order].reshape(nx, ny, 5)
    return FieldSet(q[..., 2], q[..., 3], q[..., 4]), grid


def write_vtk(fields: FieldSet, grid: Grid2D, path, title: str = "acoustics2d fields") -> Path:
    """Legacy ASCII VTK structured-points file with point data at cell centres."""
    if fields.shape != grid.shape:
        raise ValueError("fields do not match grid")
    n = grid.nx * grid.ny
    lines = [
        "# vtk DataFile Version 3.0",
        title,
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {grid.nx} {grid.ny} 1",
        f"ORIGIN {_fmt(grid.xc[0])} {_fmt(grid.yc[0])} 0",
        f"SPACING {_fmt(grid.dx)} {_fmt(grid.dy)} 1",
        f"POINT_DATA {n}",
        "SCALARS p double 1",
        "LOOKUP_TABLE default",
    ]
    # VTK runs x fastest, i.e. transposed relative to the (nx, ny) arrays
    lines += [_fmt(a) for a in fields.p.T.ravel()]
    lines.append("VECTORS velocity double")
    lines += [f"{_fmt(a)} {_fmt(b)} 0" for a, b in zip(fields.u.T.ravel(), fields.v.T.ravel())]
    path = Path(path)
    path.write_text("\n".join(lines) + "\n")
    return path
