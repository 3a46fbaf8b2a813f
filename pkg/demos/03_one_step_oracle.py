"""One step of the multidimensional Godunov scheme equals exact evolution.

Starting from a unit impulse, the scheme's result at each cell centre is
the exact solution of its own bilinear reconstruction, evaluated at dt.
"""
import numpy as np

from acoustics2d.core import BoundaryKind, FieldSet, Grid2D
from acoustics2d.exact import evolve_point
from acoustics2d.schemes import godunov_step_update, sliding_average_reconstruction

g = Grid2D(7, 7, 1.0, 1.0)
cfg = g.config(cfl=0.5)
q = np.zeros((3, 7, 7))
q[2, 3, 3] = 1.0  # pressure impulse
f = FieldSet.from_array(q)

stepped = godunov_step_update(f, cfg, BoundaryKind.ZERO_GRADIENT)
X, Y = g.centers()
pts = np.stack([X[2:5, 2:5].ravel(), Y[2:5, 2:5].ravel(), np.zeros(9)], axis=-1)
v, p = evolve_point(sliding_average_reconstruction(f, g), cfg.dt, pts, speed=cfg.speed)

np.set_printoptions(precision=6, suppress=True)
print("pressure after one step (3x3 neighbourhood):")
print(stepped.p[2:5, 2:5])
print("max deviation from exact:", np.abs(stepped.p[2:5, 2:5] - p.reshape(3, 3)).max())
