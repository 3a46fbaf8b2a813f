"""The corner Riemann problem: u = 1 in the first quadrant, zero elsewhere.

The exact solution is sampled with adaptive quadrature and compared on the
positive x-axis against the closed-form logarithmic profile.
"""
import numpy as np

from acoustics2d.exact import log_kernel, riemann_field

t = 0.25
print(" r/t       v (quadrature)     v (closed form)")
for s in (0.1, 0.3, 0.5, 0.7, 0.9):
    _, v, _ = riemann_field(t, (s * t, 0.0))
    print(f"{s:4.1f}  {v:18.12f}  {log_kernel(s) / (2 * np.pi):18.12f}")

# Off the axis all three fields are nontrivial.
u, v, p = riemann_field(t, (0.1, 0.05))
print(f"at (0.1, 0.05): u={u:.6f} v={v:.6f} p={p:.6f}")
