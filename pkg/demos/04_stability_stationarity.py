"""Von Neumann analysis of the two schemes.

The multidimensional scheme is stable up to CFL 1, the dimensionally split
one only up to 1/2. Neither keeps all discrete divergence-free states
stationary, which the exact evolution does.
"""
import numpy as np

from acoustics2d.analysis import (
    exact_stationarity_determinant,
    spectral_radius_scan,
    stationarity_determinant,
)
from acoustics2d.core import AcousticConfig
from acoustics2d.schemes import SchemeKind

for scheme in SchemeKind:
    for cfl in (0.45, 0.6, 0.99):
        rho, where = spectral_radius_scan(scheme, AcousticConfig(cfl=cfl))
        flag = "stable" if rho <= 1 + 1e-10 else "UNSTABLE"
        print(f"{scheme.value:>10} cfl={cfl:4.2f}  max rho = {rho:.6f}  {flag}")

th = np.pi / 2
cfg = AcousticConfig(cfl=0.5, epsilon=1e-2)
print(f"|det(G - I)| at (pi/2, pi/2): scheme "
      f"{abs(stationarity_determinant(SchemeKind.MULTIDIM_GODUNOV, cfg, th, th)):.4f}, "
      f"exact {abs(exact_stationarity_determinant(cfg, th, th)):.1e}")
