"""A divergence-free vortex at low Mach number.

The exact evolution leaves it unchanged, but the Godunov scheme dissipates
a large share of its kinetic energy.
"""
from acoustics2d.experiments import default_config, run_experiment

for eps in (1.0, 1e-2):
    cfg = default_config("Vortex", epsilon=eps, nx=41, ny=41)
    res = run_experiment(cfg, write=False)
    e = res.report["kinetic_energy"]
    print(f"eps={eps:5.2f}: {res.report['steps']:5d} steps, "
          f"kinetic energy lost {100 * (1 - e[-1] / e[0]):.1f}%")
