"""Exact solution machinery for the acoustic system."""
from .fourier import Causality, ModeState, exact_symbol, fourier_mode_evolve, in_dependence_cone
from .riemann import log_kernel, riemann_axis_velocity, riemann_field, riemann_initial
from .spherical import (
    ConstantData,
    ConvergenceError,
    GaussianPulse,
    InitialDataOracle,
    ModeSum,
    PlaneWave,
    SphereQuadrature,
    evolve_point,
    evolve_point_alt,
    radial_nodes,
    spherical_mean,
)

__all__ = [
    "Causality",
    "ConstantData",
    "ConvergenceError",
    "GaussianPulse",
    "InitialDataOracle",
    "ModeState",
    "ModeSum",
    "PlaneWave",
    "SphereQuadrature",
    "evolve_point",
    "evolve_point_alt",
    "exact_symbol",
    "fourier_mode_evolve",
    "in_dependence_cone",
    "log_kernel",
    "radial_nodes",
    "riemann_axis_velocity",
    "riemann_field",
    "riemann_initial",
    "spherical_mean",
]
