"""Finite-volume laboratory for two-dimensional linear acoustics."""
__version__ = "0.1.0"
