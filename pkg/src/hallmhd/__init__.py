"""Pseudo-spectral Hall-MHD solver with a Littlewood-Paley verification toolkit."""

from .littlewood_paley import SobolevParams
from .solver import PhysicalParams, SolverConfig, State, compute_rhs, make_initial, run, step
from .spectral import Grid, SpectralField

__all__ = [
    "Grid",
    "SpectralField",
    "SobolevParams",
    "PhysicalParams",
    "SolverConfig",
    "State",
    "compute_rhs",
    "make_initial",
    "run",
    "step",
]

__version__ = "0.1.0"
