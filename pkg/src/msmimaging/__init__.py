"""Monostatic and direct sampling imaging for limited-aperture 2-D scattering."""
from .errors import ConvergenceError, DegenerateDataError, DomainError
from .sampling import Grid, ImageMap
from .scattering import ApertureConfig, FarFieldData, Inhomogeneity, Scene

__all__ = [
    "ApertureConfig",
    "ConvergenceError",
    "DegenerateDataError",
    "DomainError",
    "FarFieldData",
    "Grid",
    "ImageMap",
    "Inhomogeneity",
    "Scene",
]
