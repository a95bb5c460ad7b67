"""Analytic and finite-difference benchmark for non-equilibrium Marshak radiation
diffusion in a finite slab and a finite spherical shell."""

from .model import DimensionlessProblem, DomainError, FieldSnapshot, PhysicalParams, Shell, Slab
from .planar import PlanarSeries
from .roots import RootFindingError, find_roots
from .spherical import SphericalSeries
from .verify import compare, convergence_study, invert_numerically, laplace_space_u, series_for

__version__ = "0.1.0"


def build_series(problem: DimensionlessProblem, n_roots: int = 30):
    """Residue series for either geometry."""
    return series_for(problem, n_roots)


__all__ = [
    "DimensionlessProblem",
    "DomainError",
    "FieldSnapshot",
    "PhysicalParams",
    "PlanarSeries",
    "RootFindingError",
    "Shell",
    "Slab",
    "SphericalSeries",
    "build_series",
    "compare",
    "convergence_study",
    "find_roots",
    "invert_numerically",
    "laplace_space_u",
]
