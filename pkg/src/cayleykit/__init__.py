"""Exact combinatorics of Cayley structures, rational curves in toric varieties and their torus-orbit limits."""
from ._kernels import BACKEND
from .cayley import CayleyStructure, DomainError, WeakCayleyStructure, classify
from .polyhedra import Cone, Fan, LatticePolytope, PointConfiguration

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CayleyStructure",
    "Cone",
    "DomainError",
    "Fan",
    "LatticePolytope",
    "PointConfiguration",
    "WeakCayleyStructure",
    "classify",
]
