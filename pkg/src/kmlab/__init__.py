"""Exact geometry of left-invariant (para)contact metric structures on
three-dimensional Lie groups."""

from .families import FamilySpec, build
from .kappa_mu import d_homothety, invariants, solve_kappa_mu
from .lie import MetricLieAlgebra3, curvature, koszul_connection, validate
from .report import analyze
from .scalar import Surd, get_tolerance, set_tolerance
from .structure import StructureTensors, classify_structure

__all__ = [
    "FamilySpec",
    "MetricLieAlgebra3",
    "StructureTensors",
    "Surd",
    "analyze",
    "build",
    "classify_structure",
    "curvature",
    "d_homothety",
    "get_tolerance",
    "invariants",
    "koszul_connection",
    "set_tolerance",
    "solve_kappa_mu",
    "validate",
]
__version__ = "0.1.0"
