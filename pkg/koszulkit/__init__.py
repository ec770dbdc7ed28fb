"""Koszul cohomology, syzygies and the computations around them."""
from .algebra import RingDescriptor, ScalarField, format_poly, parse_poly
from .exceptions import KoszulKitError
from .gradedmod import BettiTable, GradedModule, betti_table, minimal_free_resolution
from .groebner import IdealBasis, buchberger
from .koszul import koszul_cohomology_dim, koszul_table

__version__ = "1.0.0"

__all__ = [
    "BettiTable",
    "GradedModule",
    "IdealBasis",
    "KoszulKitError",
    "RingDescriptor",
    "ScalarField",
    "betti_table",
    "buchberger",
    "format_poly",
    "koszul_cohomology_dim",
    "koszul_table",
    "minimal_free_resolution",
    "parse_poly",
]
