"""Exact verification and re-derivation of left-symmetric structures on the
super-Virasoro algebras (Ramond and Neveu-Schwarz sectors), with coefficients
in the rational function field Q(e)."""
from .exactfield import GaussianRational, ParseError, PoleError, RatFun
from .structures import C, Element, G, HalfInt, L, Mode, Sector, StructureSystem, multiply, super_commutator
from .checker import Window, ViolationReport, verify_all
from .deriver import cross_check, derive_central, derive_centerless

__all__ = [
    "RatFun", "GaussianRational", "ParseError", "PoleError",
    "Sector", "HalfInt", "L", "G", "C", "Element", "Mode", "StructureSystem", "multiply", "super_commutator",
    "Window", "ViolationReport", "verify_all",
    "derive_centerless", "derive_central", "cross_check",
]
__version__ = "0.1.0"
