"""Numerical and exact-rational verification of the Calderon-projector
construction of the Euclidean vacuum for linearized gravity (and Maxwell
fields) on global de Sitter space."""

__version__ = "0.1.0"

from .sectors import Family, SectorLabel, enumerate_sectors  # noqa: F401
