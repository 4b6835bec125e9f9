"""Certified spectral and copy-counting checks for Turán-type graph families."""

from .errors import (DivergenceRisk, FamilyMismatchError, InvalidArgument, NumericError,
                     ParseError, SpecsatError, UnsupportedRegime, UnsupportedSize,
                     WalkOverflowError)
from .graph import Graph, complete_multipartite

__version__ = "0.1.0"

__all__ = [
    "Graph", "complete_multipartite", "SpecsatError", "InvalidArgument", "UnsupportedSize",
    "ParseError", "WalkOverflowError", "DivergenceRisk", "UnsupportedRegime", "NumericError",
    "FamilyMismatchError",
]
