"""Quadratic knot invariant from long knot diagrams, computed in exact arithmetic."""
from .burau import alexander_polynomial, burau_determinant
from .diagram import BraidWord, LongDiagram, braid_to_decorated, decorate, parse_diagram
from .invariant import InvariantReport, full_report, run_pipeline
from .moves import fuzz, mirror

__version__ = "0.1.0"

__all__ = [
    "BraidWord", "LongDiagram", "InvariantReport",
    "parse_diagram", "decorate", "braid_to_decorated",
    "full_report", "run_pipeline",
    "burau_determinant", "alexander_polynomial",
    "fuzz", "mirror",
]
