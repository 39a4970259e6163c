"""hrg: higher-rank graph presentations, embeddability analysis, orbit-space
tests, and triangle-group 2-graphs."""

from .presentation import Edge, KGraphPresentation, ValidationReport
from .morphisms import (
    Morphism,
    adjacency_matrices,
    canonical_form,
    compose,
    connectivity_report,
    morphism_from_word,
    morphisms,
    segment,
    vertex_morphism,
)
from .lazy import LazyKGraph, window_of
from .catalog import catalog

__version__ = "0.1.0"

__all__ = [
    "Edge",
    "KGraphPresentation",
    "ValidationReport",
    "Morphism",
    "adjacency_matrices",
    "canonical_form",
    "compose",
    "connectivity_report",
    "morphism_from_word",
    "morphisms",
    "segment",
    "vertex_morphism",
    "LazyKGraph",
    "window_of",
    "catalog",
    "__version__",
]
