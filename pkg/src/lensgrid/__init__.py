"""Combinatorial link Floer homology and HOMFLY-PT skein calculus in lens spaces."""

from __future__ import annotations

from .grid import (
    DiagramError,
    DiagramSyntaxError,
    GridDiagram,
    lift_diagram,
    make_trivial_link,
    parse_diagram,
    recognize_trivial,
    reverse_orientation,
    serialize_diagram,
    trace_components,
    validate,
)

__all__ = [
    "DiagramError",
    "DiagramSyntaxError",
    "GridDiagram",
    "lift_diagram",
    "make_trivial_link",
    "parse_diagram",
    "recognize_trivial",
    "reverse_orientation",
    "serialize_diagram",
    "trace_components",
    "validate",
]
