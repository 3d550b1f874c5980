"""Cached 2D/3D triangulation data structures (explicit and implicit)."""

from .base import (
    NotPreconditionedError,
    QUERY_KINDS,
    SimplexRef,
    Triangulation,
    TriangulationError,
    validate_pseudo_manifold,
)
from .explicit import ExplicitTriangulation
from .implicit import ImplicitGridTriangulation

__all__ = [
    "ExplicitTriangulation",
    "ImplicitGridTriangulation",
    "NotPreconditionedError",
    "QUERY_KINDS",
    "SimplexRef",
    "Triangulation",
    "TriangulationError",
    "validate_pseudo_manifold",
]
