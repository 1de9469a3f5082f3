"""Structured grid containers and the orthogonal flux-aligned generator.

The elliptic generator lives in ``gridforge.grids.elliptic``; it depends on the
solver package, which itself builds on the containers exported here.
"""

from gridforge.grids.interpolation import InterpField
from gridforge.grids.models import (
    TWO_PI,
    EllipticGrid,
    FirstLine,
    FluxAlignedGrid,
    GridKind,
    Placement,
    StructuredGrid,
    WeightMode,
    coordinate_nodes,
    periodic_nodes,
)
from gridforge.grids.orthogonal import (
    LatticeConfig,
    compute_f0,
    extend_radial,
    generate_lattices,
    generate_orthogonal,
    make_theta_frame,
    trace_boundary,
    weight_values,
)

__all__ = [
    "TWO_PI",
    "EllipticGrid",
    "FirstLine",
    "FluxAlignedGrid",
    "GridKind",
    "InterpField",
    "LatticeConfig",
    "Placement",
    "StructuredGrid",
    "WeightMode",
    "compute_f0",
    "coordinate_nodes",
    "extend_radial",
    "generate_lattices",
    "generate_orthogonal",
    "make_theta_frame",
    "periodic_nodes",
    "trace_boundary",
    "weight_values",
]
