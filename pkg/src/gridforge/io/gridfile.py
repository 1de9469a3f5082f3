"""JSON grid container.

Arrays are stored row-major with coord2 fastest. Floats are written with
Python's shortest round-trip representation, so reading a file back gives the
identical doubles.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from gridforge.grids.models import (
    EllipticGrid,
    FluxAlignedGrid,
    GridKind,
    Placement,
    StructuredGrid,
)
from gridforge.shared.errors import GridFileError

GRIDFILE_SCHEMA_VERSION = "1"

REQUIRED_ARRAYS = ("x", "y", "d1x", "d1y", "d2x", "d2y")
REQUIRED_CONSTANTS: dict[GridKind, tuple[str, ...]] = {
    GridKind.FLUX_ALIGNED: ("f0", "zeta1", "psi0", "psi1"),
    GridKind.ELLIPTIC: ("c0", "u1", "psi0", "psi1"),
}


class GridFile(BaseModel):
    """Serialized form of a flux-aligned or elliptic grid."""

    schema_version: Literal["1"] = GRIDFILE_SCHEMA_VERSION
    kind: GridKind
    placement: Placement = Placement.CENTERS
    n1: int = Field(ge=1)
    n2: int = Field(ge=1)
    coord1_nodes: list[float]
    coord2_nodes: list[float]
    constants: dict[str, float]
    arrays: dict[str, list[float]]
    provenance: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_shapes(self) -> GridFile:
        if len(self.coord1_nodes) != self.n1:
            raise ValueError(f"coord1_nodes has {len(self.coord1_nodes)} entries, expected {self.n1}")
        if len(self.coord2_nodes) != self.n2:
            raise ValueError(f"coord2_nodes has {len(self.coord2_nodes)} entries, expected {self.n2}")
        missing = [name for name in REQUIRED_CONSTANTS[self.kind] if name not in self.constants]
        if missing:
            raise ValueError(f"missing constants: {', '.join(missing)}")
        size = self.n1 * self.n2
        for name in REQUIRED_ARRAYS:
            if name not in self.arrays:
                raise ValueError(f"missing array '{name}'")
        for name, values in self.arrays.items():
            if len(values) != size:
                raise ValueError(f"array '{name}' has {len(values)} entries, expected n1*n2 = {size}")
        return self

    def array(self, name: str) -> np.ndarray:
        return np.asarray(self.arrays[name], dtype=float).reshape(self.n1, self.n2)


def _flat(values: np.ndarray) -> list[float]:
    return [float(v) for v in np.asarray(values, dtype=float).ravel()]


def grid_to_file(grid: StructuredGrid) -> GridFile:
    arrays = {
        "x": _flat(grid.x),
        "y": _flat(grid.y),
        "d1x": _flat(grid.d1x),
        "d1y": _flat(grid.d1y),
        "d2x": _flat(grid.d2x),
        "d2y": _flat(grid.d2y),
    }
    if grid.h is not None:
        arrays["h"] = _flat(grid.h)
    constants = {**grid.constants, "psi0": grid.psi0, "psi1": grid.psi1}
    return GridFile(
        kind=grid.kind,
        placement=grid.placement,
        n1=grid.n1,
        n2=grid.n2,
        coord1_nodes=_flat(grid.coord1),
        coord2_nodes=_flat(grid.coord2),
        constants={key: float(value) for key, value in constants.items()},
        arrays=arrays,
        provenance=dict(grid.provenance),
    )


def grid_from_file(document: GridFile) -> StructuredGrid:
    constants = dict(document.constants)
    psi0 = constants.pop("psi0")
    psi1 = constants.pop("psi1")
    extent_key = "zeta1" if document.kind is GridKind.FLUX_ALIGNED else "u1"
    cls = FluxAlignedGrid if document.kind is GridKind.FLUX_ALIGNED else EllipticGrid
    return cls(
        kind=document.kind,
        coord1=np.asarray(document.coord1_nodes, dtype=float),
        coord2=np.asarray(document.coord2_nodes, dtype=float),
        coord1_max=constants[extent_key],
        x=document.array("x"),
        y=document.array("y"),
        d1x=document.array("d1x"),
        d1y=document.array("d1y"),
        d2x=document.array("d2x"),
        d2y=document.array("d2y"),
        psi0=psi0,
        psi1=psi1,
        placement=document.placement,
        h=document.array("h") if "h" in document.arrays else None,
        constants=constants,
        provenance=dict(document.provenance),
    )


def dump_grid(grid: StructuredGrid) -> str:
    return json.dumps(grid_to_file(grid).model_dump(mode="json"), indent=2, sort_keys=True) + "\n"


def write_grid_file(grid: StructuredGrid, path: str | Path) -> Path:
    target = Path(path)
    try:
        target.write_text(dump_grid(grid), encoding="utf-8")
    except OSError as exc:
        raise GridFileError(f"Cannot write grid file {target}: {exc}") from exc
    return target


def load_grid_document(data: dict[str, Any]) -> GridFile:
    try:
        return GridFile.model_validate(data)
    except ValidationError as exc:
        raise GridFileError(f"Invalid grid file: {exc}") from exc


def read_grid_file(path: str | Path) -> StructuredGrid:
    source = Path(path)
    try:
        raw = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise GridFileError(f"Cannot read grid file {source}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise GridFileError(f"Grid file {source} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise GridFileError("Grid file must contain a JSON object")
    return grid_from_file(load_grid_document(data))
