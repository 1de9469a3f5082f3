"""Geometric quality of a structured grid: cell lengths, size ratios, area, angles."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, Field

from gridforge.flux.fields import FluxField
from gridforge.flux.models import FloatArray
from gridforge.geometry.tensors import Metric2, inverse_metric_from_gradients
from gridforge.grids.models import StructuredGrid
from gridforge.ode.angle import ThetaFrame
from gridforge.ode.contours import enclosed_area
from gridforge.ode.integrator import IntegratorConfig
from gridforge.shared.errors import NonPositiveValueError


class QualityReport(BaseModel):
    """Per-grid quality summary; angles in radians."""

    name: str
    kind: str
    n1: int = Field(ge=1)
    n2: int = Field(ge=1)
    l_u_max: float
    l_u_min: float
    a_u: float = Field(ge=1.0)
    l_v_max: float
    l_v_min: float
    a_v: float = Field(ge=1.0)
    area: float = Field(gt=0)
    boundary_angle: float = Field(ge=0)
    interior_angle: float = Field(ge=0)


def grid_metric(grid: StructuredGrid) -> Metric2:
    return inverse_metric_from_gradients(grid.d1x, grid.d1y, grid.d2x, grid.d2y)


def cell_lengths(grid: StructuredGrid) -> tuple[FloatArray, FloatArray]:
    """Arc lengths of one cell along each coordinate direction at every node.

    l_u = sqrt(g) sqrt(g^{vv}) h_u and l_v = sqrt(g) sqrt(g^{uu}) h_v.
    """
    metric = grid_metric(grid)
    sqrt_g = np.asarray(metric.sqrt_g)
    l_u = sqrt_g * np.sqrt(np.asarray(metric.gvv)) * grid.h1
    l_v = sqrt_g * np.sqrt(np.asarray(metric.guu)) * grid.h2
    return l_u, l_v


def size_ratios(l_u: FloatArray, l_v: FloatArray) -> tuple[float, float]:
    """(max/min l_u, max/min l_v)."""
    ratios = []
    for name, lengths in (("l_u", l_u), ("l_v", l_v)):
        values = np.asarray(lengths, dtype=float)
        if values.size == 0:
            raise NonPositiveValueError(f"{name} (empty)", 0.0)
        smallest = float(values.min())
        if not smallest > 0:
            raise NonPositiveValueError(name, smallest)
        ratios.append(float(values.max()) / smallest)
    return ratios[0], ratios[1]


def domain_area(grid: StructuredGrid) -> float:
    """Quadrature of sqrt(g) over the computational box."""
    return float(np.sum(np.abs(grid.sqrt_g) * grid.quadrature_weights()))


def boundary_area(
    field: FluxField,
    psi0: float,
    psi1: float,
    frame: ThetaFrame,
    config: IntegratorConfig | None = None,
) -> float:
    """Area between the psi0 and psi1 contours from Green's theorem on each contour."""
    inner = enclosed_area(field, psi0, frame, config)
    outer = enclosed_area(field, psi1, frame, config)
    return abs(outer - inner)


def non_orthogonality(grid: StructuredGrid) -> FloatArray:
    """Angle by which grad u and grad v deviate from perpendicular."""
    metric = grid_metric(grid)
    cosine = np.abs(np.asarray(metric.guv)) / np.sqrt(
        np.asarray(metric.guu) * np.asarray(metric.gvv)
    )
    return np.arcsin(np.clip(cosine, 0.0, 1.0))


def boundary_orthogonality(grid: StructuredGrid) -> float:
    """Largest angle between a crossing coordinate line and grad psi on the boundary.

    Elliptic grids measure it on their traced u = 0 and u = u1 points and
    record it as the ``boundary_angle`` constant. Otherwise the first and last
    rows are used: they are the boundary for vertex placement, and flux-aligned
    grids are orthogonal on every row.
    """
    if "boundary_angle" in grid.constants:
        return float(grid.constants["boundary_angle"])
    angles = non_orthogonality(grid)
    return float(max(angles[0].max(), angles[-1].max()))


def quality_report(grid: StructuredGrid, name: str = "grid") -> QualityReport:
    l_u, l_v = cell_lengths(grid)
    a_u, a_v = size_ratios(l_u, l_v)
    return QualityReport(
        name=name,
        kind=grid.kind.value,
        n1=grid.n1,
        n2=grid.n2,
        l_u_max=float(l_u.max()),
        l_u_min=float(l_u.min()),
        a_u=a_u,
        l_v_max=float(l_v.max()),
        l_v_min=float(l_v.min()),
        a_v=a_v,
        area=domain_area(grid),
        boundary_angle=boundary_orthogonality(grid),
        interior_angle=float(non_orthogonality(grid).max()),
    )


_TABLE_COLUMNS = (
    ("grid", "name", "{}"),
    ("l_u max", "l_u_max", "{:.2f}"),
    ("l_u min", "l_u_min", "{:.2f}"),
    ("a_u", "a_u", "{:.2f}"),
    ("l_v max", "l_v_max", "{:.2f}"),
    ("l_v min", "l_v_min", "{:.2f}"),
    ("a_v", "a_v", "{:.2f}"),
)


def format_quality_table(reports: Sequence[QualityReport]) -> str:
    """Aligned plain-text table, one row per report."""
    rows = [[header for header, _, _ in _TABLE_COLUMNS]]
    for report in reports:
        rows.append([fmt.format(getattr(report, attr)) for _, attr, fmt in _TABLE_COLUMNS])
    widths = [max(len(row[i]) for row in rows) for i in range(len(_TABLE_COLUMNS))]
    lines = []
    for row in rows:
        first = row[0].ljust(widths[0])
        rest = [cell.rjust(width) for cell, width in zip(row[1:], widths[1:], strict=True)]
        lines.append("  ".join([first, *rest]).rstrip())
    return "\n".join(lines) + "\n"
