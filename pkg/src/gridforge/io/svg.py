"""SVG wireframe of a structured grid with the bounding psi contours."""

from __future__ import annotations

from typing import Any

import contourpy
import numpy as np
import structlog

from gridforge.flux.fields import FluxField
from gridforge.flux.models import FloatArray
from gridforge.flux.presets import load_field_from_dict
from gridforge.grids.models import StructuredGrid
from gridforge.shared.errors import ConfigurationError

logger = structlog.get_logger()

COORD1_COLOR = "#1f4e79"
COORD2_COLOR = "#c55a11"
CONTOUR_COLOR = "#000000"
ZERO_CONTOUR_COLOR = "#7f7f7f"


def svg_number(value: float) -> str:
    return f"{value:.6g}"


def _path(points: FloatArray, color: str, *, closed: bool, dashed: bool = False) -> str:
    # SVG y grows downward
    steps = [f"{svg_number(px)} {svg_number(-py)}" for px, py in points]
    d = "M " + " L ".join(steps) + (" Z" if closed else "")
    dash = ' stroke-dasharray="4 3"' if dashed else ""
    return (
        f'<path d="{d}" fill="none" stroke="{color}" stroke-width="1"'
        f' vector-effect="non-scaling-stroke"{dash}/>'
    )


def coordinate_lines(
    grid: StructuredGrid, stride: int = 1
) -> tuple[list[FloatArray], list[FloatArray]]:
    """Every ``stride``-th line of each family as (k, 2) point arrays.

    Lines of constant coord1 are closed curves; lines of constant coord2 run
    from the first to the last coord1 row.
    """
    if stride < 1:
        raise ConfigurationError("stride must be at least 1")
    rows = [np.column_stack([grid.x[i], grid.y[i]]) for i in range(0, grid.n1, stride)]
    cols = [np.column_stack([grid.x[:, j], grid.y[:, j]]) for j in range(0, grid.n2, stride)]
    return rows, cols


def psi_contours(
    field: FluxField,
    levels: list[float],
    bounds: tuple[float, float, float, float],
    resolution: int = 200,
) -> dict[float, list[FloatArray]]:
    """Contour polylines of psi over a sampled box (xmin, xmax, ymin, ymax)."""
    xmin, xmax, ymin, ymax = bounds
    xs = np.linspace(xmin, xmax, resolution)
    ys = np.linspace(ymin, ymax, resolution)
    gx, gy = np.meshgrid(xs, ys)
    psi = np.asarray(field.psi(gx, gy), dtype=float)
    generator = contourpy.contour_generator(gx, gy, psi)
    result: dict[float, list[FloatArray]] = {}
    for level in levels:
        lines: Any = generator.lines(level)
        result[level] = [np.asarray(line) for line in lines if len(line) > 1]
    return result


def _field_from_provenance(grid: StructuredGrid) -> FluxField | None:
    flux = grid.provenance.get("flux")
    if isinstance(flux, dict):
        return load_field_from_dict(flux)
    return None


def emit_svg(
    grid: StructuredGrid,
    stride: int = 1,
    *,
    field: FluxField | None = None,
    contours: bool = True,
    width: int = 800,
    resolution: int = 200,
) -> str:
    """SVG document with both coordinate-line families.

    With a flux field (given, or recorded in the grid's provenance) the psi0,
    psi1 and psi = 0 contours are drawn on top; psi = 0 dashed.
    """
    rows, cols = coordinate_lines(grid, stride)
    xmin, xmax = float(grid.x.min()), float(grid.x.max())
    ymin, ymax = float(grid.y.min()), float(grid.y.max())
    pad = 0.05 * max(xmax - xmin, ymax - ymin, 1e-12)
    xmin, xmax, ymin, ymax = xmin - pad, xmax + pad, ymin - pad, ymax + pad
    box_w, box_h = xmax - xmin, ymax - ymin
    height = max(1, round(width * box_h / box_w))

    elements = [
        '<svg xmlns="http://www.w3.org/2000/svg"'
        f' viewBox="{svg_number(xmin)} {svg_number(-ymax)} {svg_number(box_w)} {svg_number(box_h)}"'
        f' width="{width}" height="{height}">',
        '<g id="coord1-lines">',
        *(_path(line, COORD1_COLOR, closed=True) for line in rows),
        "</g>",
        '<g id="coord2-lines">',
        *(_path(line, COORD2_COLOR, closed=False) for line in cols),
        "</g>",
    ]

    field = field or (_field_from_provenance(grid) if contours else None)
    if contours and field is not None:
        levels = [grid.psi0, grid.psi1, 0.0]
        traced = psi_contours(field, levels, (xmin, xmax, ymin, ymax), resolution)
        elements.append('<g id="psi-contours">')
        for level in levels:
            color = ZERO_CONTOUR_COLOR if level == 0.0 else CONTOUR_COLOR
            for line in traced[level]:
                elements.append(_path(line, color, closed=False, dashed=level == 0.0))
        elements.append("</g>")

    elements.append("</svg>")
    logger.debug("Rendered SVG", rows=len(rows), columns=len(cols), stride=stride)
    return "\n".join(elements) + "\n"
