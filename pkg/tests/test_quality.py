"""Tests for grid quality metrics on the polar annulus grid."""

from dataclasses import replace

import numpy as np
import pytest

from gridforge.flux.fields import AnnulusField
from gridforge.grids import FluxAlignedGrid, GridKind, Placement, StructuredGrid
from gridforge.ode.angle import ThetaFrame
from gridforge.quality import (
    QualityReport,
    boundary_area,
    boundary_orthogonality,
    cell_lengths,
    domain_area,
    format_quality_table,
    non_orthogonality,
    quality_report,
    size_ratios,
)
from gridforge.shared.errors import NonPositiveValueError


def test_cell_lengths_of_the_polar_grid(annulus_vertex_grid: FluxAlignedGrid) -> None:
    grid = annulus_vertex_grid
    radius = np.hypot(grid.x, grid.y)

    l_u, l_v = cell_lengths(grid)

    # zeta = (r^2 - 1) / 2, so one zeta cell spans h1 / r in radius
    np.testing.assert_allclose(l_u, grid.h1 / radius, rtol=1e-6)
    np.testing.assert_allclose(l_v, radius * grid.h2, rtol=1e-6)


def test_size_ratios_of_the_polar_grid(annulus_vertex_grid: FluxAlignedGrid) -> None:
    a_u, a_v = size_ratios(*cell_lengths(annulus_vertex_grid))

    assert a_u == pytest.approx(2.0, rel=1e-6)
    assert a_v == pytest.approx(2.0, rel=1e-6)


def test_size_ratios_reject_degenerate_lengths() -> None:
    with pytest.raises(NonPositiveValueError, match="l_v"):
        size_ratios(np.ones(3), np.array([1.0, 0.0]))
    with pytest.raises(NonPositiveValueError, match="empty"):
        size_ratios(np.array([]), np.ones(2))


def test_domain_area_matches_the_contour_area(
    annulus: AnnulusField, annulus_vertex_grid: FluxAlignedGrid, origin_frame: ThetaFrame
) -> None:
    area = domain_area(annulus_vertex_grid)
    exact = boundary_area(annulus, 0.5, 2.0, origin_frame)

    assert exact == pytest.approx(3.0 * np.pi, rel=1e-9)
    assert area == pytest.approx(exact, rel=1e-6)


def test_polar_grid_is_orthogonal(annulus_vertex_grid: FluxAlignedGrid) -> None:
    angles = non_orthogonality(annulus_vertex_grid)

    assert angles.shape == annulus_vertex_grid.shape
    assert float(angles.max()) < 1e-6
    assert boundary_orthogonality(annulus_vertex_grid) < 1e-6


def test_non_orthogonality_of_a_sheared_grid(annulus_vertex_grid: FluxAlignedGrid) -> None:
    grid = annulus_vertex_grid
    # d(coord2) = (1, 1), d(coord1) = (1, 0): 45 degrees apart
    ones = np.ones(grid.shape)
    sheared = FluxAlignedGrid(
        kind=grid.kind,
        coord1=grid.coord1,
        coord2=grid.coord2,
        coord1_max=grid.coord1_max,
        x=grid.x,
        y=grid.y,
        d1x=ones,
        d1y=0.0 * ones,
        d2x=ones,
        d2y=ones,
        psi0=grid.psi0,
        psi1=grid.psi1,
        placement=grid.placement,
    )

    np.testing.assert_allclose(non_orthogonality(sheared), np.pi / 4)


def test_quality_report_summarizes_the_grid(annulus_vertex_grid: FluxAlignedGrid) -> None:
    report = quality_report(annulus_vertex_grid, name="polar")

    assert report.name == "polar"
    assert report.kind == "flux_aligned"
    assert (report.n1, report.n2) == (17, 64)
    assert report.a_u == pytest.approx(2.0, rel=1e-6)
    assert report.l_v_max == pytest.approx(2.0 * annulus_vertex_grid.h2, rel=1e-6)
    assert report.area == pytest.approx(3.0 * np.pi, rel=1e-6)


def test_format_quality_table_aligns_columns() -> None:
    reports = [
        QualityReport(
            name="orthogonal",
            kind="flux_aligned",
            n1=4,
            n2=8,
            l_u_max=12.3456,
            l_u_min=1.0,
            a_u=12.3456,
            l_v_max=3.0,
            l_v_min=1.5,
            a_v=2.0,
            area=10.0,
            boundary_angle=0.0,
            interior_angle=0.0,
        ),
        QualityReport(
            name="mon",
            kind="elliptic",
            n1=4,
            n2=8,
            l_u_max=2.0,
            l_u_min=1.0,
            a_u=2.0,
            l_v_max=2.0,
            l_v_min=1.0,
            a_v=2.0,
            area=10.0,
            boundary_angle=0.0,
            interior_angle=0.0,
        ),
    ]

    table = format_quality_table(reports)
    lines = table.splitlines()

    assert table.endswith("\n")
    assert len(lines) == 3
    assert lines[0].split() == ["grid", "l_u", "max", "l_u", "min", "a_u", "l_v", "max", "l_v", "min", "a_v"]
    assert lines[1].split()[:4] == ["orthogonal", "12.35", "1.00", "12.35"]
    assert lines[2].startswith("mon ")
    assert len(lines[1]) == len(lines[2])


def _exponential_volume_grid(placement: Placement, cells: int = 16) -> StructuredGrid:
    """Grid with sqrt(g) = exp(coord1) on coord1 in [0, 1]."""
    h1 = 1.0 / cells
    if placement is Placement.VERTICES:
        coord1 = h1 * np.arange(cells + 1)
    else:
        coord1 = h1 * (np.arange(cells) + 0.5)
    coord2 = 2 * np.pi * np.arange(8) / 8
    c1 = np.repeat(coord1[:, None], coord2.size, axis=1)
    zeros = np.zeros_like(c1)
    return StructuredGrid(
        kind=GridKind.FLUX_ALIGNED,
        coord1=coord1,
        coord2=coord2,
        coord1_max=1.0,
        x=c1,
        y=zeros,
        d1x=np.exp(-c1),
        d1y=zeros,
        d2x=zeros,
        d2y=np.ones_like(c1),
        psi0=0.0,
        psi1=1.0,
        placement=placement,
    )


@pytest.mark.parametrize("placement", [Placement.VERTICES, Placement.CENTERS])
def test_domain_area_is_fourth_order_in_coord1(placement: Placement) -> None:
    exact = 2 * np.pi * (np.e - 1.0)

    coarse = domain_area(_exponential_volume_grid(placement, 16))
    fine = domain_area(_exponential_volume_grid(placement, 32))

    # a second-order rule is off by about 1e-4 at 16 cells
    assert coarse == pytest.approx(exact, rel=1e-5)
    assert abs(coarse - exact) / abs(fine - exact) > 10.0


def test_boundary_orthogonality_prefers_the_traced_angle(
    annulus_vertex_grid: FluxAlignedGrid,
) -> None:
    traced = replace(annulus_vertex_grid, constants={"boundary_angle": 0.25})

    assert boundary_orthogonality(traced) == 0.25
    assert boundary_orthogonality(annulus_vertex_grid) < 1e-6
