"""Tests for pass-2 elliptic grids; the conformal annulus grid is log-polar."""

import numpy as np
import pytest

from gridforge.flux.fields import AnnulusField
from gridforge.grids import InterpField, Placement, generate_orthogonal
from gridforge.grids.elliptic import basis_fields, compute_c0, dual_derivatives, generate_elliptic
from gridforge.grids.models import EllipticGrid, FluxAlignedGrid, GridKind
from gridforge.ode.angle import ThetaFrame
from gridforge.pipeline import GridType, RunConfig, run
from gridforge.quality import convergence_order, domain_area
from gridforge.shared.errors import (
    ClosureError,
    ConfigurationError,
    InterpolationOrderError,
    LatticeMismatchError,
    OutOfBoxError,
    SignChangeError,
    SingularJacobianError,
)
from gridforge.solver import ConformalChi, MonitorChi, ScalarField2, chi_on_grid, solve_ubar

LN2 = float(np.log(2.0))


@pytest.fixture(scope="module")
def conformal_grid(
    annulus: AnnulusField, annulus_vertex_grid: FluxAlignedGrid, annulus_ubar: ScalarField2
) -> EllipticGrid:
    return generate_elliptic(
        annulus_vertex_grid, annulus_ubar, ConformalChi(), 8, 32, field=annulus
    )


@pytest.fixture(scope="module")
def annulus_oracle() -> EllipticGrid:
    """Conformal annulus grid at 16 x 128 through the full pipeline defaults."""
    config = RunConfig(
        flux={"type": "annulus"},
        psi0=0.5,
        psi1=2.0,
        grid_type=GridType.CONFORMAL,
        n_u=16,
        n_v=128,
    )
    grid = run(config).grid
    assert isinstance(grid, EllipticGrid)
    return grid


def test_interp_field_is_periodic_and_clamped() -> None:
    zeta = np.linspace(0.0, 1.0, 6)
    eta = 2 * np.pi * np.arange(16) / 16
    values = zeta[:, None] + np.sin(eta)[None, :]
    field = InterpField(zeta, eta, values)

    assert float(field(np.array(0.4), np.array(0.3))) == pytest.approx(0.4 + np.sin(0.3), abs=1e-3)
    across = field(np.array([0.5, 0.5]), np.array([-0.1, 2 * np.pi - 0.1]))
    assert across[0] == pytest.approx(across[1], abs=1e-12)
    field(np.array([1.1]), np.array([0.0]))
    with pytest.raises(OutOfBoxError):
        field(np.array([1.3]), np.array([0.0]))


def test_interp_field_needs_cubic_order() -> None:
    zeta = np.linspace(0.0, 1.0, 6)
    eta = 2 * np.pi * np.arange(8) / 8

    with pytest.raises(InterpolationOrderError):
        InterpField(zeta, eta, np.zeros((6, 8)), order=1)


def test_c0_matches_the_log_polar_normalization(
    annulus: AnnulusField, annulus_vertex_grid: FluxAlignedGrid, annulus_ubar: ScalarField2
) -> None:
    chi = chi_on_grid(annulus_vertex_grid, annulus, ConformalChi())

    c0 = compute_c0(annulus_vertex_grid, chi, annulus_ubar)

    assert c0 == pytest.approx(LN2 / 1.5, rel=1e-2)


def test_c0_rejects_a_sign_changing_boundary_derivative(
    annulus: AnnulusField, annulus_vertex_grid: FluxAlignedGrid, annulus_ubar: ScalarField2
) -> None:
    chi = chi_on_grid(annulus_vertex_grid, annulus, ConformalChi())
    d_zeta = annulus_ubar.d_zeta.copy()
    d_zeta[0, 3] = -1.0
    broken = ScalarField2(
        annulus_ubar.zeta_nodes,
        annulus_ubar.eta_nodes,
        annulus_ubar.values,
        d_zeta,
        annulus_ubar.d_eta,
        annulus_ubar.psi0,
        annulus_ubar.psi1,
    )

    with pytest.raises(SignChangeError):
        compute_c0(annulus_vertex_grid, chi, broken)


def test_dual_derivatives_are_orthogonal_for_conformal_chi(
    annulus: AnnulusField, annulus_vertex_grid: FluxAlignedGrid, annulus_ubar: ScalarField2
) -> None:
    grid = annulus_vertex_grid
    chi = chi_on_grid(grid, annulus, ConformalChi())
    du, dv = dual_derivatives(annulus_ubar, chi, grid.sqrt_g, LN2 / 1.5)

    # v = eta on the annulus, so v_eta is close to one and v_zeta vanishes
    np.testing.assert_allclose(dv[1], 1.0, atol=2e-2)
    np.testing.assert_allclose(dv[0], 0.0, atol=1e-4)
    np.testing.assert_allclose(du[1], 0.0, atol=1e-4)

    basis = basis_fields(du, dv)
    np.testing.assert_allclose(basis.zeta_u * du[0], 1.0, atol=1e-4)


def test_basis_fields_reject_parallel_forms() -> None:
    ones = np.ones(3)
    with pytest.raises(SingularJacobianError):
        basis_fields((ones, ones), (2 * ones, 2 * ones))


def test_conformal_annulus_grid_is_log_polar(annulus_oracle: EllipticGrid) -> None:
    grid = annulus_oracle
    u, v = np.meshgrid(grid.u_nodes, grid.v_nodes, indexing="ij")

    assert grid.kind is GridKind.ELLIPTIC
    assert grid.placement is Placement.CENTERS
    assert grid.shape == (16, 128)
    assert grid.c0 == pytest.approx(LN2 / 1.5, abs=1e-6)
    assert grid.u1 == pytest.approx(LN2, abs=1e-6)
    # 1e-6 of the outer radius
    np.testing.assert_allclose(grid.x, np.exp(u) * np.cos(v), atol=2e-6)
    np.testing.assert_allclose(grid.y, np.exp(u) * np.sin(v), atol=2e-6)


def test_conformal_annulus_grid_one_forms(annulus_oracle: EllipticGrid) -> None:
    grid = annulus_oracle
    r2 = grid.x**2 + grid.y**2

    # u = ln r, v = theta
    np.testing.assert_allclose(grid.u_x, grid.x / r2, atol=1e-4)
    np.testing.assert_allclose(grid.u_y, grid.y / r2, atol=1e-4)
    np.testing.assert_allclose(grid.v_x, -grid.y / r2, atol=1e-4)
    np.testing.assert_allclose(grid.v_y, grid.x / r2, atol=1e-4)
    np.testing.assert_allclose(grid.sqrt_g, r2, rtol=2e-4)


def test_elliptic_grid_records_constants_and_provenance(conformal_grid: EllipticGrid) -> None:
    assert set(conformal_grid.constants) == {"c0", "u1", "boundary_angle"}
    assert conformal_grid.provenance["chi"] == {"type": "conformal"}
    assert conformal_grid.provenance["flux"]["type"] == "annulus"


def test_monitor_grid_on_the_annulus_is_still_polar(
    annulus: AnnulusField, annulus_vertex_grid: FluxAlignedGrid
) -> None:
    chi_model = MonitorChi(k=0.1, eps=0.001)
    ubar = solve_ubar(annulus_vertex_grid, chi_model, field=annulus)

    grid = generate_elliptic(
        annulus_vertex_grid, ubar, chi_model, 4, 16, field=annulus, placement=Placement.VERTICES
    )

    radius = np.hypot(grid.x, grid.y)
    np.testing.assert_allclose(radius[0], 1.0, atol=1e-4)
    np.testing.assert_allclose(radius[-1], 2.0, atol=5e-3)
    angles = np.unwrap(np.arctan2(grid.y[0], grid.x[0]))
    np.testing.assert_allclose(angles - angles[0], grid.v_nodes, atol=1e-3)


def test_elliptic_pass_needs_a_vertex_lattice(annulus: AnnulusField) -> None:
    frame = ThetaFrame(x0=0.0, y0=0.0)
    grid = generate_orthogonal(annulus, 0.5, 2.0, 4, 8, frame=frame)
    values = np.zeros(grid.shape)
    ubar = ScalarField2(grid.coord1, grid.coord2, values, values, values, 0.5, 2.0)

    with pytest.raises(ConfigurationError, match="vertex"):
        generate_elliptic(grid, ubar, ConformalChi(), 4, 8, field=annulus)


def test_elliptic_pass_checks_the_lattice_shape(
    annulus: AnnulusField, annulus_vertex_grid: FluxAlignedGrid
) -> None:
    values = np.zeros((3, 3))
    ubar = ScalarField2(np.arange(3.0), np.arange(3.0), values, values, values, 0.5, 2.0)

    with pytest.raises(LatticeMismatchError):
        generate_elliptic(annulus_vertex_grid, ubar, ConformalChi(), 4, 8, field=annulus)


def test_elliptic_pass_validates_cell_counts(
    annulus: AnnulusField, annulus_vertex_grid: FluxAlignedGrid, annulus_ubar: ScalarField2
) -> None:
    with pytest.raises(ConfigurationError, match="at least"):
        generate_elliptic(annulus_vertex_grid, annulus_ubar, ConformalChi(), 4, 2, field=annulus)


def test_oracle_grid_meets_the_boundaries_orthogonally(annulus_oracle: EllipticGrid) -> None:
    assert annulus_oracle.constants["boundary_angle"] < 1e-6


def test_oracle_grid_covers_the_annulus_area(annulus_oracle: EllipticGrid) -> None:
    assert domain_area(annulus_oracle) == pytest.approx(3.0 * np.pi, rel=1e-5)


def test_vertex_grid_ends_on_the_outer_contour() -> None:
    config = RunConfig(
        flux={"type": "annulus"},
        psi0=0.5,
        psi1=2.0,
        grid_type=GridType.MONITOR,
        n_u=8,
        n_v=64,
        placement=Placement.VERTICES,
    )

    grid = run(config).grid

    psi = 0.5 * (grid.x**2 + grid.y**2)
    np.testing.assert_allclose(psi[0], 0.5, atol=1e-6)
    np.testing.assert_allclose(psi[-1], 2.0, atol=1e-6)


def test_u_lines_that_reach_psi1_early_are_rejected(
    annulus: AnnulusField, annulus_vertex_grid: FluxAlignedGrid, annulus_ubar: ScalarField2
) -> None:
    values = annulus_ubar.values.copy()
    # overshoots psi1 a few rows before the outer boundary
    values[1:-1] = 0.5 + 1.05 * (values[1:-1] - 0.5)
    steep = ScalarField2(
        annulus_ubar.zeta_nodes,
        annulus_ubar.eta_nodes,
        values,
        annulus_ubar.d_zeta,
        annulus_ubar.d_eta,
        annulus_ubar.psi0,
        annulus_ubar.psi1,
    )

    with pytest.raises(OutOfBoxError):
        generate_elliptic(annulus_vertex_grid, steep, ConformalChi(), 4, 16, field=annulus)


def test_v_boundary_trace_must_close(
    annulus: AnnulusField, annulus_vertex_grid: FluxAlignedGrid, annulus_ubar: ScalarField2
) -> None:
    d_zeta = annulus_ubar.d_zeta.copy()
    d_zeta[0] *= 1.0 + 0.3 * np.cos(annulus_ubar.eta_nodes)
    uneven = ScalarField2(
        annulus_ubar.zeta_nodes,
        annulus_ubar.eta_nodes,
        annulus_ubar.values,
        d_zeta,
        annulus_ubar.d_eta,
        annulus_ubar.psi0,
        annulus_ubar.psi1,
    )

    grid = generate_elliptic(annulus_vertex_grid, uneven, ConformalChi(), 4, 16, field=annulus)
    assert grid.shape == (4, 16)
    with pytest.raises(ClosureError):
        generate_elliptic(
            annulus_vertex_grid, uneven, ConformalChi(), 4, 16, field=annulus, closure_tol=0.0
        )


def _jacobian_mismatch(grid: EllipticGrid) -> float:
    """Largest entry of (one-forms) x (differenced tangents) - identity inside the grid."""
    h_u = float(grid.u_nodes[1] - grid.u_nodes[0])
    h_v = float(grid.v_nodes[1] - grid.v_nodes[0])
    x_u = (grid.x[2:] - grid.x[:-2]) / (2 * h_u)
    y_u = (grid.y[2:] - grid.y[:-2]) / (2 * h_u)
    x_v = (np.roll(grid.x, -1, axis=1) - np.roll(grid.x, 1, axis=1))[1:-1] / (2 * h_v)
    y_v = (np.roll(grid.y, -1, axis=1) - np.roll(grid.y, 1, axis=1))[1:-1] / (2 * h_v)
    u_x, u_y = grid.u_x[1:-1], grid.u_y[1:-1]
    v_x, v_y = grid.v_x[1:-1], grid.v_y[1:-1]
    mismatch = np.stack(
        [
            u_x * x_u + u_y * y_u - 1.0,
            u_x * x_v + u_y * y_v,
            v_x * x_u + v_y * y_u,
            v_x * x_v + v_y * y_v - 1.0,
        ]
    )
    return float(np.abs(mismatch).max())


@pytest.mark.slow
def test_stored_one_forms_match_the_node_positions_at_second_order() -> None:
    errors = []
    for n_u in (8, 16, 32):
        config = RunConfig(
            flux={"type": "annulus"},
            psi0=0.5,
            psi1=2.0,
            grid_type=GridType.CONFORMAL,
            n_u=n_u,
            n_v=8 * n_u,
        )
        grid = run(config).grid
        assert isinstance(grid, EllipticGrid)
        errors.append(_jacobian_mismatch(grid))

    for order in convergence_order(errors):
        assert 1.8 <= order <= 2.3
