"""Pass 2: elliptic (u, v) grids from the potential u-bar.

u = c0 (u-bar - psi0) and v is its chi-weighted Hodge dual. Both are built on
the flux-aligned lattice, then the coordinate lines are traced in the
(zeta, eta) box and the pass-1 arrays interpolated onto the traced points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import structlog
from scipy.interpolate import CubicSpline

from gridforge.flux.fields import FluxField
from gridforge.flux.models import FloatArray
from gridforge.geometry.tensors import (
    Jacobian2,
    JacobianKind,
    SymTensor2,
    compose_oneforms,
    invert_jacobian,
)
from gridforge.grids.interpolation import InterpField
from gridforge.grids.models import (
    TWO_PI,
    EllipticGrid,
    FluxAlignedGrid,
    GridKind,
    Placement,
    coordinate_nodes,
    periodic_nodes,
)
from gridforge.ode.integrator import IntegratorConfig, integrate_streamlines
from gridforge.shared.errors import (
    ClosureError,
    ConfigurationError,
    LatticeMismatchError,
    OutOfBoxError,
    SignChangeError,
)
from gridforge.solver.ubar import ChiModel, ScalarField2, chi_on_grid

logger = structlog.get_logger()


@dataclass(frozen=True, slots=True)
class BasisFields:
    """Components of d/du and d/dv in (zeta, eta)."""

    zeta_u: FloatArray
    eta_u: FloatArray
    zeta_v: FloatArray
    eta_v: FloatArray


def _boundary_flux(chi: SymTensor2, ubar: ScalarField2, sqrt_g: FloatArray) -> FloatArray:
    return sqrt_g[0] * (
        np.asarray(chi.xx)[0] * ubar.d_zeta[0] + np.asarray(chi.xy)[0] * ubar.d_eta[0]
    )


def compute_c0(grid: FluxAlignedGrid, chi: SymTensor2, ubar: ScalarField2) -> float:
    """Normalization making v run over [0, 2 pi) along the psi0 boundary.

    The periodic trapezoid rule integrates sqrt(g) chi^{zeta zeta} u-bar_zeta
    over eta at zeta = 0.
    """
    d_zeta = ubar.d_zeta[0]
    if not (np.all(d_zeta > 0) or np.all(d_zeta < 0)):
        raise SignChangeError("u-bar zeta derivative on the psi0 boundary")
    total = float(np.sum(_boundary_flux(chi, ubar, grid.sqrt_g)) * grid.h2)
    c0 = TWO_PI / total
    logger.debug("Computed c0", c0=c0, boundary_flux=total)
    return c0


def dual_derivatives(
    ubar: ScalarField2, chi: SymTensor2, sqrt_g: FloatArray, c0: float
) -> tuple[tuple[FloatArray, FloatArray], tuple[FloatArray, FloatArray]]:
    """(u_zeta, u_eta) and (v_zeta, v_eta) at every lattice node."""
    u_zeta = c0 * ubar.d_zeta
    u_eta = c0 * ubar.d_eta
    cxx, cxy, cyy = np.asarray(chi.xx), np.asarray(chi.xy), np.asarray(chi.yy)
    v_zeta = -c0 * sqrt_g * (cxy * ubar.d_zeta + cyy * ubar.d_eta)
    v_eta = c0 * sqrt_g * (cxx * ubar.d_zeta + cxy * ubar.d_eta)
    return (u_zeta, u_eta), (v_zeta, v_eta)


def basis_fields(
    du: tuple[FloatArray, FloatArray], dv: tuple[FloatArray, FloatArray]
) -> BasisFields:
    """Vectors dual to (du, dv); raises SingularJacobianError where they are parallel."""
    forms = Jacobian2(du[0], du[1], dv[0], dv[1], JacobianKind.ONE_FORMS)
    scale = float(np.max(np.abs(np.stack(np.broadcast_arrays(*du, *dv)))))
    tangents = invert_jacobian(forms, scale)
    return BasisFields(
        zeta_u=np.asarray(tangents.a11),
        zeta_v=np.asarray(tangents.a12),
        eta_u=np.asarray(tangents.a21),
        eta_v=np.asarray(tangents.a22),
    )


def _trace_v_boundary(
    boundary_flux: FloatArray,
    eta_nodes: FloatArray,
    c0: float,
    zeta0: float,
    v_nodes: FloatArray,
    config: IntegratorConfig,
) -> tuple[FloatArray, float]:
    """eta at each v node along zeta = 0, and where v = 2 pi lands.

    d eta / dv = 1 / (c0 q) with q the periodic cubic spline of the boundary
    flux; the spline integrates to the trapezoid sum that defines c0, so the
    trace closes up to the integration error.
    """
    flux = CubicSpline(
        np.append(eta_nodes, eta_nodes[0] + TWO_PI),
        np.append(boundary_flux, boundary_flux[0]),
        bc_type="periodic",
        extrapolate="periodic",
    )

    def along_boundary(z: FloatArray, e: FloatArray) -> tuple[FloatArray, FloatArray]:
        return np.zeros_like(z), 1.0 / (c0 * flux(e))

    targets = np.append(v_nodes, TWO_PI)
    points, _ = integrate_streamlines(
        along_boundary, np.array([[zeta0, float(eta_nodes[0])]]), 0.0, targets, config
    )
    return points[:-1, 0, 1], float(points[-1, 0, 1])


def _boundary_angles(
    field: FluxField, x: FloatArray, y: FloatArray, v_x: FloatArray, v_y: FloatArray
) -> FloatArray:
    """Angle between the u-line tangent, normal to grad v, and grad psi."""
    jet = field.jet(x, y)
    px, py = np.asarray(jet.dx), np.asarray(jet.dy)
    return np.arctan2(np.abs(v_x * px + v_y * py), np.abs(px * v_y - py * v_x))


def generate_elliptic(
    grid: FluxAlignedGrid,
    ubar: ScalarField2,
    chi_model: ChiModel,
    n_u: int,
    n_v: int,
    config: IntegratorConfig | None = None,
    *,
    field: FluxField,
    order: int = 3,
    placement: Placement = Placement.CENTERS,
    closure_tol: float | None = None,
    arrival_tol: float = 1e-7,
) -> EllipticGrid:
    """Elliptic grid with ``n_u`` by ``n_v`` cells from a vertex-placed pass-1 grid.

    The v lines start where d/dv, traced along zeta = 0 from eta = 0, reaches
    the v nodes. Each u line follows d/du reparameterized by the interpolated
    u-bar, so it stops on u-bar = psi0 + u / c0 and its last point lies on the
    psi1 boundary. ``closure_tol`` is a physical distance, 1e-8 times the
    field's length scale by default; ``arrival_tol`` is relative to zeta1.
    """
    if grid.placement is not Placement.VERTICES:
        raise ConfigurationError("The elliptic pass needs a vertex-placed flux-aligned grid")
    if ubar.values.shape != grid.shape:
        raise LatticeMismatchError(grid.shape, ubar.values.shape)
    if n_u < 1 or n_v < 4:
        raise ConfigurationError("Need at least 1 radial and 4 poloidal cells")
    config = config or IntegratorConfig()
    closure_tol = closure_tol if closure_tol is not None else 1e-8 * field.length_scale

    chi = chi_on_grid(grid, field, chi_model)
    sqrt_g = grid.sqrt_g
    c0 = compute_c0(grid, chi, ubar)
    du, dv = dual_derivatives(ubar, chi, sqrt_g, c0)
    basis = basis_fields(du, dv)
    u_x, u_y = compose_oneforms(du, grid.jacobian())
    v_x, v_y = compose_oneforms(dv, grid.jacobian())

    def interp(values: FloatArray) -> InterpField:
        return InterpField(grid.zeta_nodes, grid.eta_nodes, values, order=order)

    x_of, y_of = interp(grid.x), interp(grid.y)
    zeta_u, eta_u = interp(basis.zeta_u), interp(basis.eta_u)
    ubar_of = interp(ubar.values)

    u1 = c0 * (grid.psi1 - grid.psi0)
    u_nodes = coordinate_nodes(u1, n_u, placement)
    v_nodes = periodic_nodes(n_v, placement)
    zeta0 = float(grid.zeta_nodes[0])
    zeta1 = float(grid.zeta_nodes[-1])

    eta_start, eta_end = _trace_v_boundary(
        _boundary_flux(chi, ubar, sqrt_g), grid.eta_nodes, c0, zeta0, v_nodes, config
    )
    origin = np.array([zeta0]), np.array([float(grid.eta_nodes[0])])
    landing = np.array([zeta0]), np.array([eta_end])
    gap = float(
        np.hypot(
            x_of(*landing)[0] - x_of(*origin)[0],
            y_of(*landing)[0] - y_of(*origin)[0],
        )
    )
    logger.debug("v boundary trace closed", gap=gap, tolerance=closure_tol)
    if gap > closure_tol:
        raise ClosureError(gap, closure_tol)

    def along_u(z: FloatArray, e: FloatArray) -> tuple[FloatArray, FloatArray]:
        return zeta_u(z, e), eta_u(z, e)

    def ubar_gradient(z: FloatArray, e: FloatArray) -> tuple[FloatArray, FloatArray]:
        return ubar_of(z, e, dzeta=1), ubar_of(z, e, deta=1)

    starts = np.column_stack([np.full(n_v, zeta0), eta_start])
    levels = grid.psi0 + np.append(u_nodes, u1) / c0
    points, _ = integrate_streamlines(
        along_u, starts, grid.psi0, levels, config, param_gradient=ubar_gradient
    )
    zeta = points[:-1, :, 0]
    eta = points[:-1, :, 1]
    arrival = points[-1, :, 0]
    miss = np.abs(arrival - zeta1)
    if float(miss.max()) > arrival_tol * abs(zeta1):
        worst = float(arrival[int(np.argmax(miss))])
        raise OutOfBoxError(worst, zeta0, zeta1)

    v_x_of, v_y_of = interp(np.asarray(v_x)), interp(np.asarray(v_y))
    edge_zeta = np.concatenate([np.full(n_v, zeta0), arrival])
    edge_eta = np.concatenate([eta_start, points[-1, :, 1]])
    angles = _boundary_angles(
        field,
        x_of(edge_zeta, edge_eta),
        y_of(edge_zeta, edge_eta),
        v_x_of(edge_zeta, edge_eta),
        v_y_of(edge_zeta, edge_eta),
    )
    boundary_angle = float(angles.max())

    result = EllipticGrid(
        kind=GridKind.ELLIPTIC,
        coord1=u_nodes,
        coord2=v_nodes,
        coord1_max=u1,
        x=x_of(zeta, eta),
        y=y_of(zeta, eta),
        d1x=interp(np.asarray(u_x))(zeta, eta),
        d1y=interp(np.asarray(u_y))(zeta, eta),
        d2x=v_x_of(zeta, eta),
        d2y=v_y_of(zeta, eta),
        psi0=grid.psi0,
        psi1=grid.psi1,
        placement=placement,
        constants={"c0": c0, "u1": u1, "boundary_angle": boundary_angle},
        provenance={**grid.provenance, "chi": chi_model.model_dump(mode="json")},
    )
    logger.info(
        "Generated elliptic grid",
        chi=chi_model.type,
        c0=c0,
        u1=u1,
        n_u=result.n1,
        n_v=result.n2,
        placement=placement.value,
        closure_gap=gap,
        boundary_angle=boundary_angle,
    )
    return result
