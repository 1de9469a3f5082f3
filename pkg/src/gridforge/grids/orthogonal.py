"""Pass 1: orthogonal flux-aligned (zeta, eta) grids.

zeta = f0 (psi - psi0) labels the contours of psi and eta is constant along the
gradient lines of psi, with d eta = h (-psi_y dx + psi_x dy). h is carried along
every radial streamline by its own ODE, starting from f0 / w on the first line.
"""

from __future__ import annotations

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field

from gridforge.flux.fields import FluxField
from gridforge.flux.models import FloatArray, FluxJet
from gridforge.grids.models import (
    TWO_PI,
    FirstLine,
    FluxAlignedGrid,
    GridKind,
    Placement,
    WeightMode,
    coordinate_nodes,
    periodic_nodes,
)
from gridforge.ode.angle import ThetaFrame
from gridforge.ode.contours import contour_tangent, polygon_centroid, theta_gradient, trace_contour
from gridforge.ode.integrator import IntegratorConfig, integrate_streamlines, integrate_with_aux
from gridforge.ode.roots import find_flux_point
from gridforge.shared.errors import ClosureError, ConfigurationError, SingularGradientError

logger = structlog.get_logger()


def weight_values(weight: WeightMode, jet: FluxJet) -> FloatArray:
    grad_sq = np.asarray(jet.grad_sq, dtype=float)
    if weight is WeightMode.GRAD_PSI:
        return np.sqrt(grad_sq)
    return np.ones_like(grad_sq)


def _checked_jet(field: FluxField, x: FloatArray, y: FloatArray) -> FluxJet:
    jet = field.jet(x, y)
    grad_sq = np.asarray(jet.grad_sq)
    if np.any(grad_sq == 0.0):
        k = int(np.argmin(grad_sq))
        raise SingularGradientError(
            float(np.asarray(x).flat[k]), float(np.asarray(y).flat[k]), 0.0
        )
    return jet


def make_theta_frame(
    field: FluxField,
    psi0: float,
    config: IntegratorConfig | None = None,
    n: int = 64,
) -> ThetaFrame:
    """Centroid of a coarse polygonal trace of the psi0 contour."""
    gx, gy = field.axis_guess()
    provisional = ThetaFrame(x0=gx, y0=gy)
    coarse = (config or IntegratorConfig()).model_copy(update={"rtol": 1e-8, "atol": 1e-10})
    points = trace_contour(field, psi0, provisional, n, coarse, closure_tol=1e-5 * field.length_scale)
    cx, cy = polygon_centroid(points)
    logger.debug("Theta frame", x0=cx, y0=cy, axis_x=gx, axis_y=gy)
    return ThetaFrame(x0=cx, y0=cy)


def compute_f0(
    field: FluxField,
    psi0: float,
    psi1: float,
    frame: ThetaFrame,
    config: IntegratorConfig | None = None,
    weight: WeightMode = WeightMode.UNITY,
) -> tuple[float, float]:
    """Normalization f0 making eta 2 pi-periodic, and h at the eta = 0 point.

    f0 = 2 pi / (closed integral over theta of |grad psi|^2 / (w D)) with
    D = psi_x theta_y - psi_y theta_x; its sign is then set so that zeta grows
    from psi0 to psi1.
    """
    start = find_flux_point(field, frame, psi0, psi_scale=abs(psi1 - psi0))

    def integrand(x: FloatArray, y: FloatArray, aux: FloatArray) -> FloatArray:
        jet = _checked_jet(field, x, y)
        tx, ty = theta_gradient(frame)(x, y)
        denom = np.asarray(jet.dx) * ty - np.asarray(jet.dy) * tx
        return (np.asarray(jet.grad_sq) / (weight_values(weight, jet) * denom))[None, :]

    line = integrate_with_aux(
        contour_tangent(field),
        integrand,
        start,
        0.0,
        0.0,
        TWO_PI,
        config,
        param_gradient=theta_gradient(frame),
    )
    assert line.aux_end is not None
    f0_raw = TWO_PI / float(line.aux_end[0])
    f0 = abs(f0_raw) * float(np.sign(psi1 - psi0))
    h_start = f0 / float(weight_values(weight, field.jet(*start)))
    logger.debug("Computed f0", f0=f0, raw=f0_raw, weight=weight.value)
    return f0, h_start


def trace_boundary(
    field: FluxField,
    psi0: float,
    frame: ThetaFrame,
    eta_nodes: FloatArray,
    f0: float,
    weight: WeightMode,
    config: IntegratorConfig | None = None,
    *,
    closure_tol: float | None = None,
    psi_scale: float | None = None,
) -> FloatArray:
    """Points of the psi0 contour at the requested eta values.

    eta is itself the integration parameter, so every node is hit exactly; the
    trace continues to eta = 2 pi to check that the contour closes.
    """
    start = np.asarray(find_flux_point(field, frame, psi0, psi_scale=psi_scale), dtype=float)

    def eta_gradient(x: FloatArray, y: FloatArray) -> tuple[FloatArray, FloatArray]:
        jet = _checked_jet(field, x, y)
        h = f0 / weight_values(weight, jet)
        return -h * np.asarray(jet.dy), h * np.asarray(jet.dx)

    targets = np.append(np.asarray(eta_nodes, dtype=float), TWO_PI)
    points, _ = integrate_streamlines(
        contour_tangent(field),
        start[None, :],
        0.0,
        targets,
        config,
        param_gradient=eta_gradient,
    )
    gap = float(np.hypot(*(points[-1, 0] - start)))
    tol = closure_tol if closure_tol is not None else 1e-8 * field.length_scale
    logger.debug("Boundary trace closed", gap=gap, tolerance=tol)
    if gap > tol:
        raise ClosureError(gap, tol)
    return points[:-1, 0, :]


def extend_radial(
    field: FluxField,
    boundary_points: FloatArray,
    zeta_nodes: FloatArray,
    f0: float,
    h0: FloatArray | None = None,
    weight: WeightMode = WeightMode.UNITY,
    config: IntegratorConfig | None = None,
    *,
    eta_nodes: FloatArray | None = None,
    psi0: float | None = None,
    zeta1: float | None = None,
    placement: Placement = Placement.CENTERS,
) -> FluxAlignedGrid:
    """Follow d/d zeta = grad psi / (f0 |grad psi|^2) from every boundary point.

    h rides along with dh/d zeta = -Δψ h / (f0 |grad psi|^2).
    """
    boundary_points = np.asarray(boundary_points, dtype=float).reshape(-1, 2)
    n_eta = boundary_points.shape[0]
    bx, by = boundary_points[:, 0], boundary_points[:, 1]
    if h0 is None:
        h0 = f0 / weight_values(weight, _checked_jet(field, bx, by))

    def d_zeta(x: FloatArray, y: FloatArray) -> tuple[FloatArray, FloatArray]:
        jet = _checked_jet(field, x, y)
        scale = 1.0 / (f0 * np.asarray(jet.grad_sq))
        return np.asarray(jet.dx) * scale, np.asarray(jet.dy) * scale

    def dh(x: FloatArray, y: FloatArray, aux: FloatArray) -> FloatArray:
        jet = _checked_jet(field, x, y)
        return -np.asarray(jet.laplacian) * aux / (f0 * np.asarray(jet.grad_sq))

    zeta_nodes = np.asarray(zeta_nodes, dtype=float)
    points, aux = integrate_streamlines(
        d_zeta,
        boundary_points,
        0.0,
        zeta_nodes,
        config,
        aux_rhs=dh,
        aux_start=np.asarray(h0, dtype=float).reshape(n_eta, 1),
    )
    assert aux is not None
    x = points[:, :, 0]
    y = points[:, :, 1]
    h = aux[:, :, 0]
    jet = field.jet(x, y)
    psi0_value = float(np.mean(field.psi(bx, by))) if psi0 is None else psi0
    zeta1_value = float(zeta_nodes[-1]) if zeta1 is None else zeta1
    return FluxAlignedGrid(
        kind=GridKind.FLUX_ALIGNED,
        coord1=zeta_nodes,
        coord2=(
            np.asarray(eta_nodes, dtype=float)
            if eta_nodes is not None
            else periodic_nodes(n_eta, placement)
        ),
        coord1_max=zeta1_value,
        x=x,
        y=y,
        d1x=f0 * np.asarray(jet.dx),
        d1y=f0 * np.asarray(jet.dy),
        d2x=-h * np.asarray(jet.dy),
        d2y=h * np.asarray(jet.dx),
        psi0=psi0_value,
        psi1=psi0_value + zeta1_value / f0,
        placement=placement,
        h=h,
        constants={"f0": f0, "zeta1": zeta1_value},
    )


def _reverse_eta(values: FloatArray, placement: Placement) -> FloatArray:
    flipped = values[:, ::-1]
    if placement is Placement.VERTICES:
        return np.roll(flipped, 1, axis=1)
    return flipped


def _as_outer_first(grid: FluxAlignedGrid, psi0: float, psi1: float) -> FluxAlignedGrid:
    """Re-express a grid generated from psi1 inward in zeta = f0 (psi - psi0)."""
    placement = grid.placement

    def flip(values: FloatArray) -> FloatArray:
        return _reverse_eta(values[::-1, :], placement)

    assert grid.h is not None
    f0 = -grid.f0
    return FluxAlignedGrid(
        kind=GridKind.FLUX_ALIGNED,
        coord1=grid.coord1,
        coord2=grid.coord2,
        coord1_max=grid.coord1_max,
        x=flip(grid.x),
        y=flip(grid.y),
        d1x=-flip(grid.d1x),
        d1y=-flip(grid.d1y),
        d2x=-flip(grid.d2x),
        d2y=-flip(grid.d2y),
        psi0=psi0,
        psi1=psi1,
        placement=placement,
        h=-flip(grid.h),
        constants={"f0": f0, "zeta1": grid.coord1_max},
    )


def generate_orthogonal(
    field: FluxField,
    psi0: float,
    psi1: float,
    n_zeta: int,
    n_eta: int,
    weight: WeightMode = WeightMode.UNITY,
    first_line: FirstLine = FirstLine.INNER,
    frame: ThetaFrame | None = None,
    config: IntegratorConfig | None = None,
    *,
    placement: Placement = Placement.CENTERS,
) -> FluxAlignedGrid:
    """Orthogonal flux-aligned grid between the psi0 and psi1 contours.

    ``n_zeta`` and ``n_eta`` count cells. With ``FirstLine.OUTER`` the same
    pipeline starts on psi1 and the result is re-expressed from psi0.
    """
    if psi0 == psi1:
        raise ConfigurationError("psi0 and psi1 must differ")
    if n_zeta < 1 or n_eta < 4:
        raise ConfigurationError("Need at least 1 radial and 4 poloidal cells")
    config = config or IntegratorConfig()
    frame = frame or make_theta_frame(field, psi0, config)
    start_psi, end_psi = (psi0, psi1) if first_line is FirstLine.INNER else (psi1, psi0)

    f0, _ = compute_f0(field, start_psi, end_psi, frame, config, weight)
    zeta1 = f0 * (end_psi - start_psi)
    zeta_nodes = coordinate_nodes(zeta1, n_zeta, placement)
    eta_nodes = periodic_nodes(n_eta, placement)
    boundary = trace_boundary(
        field, start_psi, frame, eta_nodes, f0, weight, config, psi_scale=abs(psi1 - psi0)
    )
    grid = extend_radial(
        field,
        boundary,
        zeta_nodes,
        f0,
        None,
        weight,
        config,
        eta_nodes=eta_nodes,
        psi0=start_psi,
        zeta1=zeta1,
        placement=placement,
    )
    if first_line is FirstLine.OUTER:
        grid = _as_outer_first(grid, psi0, psi1)
    grid.provenance.update(
        {
            "flux": field.model_dump(mode="json"),
            "frame": frame.model_dump(),
            "weight": weight.value,
            "first_line": first_line.value,
            "integrator": config.model_dump(),
        }
    )
    logger.info(
        "Generated orthogonal grid",
        field=field.type,
        f0=grid.f0,
        zeta1=grid.zeta1,
        n_zeta=grid.n1,
        n_eta=grid.n2,
        placement=placement.value,
    )
    return grid


class LatticeConfig(BaseModel):
    """Vertex-placed pass-1 lattice the elliptic potential is solved on.

    Equal arc length on the outer contour (grad_psi weight, outer first line)
    keeps cells small where the outer boundary passes close to an X-point.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    first_line: FirstLine = FirstLine.OUTER
    weight: WeightMode = WeightMode.GRAD_PSI
    radial_refinement: int = Field(default=4, ge=1, description="Lattice zeta cells per u cell")
    refinement: int = Field(default=2, ge=1, description="Lattice eta cells per v cell")


def generate_lattices(
    field: FluxField,
    psi0: float,
    psi1: float,
    n_u: int,
    n_v: int,
    lattice: LatticeConfig | None = None,
    *,
    richardson: bool = False,
    frame: ThetaFrame | None = None,
    config: IntegratorConfig | None = None,
) -> tuple[FluxAlignedGrid, FluxAlignedGrid | None]:
    """Lattice for an ``n_u`` by ``n_v`` elliptic grid, plus its radial doubling.

    With ``richardson`` the doubled lattice is traced once and the coarse one
    is every other zeta row of it, so both share their eta nodes and radial
    lines exactly.
    """
    lattice = lattice or LatticeConfig()
    n_zeta = lattice.radial_refinement * n_u
    n_eta = lattice.refinement * n_v
    grid = generate_orthogonal(
        field,
        psi0,
        psi1,
        2 * n_zeta if richardson else n_zeta,
        n_eta,
        weight=lattice.weight,
        first_line=lattice.first_line,
        frame=frame,
        config=config,
        placement=Placement.VERTICES,
    )
    if not richardson:
        return grid, None
    return grid.coarsened(2), grid
