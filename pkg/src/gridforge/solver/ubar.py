"""The elliptic potential u-bar on a flux-aligned grid.

u-bar solves d_i(sqrt(g) chi^{ij} d_j u-bar) = 0 in (zeta, eta) with
u-bar = psi0 and psi1 on the two boundaries and periodicity in eta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import structlog
from pydantic import BaseModel, Field
from scipy.interpolate import RectBivariateSpline

from gridforge.flux.fields import FluxField
from gridforge.flux.models import FloatArray
from gridforge.geometry.tensors import SymTensor2
from gridforge.grids.models import TWO_PI, FluxAlignedGrid, Placement
from gridforge.shared.errors import ConfigurationError, LatticeMismatchError
from gridforge.solver.chi import (
    AdaptedChi,
    ConformalChi,
    MonitorChi,
    build_chi_cartesian,
    transform_chi,
)
from gridforge.solver.operator import (
    BoundaryCondition,
    BoundaryKind,
    DivergenceOperator,
    LinearSolve,
)

logger = structlog.get_logger()

ChiModel = ConformalChi | AdaptedChi | MonitorChi


class SolverConfig(BaseModel):
    tolerance: float = Field(default=1e-11, gt=0, description="Relative CG residual")
    max_iterations: int = Field(default=100_000, ge=1)
    derivative_order: int = Field(default=4, description="Finite-difference order, 2 or 4")
    richardson: bool = Field(
        default=False, description="Combine with a solve on the doubled lattice"
    )


@dataclass
class ScalarField2:
    """Nodal values and derivatives of u-bar on a vertex (zeta, eta) lattice.

    ``boundary_flux`` holds sqrt(g) chi^{zeta j} d_j u-bar per unit eta on the
    psi0 and psi1 rows, taken from the discrete reactions of the solve.
    """

    zeta_nodes: FloatArray
    eta_nodes: FloatArray
    values: FloatArray
    d_zeta: FloatArray
    d_eta: FloatArray
    psi0: float
    psi1: float
    iterations: int = 0
    residual: float = 0.0
    boundary_flux: tuple[FloatArray, FloatArray] | None = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape  # type: ignore[return-value]

    @property
    def total_flux(self) -> float | None:
        """Flux through the psi0 boundary, trapezoid rule in eta."""
        if self.boundary_flux is None:
            return None
        return float(np.sum(self.boundary_flux[0]) * TWO_PI / self.eta_nodes.size)


def zeta_derivative(values: FloatArray, step: float, order: int = 4) -> FloatArray:
    """Central differences in the first axis with one-sided stencils at the ends."""
    n = values.shape[0]
    out = np.empty_like(values)
    if order == 2 or n < 5:
        out[1:-1] = (values[2:] - values[:-2]) / (2 * step)
        out[0] = (-3 * values[0] + 4 * values[1] - values[2]) / (2 * step)
        out[-1] = (3 * values[-1] - 4 * values[-2] + values[-3]) / (2 * step)
        return out
    if order != 4:
        raise ConfigurationError(f"Unsupported derivative order {order}")
    out[2:-2] = (values[:-4] - 8 * values[1:-3] + 8 * values[3:-1] - values[4:]) / (12 * step)
    one_sided = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12 * step)
    near = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / (12 * step)
    out[0] = np.tensordot(one_sided, values[:5], axes=1)
    out[1] = np.tensordot(near, values[:5], axes=1)
    out[-1] = -np.tensordot(one_sided, values[::-1][:5], axes=1)
    out[-2] = -np.tensordot(near, values[::-1][:5], axes=1)
    return out


def eta_derivative(values: FloatArray, step: float, order: int = 4) -> FloatArray:
    """Periodic central differences in the second axis."""

    def shift(k: int) -> FloatArray:
        return np.roll(values, -k, axis=1)

    if order == 2:
        return (shift(1) - shift(-1)) / (2 * step)
    return (shift(-2) - 8 * shift(-1) + 8 * shift(1) - shift(2)) / (12 * step)


def chi_on_grid(grid: FluxAlignedGrid, field: FluxField, chi_model: ChiModel) -> SymTensor2:
    """chi^{ij} in (zeta, eta) at every node of ``grid``."""
    chi_xy = build_chi_cartesian(chi_model, field.jet(grid.x, grid.y))
    return transform_chi(chi_xy, grid.jacobian())


def _scalar_field(
    grid: FluxAlignedGrid,
    values: FloatArray,
    cfg: SolverConfig,
    solve: LinearSolve,
    boundary_flux: tuple[FloatArray, FloatArray],
    a11: FloatArray,
) -> ScalarField2:
    values = values.copy()
    values[0] = grid.psi0
    values[-1] = grid.psi1
    d_eta = eta_derivative(values, grid.h2, cfg.derivative_order)
    d_eta[0] = 0.0
    d_eta[-1] = 0.0
    d_zeta = zeta_derivative(values, grid.h1, cfg.derivative_order)
    # u-bar is constant along both boundaries, so the flux there is a11 u-bar_zeta
    d_zeta[0] = boundary_flux[0] / a11[0]
    d_zeta[-1] = boundary_flux[1] / a11[-1]
    return ScalarField2(
        zeta_nodes=grid.coord1,
        eta_nodes=grid.coord2,
        values=values,
        d_zeta=d_zeta,
        d_eta=d_eta,
        psi0=grid.psi0,
        psi1=grid.psi1,
        iterations=solve.iterations,
        residual=solve.residual,
        boundary_flux=boundary_flux,
    )


def ubar_operator(grid: FluxAlignedGrid, chi: SymTensor2) -> DivergenceOperator:
    sqrt_g = grid.sqrt_g
    return DivergenceOperator(
        sqrt_g * np.asarray(chi.xx),
        sqrt_g * np.asarray(chi.xy),
        sqrt_g * np.asarray(chi.yy),
        grid.h1,
        grid.h2,
        placement=Placement.VERTICES,
        lower=BoundaryCondition(BoundaryKind.DIRICHLET, grid.psi0),
        upper=BoundaryCondition(BoundaryKind.DIRICHLET, grid.psi1),
    )


def _solve_once(
    grid: FluxAlignedGrid, chi: SymTensor2, cfg: SolverConfig
) -> tuple[LinearSolve, tuple[FloatArray, FloatArray]]:
    op = ubar_operator(grid, chi)
    solution = op.solve(rtol=cfg.tolerance, max_iterations=cfg.max_iterations)
    return solution, op.boundary_fluxes(solution.values)


def solve_ubar(
    grid: FluxAlignedGrid,
    chi_model: ChiModel,
    cfg: SolverConfig | None = None,
    *,
    field: FluxField,
    fine_grid: FluxAlignedGrid | None = None,
) -> ScalarField2:
    """Solve for u-bar on a vertex-placed flux-aligned grid.

    With ``cfg.richardson`` a ``fine_grid`` with twice the zeta cells (and the
    same or twice the eta cells) must be given; values and boundary fluxes of
    the two solves are combined as (4 u_fine - u_coarse) / 3 on the coarse
    lattice.
    """
    cfg = cfg or SolverConfig()
    if grid.placement is not Placement.VERTICES:
        raise ConfigurationError("u-bar is solved on a vertex-placed grid")
    if grid.psi0 == grid.psi1:
        raise ConfigurationError("psi0 and psi1 must differ")
    if cfg.richardson and fine_grid is None:
        raise ConfigurationError("Richardson extrapolation needs the doubled grid")
    chi = chi_on_grid(grid, field, chi_model)
    solution, fluxes = _solve_once(grid, chi, cfg)
    values = solution.values
    if cfg.richardson:
        assert fine_grid is not None
        if fine_grid.placement is not Placement.VERTICES:
            raise ConfigurationError("u-bar is solved on a vertex-placed grid")
        fine, fine_fluxes = _solve_once(fine_grid, chi_on_grid(fine_grid, field, chi_model), cfg)
        values = richardson(values, fine.values)
        stride = fine.values.shape[1] // values.shape[1]
        fluxes = (
            (4.0 * fine_fluxes[0][::stride] - fluxes[0]) / 3.0,
            (4.0 * fine_fluxes[1][::stride] - fluxes[1]) / 3.0,
        )
    logger.info(
        "Solved u-bar",
        chi=chi_model.type,
        iterations=solution.iterations,
        residual=solution.residual,
        shape=values.shape,
        richardson=cfg.richardson,
    )
    a11 = grid.sqrt_g * np.asarray(chi.xx)
    return _scalar_field(grid, values, cfg, solution, fluxes, a11)


def richardson(coarse: FloatArray, fine: FloatArray) -> FloatArray:
    """(4 u_fine - u_coarse) / 3 on the coarse vertex lattice.

    ``fine`` has 2 n1 - 1 rows and n2 or 2 n2 columns.
    """
    n1, n2 = coarse.shape
    if fine.shape not in ((2 * n1 - 1, n2), (2 * n1 - 1, 2 * n2)):
        raise LatticeMismatchError(coarse.shape, fine.shape)
    return (4.0 * fine[::2, :: fine.shape[1] // n2] - coarse) / 3.0


def _sample_onto(u1: ScalarField2, u2: ScalarField2, interpolate: bool) -> FloatArray:
    n1, n2 = u1.values.shape
    m1, m2 = u2.values.shape
    if (m1, m2) == (n1, n2):
        return u2.values
    if (m1 - 1) % (n1 - 1) == 0 and m2 % n2 == 0:
        return u2.values[:: (m1 - 1) // (n1 - 1), :: m2 // n2]
    if not interpolate:
        raise LatticeMismatchError((n1, n2), (m1, m2))
    eta_ext = np.append(u2.eta_nodes, u2.eta_nodes[0] + TWO_PI)
    vals_ext = np.hstack([u2.values, u2.values[:, :1]])
    spline = RectBivariateSpline(u2.zeta_nodes / u2.zeta_nodes[-1], eta_ext, vals_ext, kx=3, ky=3)
    z, e = np.meshgrid(u1.zeta_nodes / u1.zeta_nodes[-1], u1.eta_nodes, indexing="ij")
    return np.asarray(spline.ev(z, e))


def self_consistency_error(
    u1: ScalarField2, u2: ScalarField2, *, interpolate: bool = False
) -> float:
    """Relative L2 difference over the flat (zeta, eta) measure.

    ``u2`` is sampled on ``u1``'s lattice by nesting (integer strides) or, when
    ``interpolate`` is set, by bicubic interpolation in normalized zeta.
    """
    other = _sample_onto(u1, u2, interpolate)
    n1 = u1.values.shape[0]
    w1 = np.ones(n1)
    w1[0] = w1[-1] = 0.5
    weights = w1[:, None]
    diff = float(np.sum(weights * (u1.values - other) ** 2))
    norm = float(np.sum(weights * u1.values**2))
    return float(np.sqrt(diff / norm))
