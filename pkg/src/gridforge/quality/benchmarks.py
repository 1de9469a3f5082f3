"""Analytic elliptic benchmark problems solved on generated grids.

Both problems solve div(chi grad f) = rho with a closed-form f. rho is assembled
from the flux jet by the chain rule, so the measured error comes from the grid
and the discretization only.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Annotated, Literal

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field

from gridforge.flux.fields import FluxField
from gridforge.flux.models import FloatArray, FluxJet, Real
from gridforge.geometry.tensors import inverse_metric_from_gradients
from gridforge.grids.models import Placement, StructuredGrid
from gridforge.ode.angle import ThetaFrame, dtheta, theta
from gridforge.shared.errors import ConfigurationError, FluxDomainError, NonPositiveValueError
from gridforge.solver.operator import BoundaryCondition, BoundaryKind, DivergenceOperator

logger = structlog.get_logger()


class _ProblemBase(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    x0: float = Field(default=550.0, gt=0)
    psi0: float = -20.0
    psi1: float = -1.0
    frame: ThetaFrame | None = Field(default=None, description="Origin of theta, (x0, 0) if unset")

    def theta_frame(self) -> ThetaFrame:
        return self.frame or ThetaFrame(x0=self.x0, y0=0.0)


class FluxAlignedProblem(_ProblemBase):
    """f = 0.1 (psi - psi0)(psi - 2 psi1 + psi0), chi = (x0/x) sqrt(1 + |grad psi|^2).

    Dirichlet at psi0, homogeneous Neumann at psi1.
    """

    type: Literal["flux_aligned"] = "flux_aligned"


class LocalizedProblem(_ProblemBase):
    """Compactly supported bump around (xb, yb), chi modulated by 1 + 0.5 sin(theta).

    Dirichlet at both boundaries.
    """

    type: Literal["localized"] = "localized"
    xb: float = 440.0
    yb: float = -220.0
    sigma: float = Field(default=40.0, gt=0)


BenchmarkProblem = Annotated[FluxAlignedProblem | LocalizedProblem, Field(discriminator="type")]
Problem = FluxAlignedProblem | LocalizedProblem


def problem_from_name(name: str, **overrides: float) -> Problem:
    if name == "flux_aligned":
        return FluxAlignedProblem(**overrides)
    if name == "localized":
        return LocalizedProblem(**overrides)
    raise ConfigurationError(
        f"Unknown benchmark problem '{name}'. Available: flux_aligned, localized"
    )


def _as_array(value: Real) -> FloatArray:
    return np.asarray(value, dtype=float)


def chi_field(
    problem: Problem, jet: FluxJet, p: tuple[Real, Real]
) -> tuple[FloatArray, FloatArray, FloatArray]:
    """chi and its gradient (chi_x, chi_y)."""
    x = _as_array(p[0])
    y = _as_array(p[1])
    if np.any(x <= 0):
        k = int(np.argmin(x))
        y_bad = float(np.broadcast_to(y, x.shape).flat[k])
        raise FluxDomainError(problem.type, float(x.flat[k]), y_bad, "x must be positive")
    px, py = _as_array(jet.dx), _as_array(jet.dy)
    pxx, pxy, pyy = _as_array(jet.dxx), _as_array(jet.dxy), _as_array(jet.dyy)
    s = np.sqrt(1.0 + px * px + py * py)
    s_x = (px * pxx + py * pxy) / s
    s_y = (px * pxy + py * pyy) / s
    ratio = problem.x0 / x
    chi = ratio * s
    chi_x = -ratio / x * s + ratio * s_x
    chi_y = ratio * s_y
    if isinstance(problem, LocalizedProblem):
        frame = problem.theta_frame()
        angle = _as_array(theta(frame, (x, y)))
        tx, ty = dtheta(frame, (x, y))
        m = 1.0 + 0.5 * np.sin(angle)
        dm = 0.5 * np.cos(angle)
        chi_x = chi_x * m + chi * dm * _as_array(tx)
        chi_y = chi_y * m + chi * dm * _as_array(ty)
        chi = chi * m
    return chi, chi_x, chi_y


def _solution_jet(
    problem: Problem, jet: FluxJet, p: tuple[Real, Real]
) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
    """f, f_x, f_y and the Laplacian of f."""
    if isinstance(problem, FluxAlignedProblem):
        psi = _as_array(jet.psi)
        f = 0.1 * (psi - problem.psi0) * (psi - 2.0 * problem.psi1 + problem.psi0)
        fp = 0.2 * (psi - problem.psi1)
        lap = 0.2 * _as_array(jet.grad_sq) + fp * _as_array(jet.laplacian)
        return f, fp * _as_array(jet.dx), fp * _as_array(jet.dy), lap
    dx = _as_array(p[0]) - problem.xb
    dy = _as_array(p[1]) - problem.yb
    sigma2 = problem.sigma**2
    r2 = (dx * dx + dy * dy) / sigma2
    inside = r2 < 1.0
    q = np.where(inside, r2 - 1.0, -1.0)
    f = np.where(inside, np.exp(1.0 + 1.0 / q), 0.0)
    qx = 2.0 * dx / sigma2
    qy = 2.0 * dy / sigma2
    grad_q_sq = qx * qx + qy * qy
    lap = f * ((1.0 / q**4 + 2.0 / q**3) * grad_q_sq - 4.0 / (sigma2 * q * q))
    return f, -f * qx / (q * q), -f * qy / (q * q), lap


def analytic_solution(problem: Problem, jet: FluxJet, p: tuple[Real, Real]) -> FloatArray:
    return _solution_jet(problem, jet, p)[0]


def rhs_for(
    problem: Problem, jet: FluxJet, frame: ThetaFrame | None, p: tuple[Real, Real]
) -> FloatArray:
    """rho = chi lap(f) + grad(chi) . grad(f) at ``p``.

    ``frame`` overrides the problem's theta origin for the localized chi.
    """
    if frame is not None and isinstance(problem, LocalizedProblem):
        problem = problem.model_copy(update={"frame": frame})
    chi, chi_x, chi_y = chi_field(problem, jet, p)
    _, f_x, f_y, lap = _solution_jet(problem, jet, p)
    return chi * lap + chi_x * f_x + chi_y * f_y


def boundary_extrapolation(values: FloatArray) -> FloatArray:
    """Quadratic extrapolation from the first three cell-centered rows to the boundary."""
    return (15.0 * values[0] - 10.0 * values[1] + 3.0 * values[2]) / 8.0


def relative_l2_error(numeric: FloatArray, exact: FloatArray, weights: FloatArray) -> float:
    """sqrt(sum w (numeric - exact)^2 / sum w exact^2)."""
    norm = float(np.sum(weights * exact * exact))
    if not norm > 0:
        raise NonPositiveValueError("exact solution norm", norm)
    return float(np.sqrt(np.sum(weights * (numeric - exact) ** 2) / norm))


@dataclass
class BenchmarkSolution:
    values: FloatArray
    exact: FloatArray
    error: float
    iterations: int
    residual: float


class BenchmarkReport(BaseModel):
    problem: str
    grid: str
    n1: int = Field(ge=1)
    n2: int = Field(ge=1)
    error: float = Field(ge=0)
    iterations: int = Field(ge=0)
    residual: float = Field(ge=0)


class SweepReport(BaseModel):
    problem: str
    radial_cells: list[int]
    errors: list[float]
    orders: list[float]


def _boundary_condition(
    kind: BoundaryKind, problem: Problem, field: FluxField, x: FloatArray, y: FloatArray
) -> BoundaryCondition:
    if kind is BoundaryKind.NEUMANN:
        return BoundaryCondition(BoundaryKind.NEUMANN)
    bx = boundary_extrapolation(x)
    by = boundary_extrapolation(y)
    values = analytic_solution(problem, field.jet(bx, by), (bx, by))
    return BoundaryCondition(BoundaryKind.DIRICHLET, values)


def solve_benchmark(
    grid: StructuredGrid,
    problem: Problem,
    field: FluxField,
    *,
    rtol: float = 1e-11,
    max_iterations: int = 100_000,
) -> BenchmarkSolution:
    """Solve the benchmark on a cell-centered grid and measure the sqrt(g)-weighted error."""
    if grid.placement is not Placement.CENTERS:
        raise ConfigurationError("Benchmarks are solved on cell-centered grids")
    if grid.n1 < 3:
        raise ConfigurationError("Benchmarks need at least 3 radial cells")
    x, y = grid.x, grid.y
    jet = field.jet(x, y)
    chi, _, _ = chi_field(problem, jet, (x, y))
    metric = inverse_metric_from_gradients(grid.d1x, grid.d1y, grid.d2x, grid.d2y)
    sqrt_g = grid.sqrt_g
    upper = (
        BoundaryKind.NEUMANN
        if isinstance(problem, FluxAlignedProblem)
        else BoundaryKind.DIRICHLET
    )
    operator = DivergenceOperator(
        sqrt_g * chi * _as_array(metric.guu),
        sqrt_g * chi * _as_array(metric.guv),
        sqrt_g * chi * _as_array(metric.gvv),
        grid.h1,
        grid.h2,
        placement=Placement.CENTERS,
        lower=_boundary_condition(BoundaryKind.DIRICHLET, problem, field, x, y),
        upper=_boundary_condition(upper, problem, field, x[::-1], y[::-1]),
    )
    source = sqrt_g * rhs_for(problem, jet, None, (x, y))
    solution = operator.solve(source, rtol=rtol, max_iterations=max_iterations)
    exact = analytic_solution(problem, jet, (x, y))
    weights = np.abs(sqrt_g) * grid.quadrature_weights()
    error = relative_l2_error(solution.values, exact, weights)
    logger.info(
        "Solved benchmark",
        problem=problem.type,
        grid=grid.kind.value,
        n1=grid.n1,
        n2=grid.n2,
        error=error,
        iterations=solution.iterations,
    )
    return BenchmarkSolution(
        values=solution.values,
        exact=exact,
        error=error,
        iterations=solution.iterations,
        residual=solution.residual,
    )


def convergence_order(errors: Sequence[float]) -> list[float]:
    """log2(e_i / e_{i+1}) for errors at successive 2x refinements."""
    values = [float(e) for e in errors]
    if len(values) < 2:
        raise ConfigurationError("Need at least two errors to estimate an order")
    for e in values:
        if not e > 0:
            raise NonPositiveValueError("error", e)
    return [float(np.log2(a / b)) for a, b in zip(values[:-1], values[1:], strict=True)]


def run_benchmark_sweep(
    build_grid: Callable[[int], StructuredGrid],
    problem: Problem,
    field: FluxField,
    radial_cells: Sequence[int],
    *,
    rtol: float = 1e-11,
) -> SweepReport:
    """Errors and observed orders over a sequence of radial resolutions."""
    errors = []
    for n in radial_cells:
        result = solve_benchmark(build_grid(n), problem, field, rtol=rtol)
        errors.append(result.error)
    orders = convergence_order(errors) if len(errors) > 1 else []
    logger.info("Benchmark sweep", problem=problem.type, cells=list(radial_cells), orders=orders)
    return SweepReport(
        problem=problem.type, radial_cells=list(radial_cells), errors=errors, orders=orders
    )
