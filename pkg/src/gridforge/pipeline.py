"""End-to-end grid generation from a validated run configuration."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any

import structlog
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from gridforge.flux.fields import FluxField
from gridforge.flux.presets import resolve_field
from gridforge.grids.elliptic import generate_elliptic
from gridforge.grids.models import (
    FirstLine,
    FluxAlignedGrid,
    Placement,
    StructuredGrid,
    WeightMode,
)
from gridforge.grids.orthogonal import (
    LatticeConfig,
    generate_lattices,
    generate_orthogonal,
    make_theta_frame,
)
from gridforge.ode.integrator import IntegratorConfig
from gridforge.shared.errors import ConfigurationError
from gridforge.solver.chi import AdaptedChi, ConformalChi, MonitorChi
from gridforge.solver.ubar import ChiModel, ScalarField2, SolverConfig, solve_ubar

logger = structlog.get_logger()


class GridType(str, Enum):
    ORTHOGONAL = "orthogonal"
    CONFORMAL = "conformal"
    ADAPTED = "adapted"
    MONITOR = "monitor"


class RunConfig(BaseModel):
    """Everything needed to generate one grid."""

    model_config = ConfigDict(extra="forbid")

    flux: str | dict[str, Any] = Field(
        default="solovev", description="Preset id, JSON file path or inline field object"
    )
    psi0: float = -20.0
    psi1: float = -1.0
    grid_type: GridType = GridType.MONITOR
    n_u: int = Field(default=32, ge=1, description="Radial cells of the output grid")
    n_v: int = Field(default=320, ge=4, description="Poloidal cells of the output grid")
    k: float = Field(default=0.1, gt=0, description="Monitor metric anisotropy")
    eps: float = Field(default=0.001, gt=0, description="Monitor metric isotropic floor")
    weight: WeightMode | None = Field(
        default=None,
        description="Adaption weight; unity for orthogonal grids, grad_psi for adapted ones",
    )
    first_line: FirstLine = FirstLine.INNER
    placement: Placement = Placement.CENTERS
    lattice: LatticeConfig = Field(
        default_factory=LatticeConfig, description="Pass-1 lattice of the elliptic grids"
    )
    interpolation_order: int = 3
    integrator: IntegratorConfig = Field(default_factory=IntegratorConfig)
    solver: SolverConfig = Field(default_factory=lambda: SolverConfig(richardson=True))
    output: str | None = None
    svg: str | None = None

    @model_validator(mode="after")
    def _check_levels(self) -> RunConfig:
        if self.psi0 == self.psi1:
            raise ValueError("psi0 and psi1 must differ")
        return self

    def chi_model(self) -> ChiModel | None:
        if self.grid_type is GridType.CONFORMAL:
            return ConformalChi()
        if self.grid_type is GridType.ADAPTED:
            return AdaptedChi(weight=self.weight or WeightMode.GRAD_PSI)
        if self.grid_type is GridType.MONITOR:
            return MonitorChi(k=self.k, eps=self.eps)
        return None


def load_run_config_from_dict(data: dict[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigurationError(f"Invalid run configuration: {exc}") from exc


def load_run_config_from_file(path: str | Path) -> RunConfig:
    raw = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"Run configuration {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError("Run configuration file must contain a JSON object")
    return load_run_config_from_dict(data)


@dataclass
class RunResult:
    config: RunConfig
    field: FluxField
    grid: StructuredGrid
    wall_time: float
    flux_grid: FluxAlignedGrid | None = None
    ubar: ScalarField2 | None = None

    def summary(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "grid_type": self.config.grid_type.value,
            "kind": self.grid.kind.value,
            "n1": self.grid.n1,
            "n2": self.grid.n2,
            "nodes": self.grid.n1 * self.grid.n2,
            "psi0": self.grid.psi0,
            "psi1": self.grid.psi1,
            "wall_time": self.wall_time,
        }
        data.update(self.grid.constants)
        if self.ubar is not None:
            data["solver_iterations"] = self.ubar.iterations
            data["solver_residual"] = self.ubar.residual
        return data


def run(config: RunConfig) -> RunResult:
    """Generate the grid described by ``config``."""
    started = time.perf_counter()
    field = resolve_field(config.flux)
    frame = make_theta_frame(field, config.psi0, config.integrator)
    chi_model = config.chi_model()
    flux_grid: FluxAlignedGrid | None = None
    ubar: ScalarField2 | None = None

    if chi_model is None:
        grid: StructuredGrid = generate_orthogonal(
            field,
            config.psi0,
            config.psi1,
            config.n_u,
            config.n_v,
            weight=config.weight or WeightMode.UNITY,
            first_line=config.first_line,
            frame=frame,
            config=config.integrator,
            placement=config.placement,
        )
    else:
        flux_grid, fine = generate_lattices(
            field,
            config.psi0,
            config.psi1,
            config.n_u,
            config.n_v,
            config.lattice,
            richardson=config.solver.richardson,
            frame=frame,
            config=config.integrator,
        )
        ubar = solve_ubar(flux_grid, chi_model, config.solver, field=field, fine_grid=fine)
        grid = generate_elliptic(
            flux_grid,
            ubar,
            chi_model,
            config.n_u,
            config.n_v,
            config.integrator,
            field=field,
            order=config.interpolation_order,
            placement=config.placement,
        )

    grid.provenance["run"] = config.model_dump(mode="json", exclude={"output", "svg"})
    wall_time = time.perf_counter() - started
    logger.info(
        "Run finished",
        grid_type=config.grid_type.value,
        n1=grid.n1,
        n2=grid.n2,
        wall_time=round(wall_time, 3),
    )
    return RunResult(
        config=config,
        field=field,
        grid=grid,
        wall_time=wall_time,
        flux_grid=flux_grid,
        ubar=ubar,
    )
