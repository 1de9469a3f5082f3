"""Conduction tensors, the divergence-form operator and the u-bar solve."""

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
from gridforge.solver.ubar import (
    ChiModel,
    ScalarField2,
    SolverConfig,
    chi_on_grid,
    eta_derivative,
    richardson,
    self_consistency_error,
    solve_ubar,
    zeta_derivative,
)

__all__ = [
    "AdaptedChi",
    "BoundaryCondition",
    "BoundaryKind",
    "ChiModel",
    "ConformalChi",
    "DivergenceOperator",
    "LinearSolve",
    "MonitorChi",
    "ScalarField2",
    "SolverConfig",
    "build_chi_cartesian",
    "chi_on_grid",
    "eta_derivative",
    "richardson",
    "self_consistency_error",
    "solve_ubar",
    "transform_chi",
    "zeta_derivative",
]
