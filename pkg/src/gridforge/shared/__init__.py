"""Shared utilities: logging setup and the error hierarchy."""

from gridforge.shared.errors import (
    BracketFailureError,
    CenterPointError,
    ClosureError,
    ConfigurationError,
    DegenerateMetricError,
    DenominatorVanishingError,
    FluxDomainError,
    GridFileError,
    GridforgeError,
    IndefiniteOperatorError,
    InterpolationOrderError,
    LatticeMismatchError,
    NonPositiveValueError,
    NumericalError,
    OutOfBoxError,
    PositivityError,
    SignChangeError,
    SingularGradientError,
    SingularJacobianError,
    SolverConvergenceError,
    StepFailureError,
)
from gridforge.shared.logging import get_logger, setup_logging

__all__ = [
    "BracketFailureError",
    "CenterPointError",
    "ClosureError",
    "ConfigurationError",
    "DegenerateMetricError",
    "DenominatorVanishingError",
    "FluxDomainError",
    "GridFileError",
    "GridforgeError",
    "IndefiniteOperatorError",
    "InterpolationOrderError",
    "LatticeMismatchError",
    "NonPositiveValueError",
    "NumericalError",
    "OutOfBoxError",
    "PositivityError",
    "SignChangeError",
    "SingularGradientError",
    "SingularJacobianError",
    "SolverConvergenceError",
    "StepFailureError",
    "get_logger",
    "setup_logging",
]
