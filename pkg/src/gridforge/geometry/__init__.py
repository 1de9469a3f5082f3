"""Coordinate-free building blocks for curvilinear grids."""

from gridforge.geometry.tensors import (
    Jacobian2,
    JacobianKind,
    Metric2,
    SymTensor2,
    compose_oneforms,
    covariant_metric,
    inverse_metric_from_gradients,
    invert_jacobian,
    push_tensor,
    volume_element,
)

__all__ = [
    "Jacobian2",
    "JacobianKind",
    "Metric2",
    "SymTensor2",
    "compose_oneforms",
    "covariant_metric",
    "inverse_metric_from_gradients",
    "invert_jacobian",
    "push_tensor",
    "volume_element",
]
