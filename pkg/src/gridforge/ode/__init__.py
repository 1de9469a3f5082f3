"""Streamline integration, the theta angle and contour root finding."""

from gridforge.ode.angle import ThetaFrame, dtheta, theta
from gridforge.ode.contours import (
    contour_tangent,
    enclosed_area,
    polygon_centroid,
    theta_gradient,
    trace_contour,
)
from gridforge.ode.integrator import (
    BatchSolution,
    IntegratorConfig,
    Streamline,
    integrate_streamline,
    integrate_streamlines,
    integrate_with_aux,
    solve_batch,
    streamline_rhs,
)
from gridforge.ode.roots import Ray, find_flux_point

__all__ = [
    "BatchSolution",
    "IntegratorConfig",
    "Ray",
    "Streamline",
    "ThetaFrame",
    "contour_tangent",
    "dtheta",
    "enclosed_area",
    "find_flux_point",
    "integrate_streamline",
    "integrate_streamlines",
    "integrate_with_aux",
    "polygon_centroid",
    "solve_batch",
    "streamline_rhs",
    "theta",
    "theta_gradient",
    "trace_contour",
]
