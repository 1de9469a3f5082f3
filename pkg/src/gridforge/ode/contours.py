"""Closed contours of psi traced with theta as the parameter."""

from __future__ import annotations

import numpy as np

from gridforge.flux.fields import FluxField
from gridforge.flux.models import FloatArray
from gridforge.ode.angle import ThetaFrame, dtheta
from gridforge.ode.integrator import (
    IntegratorConfig,
    ParamGradient,
    VectorField,
    integrate_streamlines,
    integrate_with_aux,
)
from gridforge.ode.roots import find_flux_point
from gridforge.shared.errors import ClosureError


def contour_tangent(field: FluxField) -> VectorField:
    """Vector field (-psi_y, psi_x), tangent to the contours of psi."""

    def tangent(x: FloatArray, y: FloatArray) -> tuple[FloatArray, FloatArray]:
        jet = field.jet(x, y)
        return -np.asarray(jet.dy), np.asarray(jet.dx)

    return tangent


def theta_gradient(frame: ThetaFrame) -> ParamGradient:
    def gradient(x: FloatArray, y: FloatArray) -> tuple[FloatArray, FloatArray]:
        tx, ty = dtheta(frame, (x, y))
        return np.asarray(tx), np.asarray(ty)

    return gradient


def trace_contour(
    field: FluxField,
    psi: float,
    frame: ThetaFrame,
    n: int,
    config: IntegratorConfig | None = None,
    *,
    closure_tol: float | None = None,
) -> FloatArray:
    """``n`` points of the psi contour at theta = 2 pi j / n, starting on the +x ray."""
    start = np.asarray(find_flux_point(field, frame, psi), dtype=float)
    targets = 2.0 * np.pi * np.arange(1, n + 1) / n
    points, _ = integrate_streamlines(
        contour_tangent(field),
        start[None, :],
        0.0,
        targets,
        config,
        param_gradient=theta_gradient(frame),
    )
    gap = float(np.hypot(*(points[-1, 0] - start)))
    tol = closure_tol if closure_tol is not None else 1e-8 * field.length_scale
    if gap > tol:
        raise ClosureError(gap, tol)
    return np.vstack([start[None, :], points[:-1, 0, :]])


def polygon_centroid(points: FloatArray) -> tuple[float, float]:
    """Area centroid of a closed polygon (shoelace)."""
    x, y = points[:, 0], points[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    area = 0.5 * cross.sum()
    cx = ((x + xn) * cross).sum() / (6.0 * area)
    cy = ((y + yn) * cross).sum() / (6.0 * area)
    return float(cx), float(cy)


def enclosed_area(
    field: FluxField,
    psi: float,
    frame: ThetaFrame,
    config: IntegratorConfig | None = None,
) -> float:
    """Area inside a contour by Green's theorem, the closed integral of x dy.

    x dy/dtheta rides along the contour trace as an auxiliary variable, so the
    area carries the integrator's error control rather than a fixed sampling.
    """
    start = find_flux_point(field, frame, psi)

    def x_dy(x: FloatArray, y: FloatArray, aux: FloatArray) -> FloatArray:
        jet = field.jet(x, y)
        tx, ty = dtheta(frame, (x, y))
        denom = np.asarray(jet.dx) * np.asarray(ty) - np.asarray(jet.dy) * np.asarray(tx)
        return (x * np.asarray(jet.dx) / denom)[None, :]

    line = integrate_with_aux(
        contour_tangent(field),
        x_dy,
        start,
        0.0,
        0.0,
        2.0 * np.pi,
        config,
        param_gradient=theta_gradient(frame),
    )
    assert line.aux_end is not None
    return float(abs(line.aux_end[0]))
