"""Locating points on a given contour of psi along a ray."""

from __future__ import annotations

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict
from scipy import optimize

from gridforge.flux.fields import FluxField
from gridforge.ode.angle import ThetaFrame
from gridforge.shared.errors import BracketFailureError, ContourResidualError, FluxDomainError

logger = structlog.get_logger()


class Ray(BaseModel):
    model_config = ConfigDict(frozen=True)

    origin: tuple[float, float]
    direction: tuple[float, float] = (1.0, 0.0)

    @classmethod
    def from_frame(cls, frame: ThetaFrame) -> Ray:
        """Horizontal ray towards +x, where theta = 0."""
        return cls(origin=(frame.x0, frame.y0), direction=(1.0, 0.0))


def find_flux_point(
    field: FluxField,
    frame_or_ray: ThetaFrame | Ray,
    psi_target: float,
    *,
    psi_scale: float | None = None,
    max_reach: float | None = None,
) -> tuple[float, float]:
    """First crossing of psi = ``psi_target`` along the ray.

    Bracketing by growing steps, bisection to a coarse bracket, then Newton
    steps on the directional derivative (Brent as fallback).
    """
    ray = Ray.from_frame(frame_or_ray) if isinstance(frame_or_ray, ThetaFrame) else frame_or_ray
    ox, oy = ray.origin
    d = np.asarray(ray.direction, dtype=float)
    d = d / np.hypot(d[0], d[1])
    scale = field.length_scale
    reach = max_reach if max_reach is not None else 100.0 * scale
    tol = 1e-12 * (psi_scale if psi_scale is not None else max(abs(psi_target), 1.0))

    def g(s: float) -> float:
        return float(field.psi(ox + s * d[0], oy + s * d[1])) - psi_target

    def dg(s: float) -> float:
        jet = field.jet(ox + s * d[0], oy + s * d[1])
        return float(jet.dx) * d[0] + float(jet.dy) * d[1]

    step = 1e-2 * scale
    lo = 0.0
    try:
        g_lo = g(lo)
    except FluxDomainError:
        logger.debug("psi undefined at the ray origin, bracketing from one step out")
        lo = step
        g_lo = g(lo)
    if g_lo == 0.0:
        return ox + lo * d[0], oy + lo * d[1]
    hi = lo
    while True:
        hi = lo + step
        if hi > reach:
            raise BracketFailureError(psi_target, reach)
        g_hi = g(hi)
        if np.sign(g_hi) != np.sign(g_lo):
            break
        lo, g_lo = hi, g_hi
        step *= 1.5

    s = optimize.bisect(g, lo, hi, xtol=1e-6 * (hi - lo))
    try:
        s = optimize.newton(g, s, fprime=dg, tol=1e-15 * max(hi, scale), maxiter=30)
        if not lo <= s <= hi:
            raise RuntimeError("Newton iterate left the bracket")
    except (RuntimeError, ZeroDivisionError):
        s = optimize.brentq(g, lo, hi, xtol=1e-15 * max(hi, scale), rtol=4 * np.finfo(float).eps)

    residual = abs(g(s))
    if residual > tol:
        raise ContourResidualError(psi_target, residual, tol)
    return ox + s * d[0], oy + s * d[1]
