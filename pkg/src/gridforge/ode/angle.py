"""Geometric poloidal angle about a frame center."""

from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict

from gridforge.flux.models import Real
from gridforge.shared.errors import CenterPointError


class ThetaFrame(BaseModel):
    """Center (x0, y0) of the angle theta; must lie inside the inner contour."""

    model_config = ConfigDict(frozen=True)

    x0: float
    y0: float


def _offsets(frame: ThetaFrame, x: Real, y: Real) -> tuple[Real, Real, Real]:
    dx = np.asarray(x, dtype=float) - frame.x0
    dy = np.asarray(y, dtype=float) - frame.y0
    rho2 = dx * dx + dy * dy
    if np.any(rho2 == 0.0):
        raise CenterPointError(frame.x0, frame.y0)
    return dx, dy, rho2


def theta(frame: ThetaFrame, p: tuple[Real, Real]) -> Real:
    """Angle in (-pi, pi]; points with y >= y0 get the non-negative branch."""
    dx, dy, _ = _offsets(frame, p[0], p[1])
    angle = np.arctan2(dy, dx)
    angle = np.where((dy == 0) & (dx < 0), np.pi, angle)
    return float(angle) if np.ndim(angle) == 0 else angle


def dtheta(frame: ThetaFrame, p: tuple[Real, Real]) -> tuple[Real, Real]:
    """Components (theta_x, theta_y) of the one-form d theta."""
    dx, dy, rho2 = _offsets(frame, p[0], p[1])
    tx = -dy / rho2
    ty = dx / rho2
    if np.ndim(tx) == 0:
        return float(tx), float(ty)
    return tx, ty
