"""Bicubic interpolation over a (zeta, eta) lattice, periodic in eta."""

from __future__ import annotations

import numpy as np
from scipy.interpolate import RectBivariateSpline

from gridforge.flux.models import FloatArray
from gridforge.grids.models import TWO_PI
from gridforge.shared.errors import InterpolationOrderError, OutOfBoxError


class InterpField:
    """Spline interpolant of one nodal array.

    The eta axis is padded with periodic copies so the spline is smooth across
    eta = 0. In zeta the spline is clamped: queries up to one cell outside the
    lattice return the edge value, anything further raises OutOfBoxError.
    """

    def __init__(
        self,
        zeta_nodes: FloatArray,
        eta_nodes: FloatArray,
        values: FloatArray,
        *,
        order: int = 3,
        pad: int = 4,
    ):
        if order < 3:
            raise InterpolationOrderError(order)
        zeta_nodes = np.asarray(zeta_nodes, dtype=float)
        eta_nodes = np.asarray(eta_nodes, dtype=float)
        values = np.asarray(values, dtype=float)
        eta_ext = np.concatenate([eta_nodes[-pad:] - TWO_PI, eta_nodes, eta_nodes[:pad] + TWO_PI])
        values_ext = np.concatenate([values[:, -pad:], values, values[:, :pad]], axis=1)
        self._spline = RectBivariateSpline(zeta_nodes, eta_ext, values_ext, kx=order, ky=order, s=0)
        self._eta0 = float(eta_nodes[0])
        cell = float(zeta_nodes[1] - zeta_nodes[0])
        self.lower = float(zeta_nodes[0]) - cell
        self.upper = float(zeta_nodes[-1]) + cell

    def _wrap(self, eta: FloatArray) -> FloatArray:
        return self._eta0 + np.mod(np.asarray(eta, dtype=float) - self._eta0, TWO_PI)

    def __call__(
        self, zeta: FloatArray, eta: FloatArray, *, dzeta: int = 0, deta: int = 0
    ) -> FloatArray:
        zeta = np.asarray(zeta, dtype=float)
        outside = (zeta < self.lower) | (zeta > self.upper)
        if np.any(outside):
            raise OutOfBoxError(float(zeta[outside].flat[0]), self.lower, self.upper)
        result = self._spline.ev(zeta, self._wrap(eta), dx=dzeta, dy=deta)
        return np.asarray(result, dtype=float)
