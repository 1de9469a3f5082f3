"""Value types shared by every flux field."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TypeAlias

import numpy as np
import numpy.typing as npt

FloatArray: TypeAlias = npt.NDArray[np.float64]
Real: TypeAlias = float | FloatArray


class Laplacian(str, Enum):
    """Which Laplacian enters Δψ."""

    PLANAR = "planar"
    AXISYMMETRIC = "axisymmetric"


@dataclass(frozen=True, slots=True)
class FluxJet:
    """Value and partial derivatives of psi up to second order.

    Entries are floats for a single point or equally shaped arrays for a batch.
    """

    psi: Real
    dx: Real
    dy: Real
    dxx: Real
    dxy: Real
    dyy: Real

    @property
    def grad_sq(self) -> Real:
        return self.dx * self.dx + self.dy * self.dy

    @property
    def laplacian(self) -> Real:
        """Planar Laplacian dxx + dyy."""
        return self.dxx + self.dyy

    def as_floats(self) -> FluxJet:
        return FluxJet(
            psi=float(self.psi),
            dx=float(self.dx),
            dy=float(self.dy),
            dxx=float(self.dxx),
            dxy=float(self.dxy),
            dyy=float(self.dyy),
        )
