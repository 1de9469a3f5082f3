"""Structured grid containers shared by both generation passes."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from gridforge.flux.models import FloatArray
from gridforge.geometry.tensors import Jacobian2, JacobianKind

TWO_PI = 2.0 * np.pi

# end weights of fourth-order composite rules, in units of the cell width
_GREGORY_VERTICES = np.array([3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0])
_GREGORY_CENTERS = np.array([26.0 / 24.0, 21.0 / 24.0, 25.0 / 24.0])


class GridKind(str, Enum):
    FLUX_ALIGNED = "flux_aligned"
    ELLIPTIC = "elliptic"


class Placement(str, Enum):
    """Where nodes sit inside the uniform partition of the computational box."""

    CENTERS = "centers"
    VERTICES = "vertices"


class WeightMode(str, Enum):
    """Adaption weight w of the orthogonal grid."""

    UNITY = "unity"
    GRAD_PSI = "grad_psi"


class FirstLine(str, Enum):
    """Boundary carrying the equidistant discretization."""

    INNER = "inner"
    OUTER = "outer"


def coordinate_nodes(extent: float, n_cells: int, placement: Placement) -> FloatArray:
    """Nodes of a uniform partition of [0, extent] into ``n_cells`` cells."""
    step = extent / n_cells
    if placement is Placement.CENTERS:
        return (np.arange(n_cells) + 0.5) * step
    return np.arange(n_cells + 1) * step


def periodic_nodes(n_cells: int, placement: Placement) -> FloatArray:
    """Nodes on [0, 2 pi); vertices start at 0, centers half a cell later."""
    step = TWO_PI / n_cells
    if placement is Placement.CENTERS:
        return (np.arange(n_cells) + 0.5) * step
    return np.arange(n_cells) * step


@dataclass
class StructuredGrid:
    """Tensor-product grid with node coordinates and coordinate one-forms.

    ``d1x, d1y`` are the Cartesian components of d(coord1), ``d2x, d2y`` of
    d(coord2). Arrays have shape (n1, n2) with coord2 fastest.
    """

    kind: GridKind
    coord1: FloatArray
    coord2: FloatArray
    coord1_max: float
    x: FloatArray
    y: FloatArray
    d1x: FloatArray
    d1y: FloatArray
    d2x: FloatArray
    d2y: FloatArray
    psi0: float
    psi1: float
    placement: Placement = Placement.CENTERS
    h: FloatArray | None = None
    constants: dict[str, float] = field(default_factory=dict)
    provenance: dict[str, object] = field(default_factory=dict)

    @property
    def n1(self) -> int:
        return int(self.coord1.size)

    @property
    def n2(self) -> int:
        return int(self.coord2.size)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n1, self.n2

    @property
    def cells1(self) -> int:
        return self.n1 if self.placement is Placement.CENTERS else self.n1 - 1

    @property
    def h1(self) -> float:
        return self.coord1_max / self.cells1

    @property
    def h2(self) -> float:
        return TWO_PI / self.n2

    def jacobian(self) -> Jacobian2:
        return Jacobian2(self.d1x, self.d1y, self.d2x, self.d2y, JacobianKind.ONE_FORMS)

    @property
    def sqrt_g(self) -> FloatArray:
        return 1.0 / (self.d1x * self.d2y - self.d1y * self.d2x)

    def quadrature_weights(self) -> FloatArray:
        """Cell measure per node, fourth order in coord1.

        Vertex rows get the Gregory end corrections of the trapezoid rule and
        cell-centered rows those of the midpoint rule; coord2 is periodic, so
        equal weights there are already spectrally accurate.
        """
        w1 = np.ones(self.n1)
        if self.n1 >= 6:
            ends = _GREGORY_VERTICES if self.placement is Placement.VERTICES else _GREGORY_CENTERS
            w1[:3] = ends
            w1[-3:] = ends[::-1]
        elif self.placement is Placement.VERTICES:
            w1[0] = w1[-1] = 0.5
        return np.outer(w1 * self.h1, np.full(self.n2, self.h2))


@dataclass
class FluxAlignedGrid(StructuredGrid):
    """Pass-1 (zeta, eta) grid: zeta = f0 (psi - psi0), orthogonal to psi contours."""

    @property
    def n_zeta(self) -> int:
        return self.n1

    @property
    def n_eta(self) -> int:
        return self.n2

    @property
    def zeta_nodes(self) -> FloatArray:
        return self.coord1

    @property
    def eta_nodes(self) -> FloatArray:
        return self.coord2

    @property
    def zeta_x(self) -> FloatArray:
        return self.d1x

    @property
    def zeta_y(self) -> FloatArray:
        return self.d1y

    @property
    def eta_x(self) -> FloatArray:
        return self.d2x

    @property
    def eta_y(self) -> FloatArray:
        return self.d2y

    @property
    def f0(self) -> float:
        return self.constants["f0"]

    @property
    def zeta1(self) -> float:
        return self.coord1_max

    def coarsened(self, stride: int = 2) -> FluxAlignedGrid:
        """Every ``stride``-th zeta row of a vertex lattice; the eta nodes are kept."""
        if self.placement is not Placement.VERTICES or (self.n1 - 1) % stride:
            raise ValueError(f"Cannot take every {stride}th row of a {self.shape} lattice")
        rows = slice(None, None, stride)
        return replace(
            self,
            coord1=self.coord1[rows],
            x=self.x[rows],
            y=self.y[rows],
            d1x=self.d1x[rows],
            d1y=self.d1y[rows],
            d2x=self.d2x[rows],
            d2y=self.d2y[rows],
            h=None if self.h is None else self.h[rows],
            constants=dict(self.constants),
            provenance=dict(self.provenance),
        )


@dataclass
class EllipticGrid(StructuredGrid):
    """Pass-2 (u, v) grid built from the elliptic potential."""

    @property
    def n_u(self) -> int:
        return self.n1

    @property
    def n_v(self) -> int:
        return self.n2

    @property
    def u_nodes(self) -> FloatArray:
        return self.coord1

    @property
    def v_nodes(self) -> FloatArray:
        return self.coord2

    @property
    def u_x(self) -> FloatArray:
        return self.d1x

    @property
    def u_y(self) -> FloatArray:
        return self.d1y

    @property
    def v_x(self) -> FloatArray:
        return self.d2x

    @property
    def v_y(self) -> FloatArray:
        return self.d2y

    @property
    def c0(self) -> float:
        return self.constants["c0"]

    @property
    def u1(self) -> float:
        return self.coord1_max
