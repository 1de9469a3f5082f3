"""Divergence-form operator d_i(a^{ij} d_j f) on a (coord1, coord2) lattice.

The discrete operator is the Hessian of the energy

    E(f) = 1/2 sum_faces a11 (D1 f)^2 h2/h1 + 1/2 sum_faces a22 (D2 f)^2 h1/h2
           + sum_cells a12 (G1 f)(G2 f) h1 h2

with five-point differences D for the diagonal part and cell-averaged
gradients G for the mixed part. coord2 is periodic. Boundary values enter by an
affine elimination f_ext = P f + q, so K = P^T K_ext P stays symmetric whatever
the boundary conditions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.sparse as sp
import structlog
from scipy.sparse.linalg import LinearOperator, cg

from gridforge.flux.models import FloatArray
from gridforge.grids.models import Placement
from gridforge.shared.errors import (
    ConfigurationError,
    IndefiniteOperatorError,
    SolverConvergenceError,
)

logger = structlog.get_logger()


class BoundaryKind(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


@dataclass(frozen=True, slots=True)
class BoundaryCondition:
    kind: BoundaryKind
    values: FloatArray | float = 0.0  # Dirichlet data per coord2 node


@dataclass(frozen=True, slots=True)
class LinearSolve:
    values: FloatArray
    iterations: int
    residual: float


def _ghost_rows(a: FloatArray) -> FloatArray:
    """Ghost rows copy the coefficients of the adjacent real row."""
    return np.vstack([a[:1], a, a[-1:]])


def _periodic_shift(n2: int, offset: int) -> sp.csr_matrix:
    """Matrix picking column j + offset (mod n2) of a row."""
    cols = (np.arange(n2) + offset) % n2
    return sp.csr_matrix((np.ones(n2), (np.arange(n2), cols)), shape=(n2, n2))


class DivergenceOperator:
    """Symmetric discretization of -d_i(a^{ij} d_j f) times h1 h2.

    ``a11, a12, a22`` live on the real nodes, shape (n1, n2). With cell-centered
    placement each boundary lies half a cell outside the first/last row and is
    reached through a ghost row; with vertex placement the first and last rows
    are the boundary and only Dirichlet conditions are allowed.
    """

    def __init__(
        self,
        a11: FloatArray,
        a12: FloatArray,
        a22: FloatArray,
        h1: float,
        h2: float,
        *,
        placement: Placement,
        lower: BoundaryCondition,
        upper: BoundaryCondition,
    ):
        self.n1, self.n2 = a11.shape
        self.h1 = h1
        self.h2 = h2
        self.placement = placement
        self.lower = lower
        self.upper = upper
        if placement is Placement.VERTICES and BoundaryKind.NEUMANN in (lower.kind, upper.kind):
            raise ConfigurationError("Neumann conditions need cell-centered placement")
        if placement is Placement.CENTERS:
            self._ext_rows = self.n1 + 2
            self._k_ext = self._assemble(
                _ghost_rows(a11), _ghost_rows(a12), _ghost_rows(a22), half_edges=True
            )
        else:
            self._ext_rows = self.n1
            self._k_ext = self._assemble(a11, a12, a22, half_edges=False)
        self._P, self._q_basis = self._elimination()
        self.matrix = (self._P.T @ self._k_ext @ self._P).tocsr()

    @property
    def unknown_rows(self) -> slice:
        if self.placement is Placement.CENTERS:
            return slice(0, self.n1)
        return slice(1, self.n1 - 1)

    def _assemble(
        self, a11: FloatArray, a12: FloatArray, a22: FloatArray, *, half_edges: bool
    ) -> sp.csr_matrix:
        rows, n2 = a11.shape
        size = rows * n2
        eye_rows = sp.identity(rows, format="csr")
        eye2 = sp.identity(n2, format="csr")
        up2 = _periodic_shift(n2, 1)

        # coord1 differences between rows r and r+1, r = 0..rows-2
        d1_rows = sp.diags([-np.ones(rows - 1), np.ones(rows - 1)], [0, 1], shape=(rows - 1, rows))
        D1 = sp.kron(d1_rows, eye2, format="csr")
        a11_face = 0.5 * (a11[:-1] + a11[1:])
        w1 = np.ones(rows - 1)
        if half_edges:
            w1[0] = w1[-1] = 0.5
        W1 = sp.diags((a11_face * w1[:, None]).ravel() * self.h2 / self.h1)

        # coord2 differences on every row except ghost rows
        D2 = sp.kron(eye_rows, up2 - eye2, format="csr")
        a22_face = 0.5 * (a22 + np.roll(a22, -1, axis=1))
        w2 = np.ones(rows)
        if half_edges:
            w2[0] = w2[-1] = 0.0
        W2 = sp.diags((a22_face * w2[:, None]).ravel() * self.h1 / self.h2)

        k = D1.T @ W1 @ D1 + D2.T @ W2 @ D2

        if np.any(a12 != 0.0):
            # cell (r, j)-(r+1, j+1) gradients, scaled by h1 and h2 respectively
            half = 0.5 * np.ones(rows - 1)
            avg1 = sp.diags([half, half], [0, 1], shape=(rows - 1, rows))
            avg2 = 0.5 * (eye2 + up2)
            G1 = sp.kron(d1_rows, avg2, format="csr")
            G2 = sp.kron(avg1, up2 - eye2, format="csr")
            a12_cell = 0.5 * (a12[:-1] + a12[1:])
            a12_cell = 0.5 * (a12_cell + np.roll(a12_cell, -1, axis=1))
            wc = np.ones(rows - 1)
            if half_edges:
                wc[0] = wc[-1] = 0.5
            W12 = sp.diags((a12_cell * wc[:, None]).ravel())
            k = k + G1.T @ W12 @ G2 + G2.T @ W12 @ G1

        assert k.shape == (size, size)
        return k.tocsr()

    def _elimination(self) -> tuple[sp.csr_matrix, sp.csr_matrix]:
        """P maps unknowns to the extended lattice; q_basis maps boundary data."""
        n1, n2 = self.n1, self.n2
        rows = self._ext_rows
        if self.placement is Placement.CENTERS:
            p_rows = sp.lil_matrix((rows, n1))
            for r in range(n1):
                p_rows[r + 1, r] = 1.0
            p_rows[0, 0] = -1.0 if self.lower.kind is BoundaryKind.DIRICHLET else 1.0
            p_rows[rows - 1, n1 - 1] = -1.0 if self.upper.kind is BoundaryKind.DIRICHLET else 1.0
            q_rows = sp.lil_matrix((rows, 2))
            if self.lower.kind is BoundaryKind.DIRICHLET:
                q_rows[0, 0] = 2.0
            if self.upper.kind is BoundaryKind.DIRICHLET:
                q_rows[rows - 1, 1] = 2.0
        else:
            p_rows = sp.lil_matrix((rows, n1 - 2))
            for r in range(1, n1 - 1):
                p_rows[r, r - 1] = 1.0
            q_rows = sp.lil_matrix((rows, 2))
            q_rows[0, 0] = 1.0
            q_rows[rows - 1, 1] = 1.0
        eye2 = sp.identity(n2, format="csr")
        p_full = sp.kron(p_rows.tocsr(), eye2, format="csr")
        return p_full, sp.kron(q_rows.tocsr(), eye2, format="csr")

    def boundary_vector(self) -> FloatArray:
        lower = np.broadcast_to(np.asarray(self.lower.values, dtype=float), (self.n2,))
        upper = np.broadcast_to(np.asarray(self.upper.values, dtype=float), (self.n2,))
        return self._q_basis @ np.concatenate([lower, upper])

    def right_hand_side(self, source: FloatArray | None = None) -> FloatArray:
        """K f = b for  d_i(a^{ij} d_j f) = source  on the real nodes."""
        b = -(self._P.T @ (self._k_ext @ self.boundary_vector()))
        if source is not None:
            s = np.asarray(source, dtype=float)[self.unknown_rows].ravel()
            b = b - s * self.h1 * self.h2
        return b

    def expand(self, unknowns: FloatArray) -> FloatArray:
        """Full nodal array: unknowns plus fixed Dirichlet rows for vertex placement."""
        if self.placement is Placement.CENTERS:
            return unknowns.reshape(self.n1, self.n2)
        full = np.empty((self.n1, self.n2))
        full[0] = np.broadcast_to(self.lower.values, (self.n2,))
        full[-1] = np.broadcast_to(self.upper.values, (self.n2,))
        full[1:-1] = unknowns.reshape(self.n1 - 2, self.n2)
        return full

    def boundary_fluxes(self, values: FloatArray) -> tuple[FloatArray, FloatArray]:
        """a^{1j} d_j f per unit coord2 on the first and last rows of a vertex lattice.

        Read off the discrete reactions K_ext f at the Dirichlet rows, so the
        fluxes are conservative: in one dimension both equal the exact discrete
        flux through every face.
        """
        if self.placement is not Placement.VERTICES:
            raise ConfigurationError("Boundary reactions need vertex placement")
        full = np.asarray(values, dtype=float)
        reaction = (self._k_ext @ full.ravel()).reshape(self.n1, self.n2) / self.h2
        return -reaction[0], reaction[-1]

    def solve(
        self,
        source: FloatArray | None = None,
        *,
        rtol: float = 1e-11,
        max_iterations: int = 100_000,
    ) -> LinearSolve:
        """Jacobi-preconditioned conjugate gradient."""
        k = self.matrix
        b = self.right_hand_side(source)
        diag = k.diagonal()
        if np.any(diag <= 0):
            raise IndefiniteOperatorError(f"non-positive diagonal entry {float(diag.min()):.3e}")
        b_norm = float(np.linalg.norm(b))
        if b_norm == 0.0:
            return LinearSolve(self.expand(np.zeros(b.size)), 0, 0.0)
        inv_diag = 1.0 / diag
        precond = LinearOperator(k.shape, matvec=lambda r: inv_diag * r, dtype=float)
        iterations = 0

        def count(_: FloatArray) -> None:
            nonlocal iterations
            iterations += 1

        x, info = cg(k, b, rtol=rtol, atol=0.0, maxiter=max_iterations, M=precond, callback=count)
        residual = float(np.linalg.norm(b - k @ x)) / b_norm
        if info < 0:
            raise IndefiniteOperatorError(f"conjugate gradient breakdown (info={info})")
        if info > 0 and residual > rtol * 10.0:
            raise SolverConvergenceError(iterations, residual, rtol)
        logger.debug(
            "Solved elliptic system", unknowns=b.size, iterations=iterations, residual=residual
        )
        return LinearSolve(self.expand(x), iterations, residual)
