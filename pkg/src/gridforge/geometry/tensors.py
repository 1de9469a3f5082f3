"""2x2 curvilinear tensor algebra.

All quantities are stored contravariant. Every operation works element-wise on
numpy arrays, so a whole grid of Jacobians is transformed in one call.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from gridforge.config import get_settings
from gridforge.flux.models import Real
from gridforge.shared.errors import DegenerateMetricError, SingularJacobianError


class JacobianKind(str, Enum):
    """Direction tag of a Jacobian."""

    ONE_FORMS = "one_forms"  # rows are gradients of the new coordinates (zeta_x, zeta_y; eta_x, eta_y)
    TANGENTS = "tangents"  # rows are derivatives of old by new (x_zeta, x_eta; y_zeta, y_eta)

    def flipped(self) -> JacobianKind:
        return JacobianKind.TANGENTS if self is JacobianKind.ONE_FORMS else JacobianKind.ONE_FORMS


@dataclass(frozen=True, slots=True)
class Jacobian2:
    a11: Real
    a12: Real
    a21: Real
    a22: Real
    kind: JacobianKind = JacobianKind.ONE_FORMS

    @property
    def det(self) -> Real:
        return self.a11 * self.a22 - self.a12 * self.a21

    @property
    def sqrt_g(self) -> Real:
        """Volume element of the map, signed."""
        if self.kind is JacobianKind.TANGENTS:
            return self.det
        return 1.0 / self.det


@dataclass(frozen=True, slots=True)
class SymTensor2:
    """Symmetric contravariant tensor (xx, xy, yy)."""

    xx: Real
    xy: Real
    yy: Real

    @property
    def det(self) -> Real:
        return self.xx * self.yy - self.xy * self.xy

    def is_positive_definite(self) -> bool:
        return bool(np.all(np.asarray(self.xx) > 0) and np.all(np.asarray(self.det) > 0))


@dataclass(frozen=True, slots=True)
class Metric2:
    """Inverse metric g^{ij} of a 2D coordinate system."""

    guu: Real
    guv: Real
    gvv: Real

    @property
    def sqrt_g(self) -> Real:
        return 1.0 / np.sqrt(self.guu * self.gvv - self.guv * self.guv)


def _check_nonsingular(det: Real, scale: float) -> None:
    threshold = get_settings().singular_tolerance * scale * scale
    magnitude = np.abs(np.asarray(det, dtype=float))
    if np.any(magnitude <= threshold):
        raise SingularJacobianError(float(np.min(magnitude)), threshold)


def invert_jacobian(fwd: Jacobian2, scale: float = 1.0) -> Jacobian2:
    """Cofactor inverse; the direction tag flips.

    ``scale`` is a characteristic entry size so the singularity floor is
    relative, 1e-14 * scale^2 by default.
    """
    det = fwd.det
    _check_nonsingular(det, scale)
    return Jacobian2(
        a11=fwd.a22 / det,
        a12=-fwd.a12 / det,
        a21=-fwd.a21 / det,
        a22=fwd.a11 / det,
        kind=fwd.kind.flipped(),
    )


def volume_element(fwd: Jacobian2, scale: float = 1.0) -> Real:
    """Signed √g of the map described by ``fwd``."""
    _check_nonsingular(fwd.det, scale)
    return fwd.sqrt_g


def inverse_metric_from_gradients(zx: Real, zy: Real, ex: Real, ey: Real) -> Metric2:
    """g^{ij} from the gradients of the two new coordinates."""
    metric = Metric2(
        guu=zx * zx + zy * zy,
        guv=zx * ex + zy * ey,
        gvv=ex * ex + ey * ey,
    )
    det = metric.guu * metric.gvv - metric.guv * metric.guv
    if np.any(np.asarray(det) <= 0):
        raise DegenerateMetricError(float(np.min(det)))
    return metric


def covariant_metric(metric: Metric2) -> SymTensor2:
    """Lower-index g_{ij} as the inverse of g^{ij}."""
    det = metric.guu * metric.gvv - metric.guv * metric.guv
    return SymTensor2(xx=metric.gvv / det, xy=-metric.guv / det, yy=metric.guu / det)


def push_tensor(chi: SymTensor2, fwd: Jacobian2, scale: float = 1.0) -> SymTensor2:
    """Contravariant push-forward chi' = J chi J^T with J = d(new)/d(old)."""
    if fwd.kind is JacobianKind.TANGENTS:
        jac = invert_jacobian(fwd, scale)
    else:
        _check_nonsingular(fwd.det, scale)
        jac = fwd
    a, b, c, d = jac.a11, jac.a12, jac.a21, jac.a22
    # rows of J chi
    r11 = a * chi.xx + b * chi.xy
    r12 = a * chi.xy + b * chi.yy
    r21 = c * chi.xx + d * chi.xy
    r22 = c * chi.xy + d * chi.yy
    return SymTensor2(
        xx=r11 * a + r12 * b,
        xy=r11 * c + r12 * d,
        yy=r21 * c + r22 * d,
    )


def compose_oneforms(du: tuple[Real, Real], jac: Jacobian2) -> tuple[Real, Real]:
    """Chain rule: (u_x, u_y) from (u_zeta, u_eta) and the one-form Jacobian."""
    u1, u2 = du
    return (u1 * jac.a11 + u2 * jac.a21, u1 * jac.a12 + u2 * jac.a22)
