"""Conduction tensors chi selecting conformal, adapted or monitor grids."""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from gridforge.flux.models import FluxJet
from gridforge.geometry.tensors import Jacobian2, SymTensor2, push_tensor
from gridforge.grids.models import WeightMode
from gridforge.shared.errors import PositivityError


class _ChiBase(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class ConformalChi(_ChiBase):
    """chi = I: the Laplace equation, conformal coordinates."""

    type: Literal["conformal"] = "conformal"


class AdaptedChi(_ChiBase):
    """chi = I / w: adaption by a scalar weight."""

    type: Literal["adapted"] = "adapted"
    weight: WeightMode = WeightMode.GRAD_PSI


class MonitorChi(_ChiBase):
    """chi = G / sqrt(det G) with G = T T + k^2 N N + eps I built from grad psi."""

    type: Literal["monitor"] = "monitor"
    k: float = Field(default=0.1, gt=0)
    eps: float = Field(default=0.001, gt=0)


def build_chi_cartesian(
    chi_model: ConformalChi | AdaptedChi | MonitorChi, jet: FluxJet
) -> SymTensor2:
    """chi^{xy} components at the points described by ``jet``."""
    px = np.asarray(jet.dx, dtype=float)
    py = np.asarray(jet.dy, dtype=float)
    grad_sq = px * px + py * py
    ones = np.ones_like(grad_sq)
    if isinstance(chi_model, ConformalChi):
        chi = SymTensor2(xx=ones, xy=0.0 * ones, yy=ones)
    elif isinstance(chi_model, AdaptedChi):
        w = np.sqrt(grad_sq) if chi_model.weight is WeightMode.GRAD_PSI else ones
        chi = SymTensor2(xx=1.0 / w, xy=0.0 * ones, yy=1.0 / w)
    else:
        k2 = chi_model.k * chi_model.k
        eps = chi_model.eps
        g_xx = py * py + k2 * px * px + eps
        g_xy = (k2 - 1.0) * px * py
        g_yy = px * px + k2 * py * py + eps
        sqrt_det_inv = 1.0 / np.sqrt((eps + k2 * grad_sq) * (eps + grad_sq))
        chi = SymTensor2(xx=sqrt_det_inv * g_xx, xy=sqrt_det_inv * g_xy, yy=sqrt_det_inv * g_yy)
    det = np.asarray(chi.det)
    trace = np.asarray(chi.xx) + np.asarray(chi.yy)
    if not (np.all(np.isfinite(det)) and np.all(det > 0) and np.all(trace > 0)):
        raise PositivityError("chi", float(np.nanmin(np.minimum(det, trace))))
    return chi


def transform_chi(chi_xy: SymTensor2, node_jacobian: Jacobian2) -> SymTensor2:
    """chi in the coordinates whose one-forms make up ``node_jacobian``."""
    return push_tensor(chi_xy, node_jacobian)
