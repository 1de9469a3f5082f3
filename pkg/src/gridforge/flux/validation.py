"""Equilibrium-validation operators on flux fields."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from gridforge.flux.fields import FluxField, eval_jet
from gridforge.flux.models import FluxJet, Laplacian, Real
from gridforge.shared.errors import ConfigurationError, FluxDomainError, SingularGradientError


def laplacian_of(jet: FluxJet, x: Real, convention: Laplacian = Laplacian.PLANAR) -> Real:
    if convention is Laplacian.PLANAR:
        return jet.laplacian
    return jet.dxx + jet.dx / x + jet.dyy


def grad_shafranov_operator(jet: FluxJet, x: Real) -> Real:
    """Δ*ψ = R ∂_R(ψ_R / R) + ψ_ZZ."""
    return jet.dxx - jet.dx / x + jet.dyy


def conformal_condition(
    field: FluxField,
    p: tuple[float, float],
    laplacian: Laplacian = Laplacian.PLANAR,
) -> float:
    """Ratio Δψ / |∇ψ|^2 at ``p``.

    A flux-aligned conformal grid exists only when this ratio is a function of
    psi alone; callers compare values along a contour.
    """
    jet = eval_jet(field, p)
    grad_sq = float(jet.grad_sq)
    if not grad_sq > 0.0:
        raise SingularGradientError(p[0], p[1], grad_sq)
    if laplacian is Laplacian.AXISYMMETRIC and not p[0] > 0:
        raise FluxDomainError(field.type, p[0], p[1], "axisymmetric Laplacian requires x > 0")
    return float(laplacian_of(jet, p[0], laplacian)) / grad_sq


def gs_residual(field: FluxField, sample_points: npt.ArrayLike) -> float:
    """Relative residual of Δ*ψ after a least-squares fit by alpha*x^2 + beta.

    Solovev-type profiles make the right-hand side exactly of that form, so the
    residual measures how far ``field`` is from such an equilibrium.
    """
    pts = np.asarray(sample_points, dtype=float).reshape(-1, 2)
    if pts.shape[0] < 3:
        raise ConfigurationError("gs_residual needs at least 3 sample points")
    x, y = pts[:, 0], pts[:, 1]
    jet = field.jet(x, y)
    if np.any(x <= 0):
        bad = int(np.argmax(x <= 0))
        raise FluxDomainError(field.type, float(x[bad]), float(y[bad]), "requires x > 0")
    rhs = np.asarray(grad_shafranov_operator(jet, x), dtype=float)
    design = np.column_stack([x * x, np.ones_like(x)])
    coeffs, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    norm = float(np.linalg.norm(rhs))
    if norm == 0.0:
        return 0.0
    return float(np.linalg.norm(rhs - design @ coeffs)) / norm
