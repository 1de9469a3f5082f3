"""Analytic flux functions with exact derivatives through second order.

Fields are immutable pydantic documents so they can be validated from JSON,
stored in grid provenance and shared across threads. ``jet`` is vectorized
over numpy arrays.
"""

from __future__ import annotations

from collections.abc import Callable
from functools import lru_cache
from typing import Annotated, Any, Literal

import numpy as np
import structlog
import sympy as sp
from pydantic import BaseModel, ConfigDict, Field
from scipy import optimize

from gridforge.config import DEFAULT_SOLOVEV_AMPLITUDE
from gridforge.flux.models import FloatArray, FluxJet, Real
from gridforge.shared.errors import ConfigurationError, FluxDomainError, NumericalError

logger = structlog.get_logger()


class FluxField(BaseModel):
    """Common interface of analytic flux functions."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    type: str

    def jet(self, x: Real, y: Real) -> FluxJet:
        raise NotImplementedError

    def psi(self, x: Real, y: Real) -> Real:
        return self.jet(x, y).psi

    @property
    def length_scale(self) -> float:
        """Typical length of the field's geometry, used to scale tolerances."""
        return 1.0

    def axis_guess(self) -> tuple[float, float]:
        """Point enclosed by every closed contour of interest (an O-point estimate)."""
        raise ConfigurationError(f"Field {self.type!r} has no closed contours to grid")

    def _require_positive_x(self, x: Real, y: Real) -> None:
        xa = np.asarray(x, dtype=float)
        bad = ~(xa > 0)
        if np.any(bad):
            idx = np.unravel_index(int(np.argmax(bad)), xa.shape) if xa.ndim else ()
            ya = np.broadcast_to(np.asarray(y, dtype=float), xa.shape)
            raise FluxDomainError(self.type, float(xa[idx]), float(ya[idx]), "requires x > 0")


class AnnulusField(FluxField):
    """psi = scale * |p - center|^2 / 2 (concentric circles, Δψ = 2·scale)."""

    type: Literal["annulus"] = "annulus"
    center: tuple[float, float] = (0.0, 0.0)
    scale: float = Field(default=1.0, gt=0)

    def jet(self, x: Real, y: Real) -> FluxJet:
        rx = np.asarray(x, dtype=float) - self.center[0]
        ry = np.asarray(y, dtype=float) - self.center[1]
        s = self.scale
        ones = np.ones_like(rx + ry)
        return FluxJet(
            psi=0.5 * s * (rx * rx + ry * ry),
            dx=s * rx * ones,
            dy=s * ry * ones,
            dxx=s * ones,
            dxy=0.0 * ones,
            dyy=s * ones,
        )

    def axis_guess(self) -> tuple[float, float]:
        return self.center


class HarmonicLogField(FluxField):
    """psi = scale * ln|p - center|, harmonic away from the center."""

    type: Literal["harmonic"] = "harmonic"
    center: tuple[float, float] = (0.0, 0.0)
    scale: float = Field(default=1.0, gt=0)

    def jet(self, x: Real, y: Real) -> FluxJet:
        rx = np.asarray(x, dtype=float) - self.center[0]
        ry = np.asarray(y, dtype=float) - self.center[1]
        rho2 = rx * rx + ry * ry
        if np.any(rho2 == 0.0):
            raise FluxDomainError(self.type, *self.center, "logarithm singular at the center")
        s = self.scale
        rho4 = rho2 * rho2
        dxx = s * (ry * ry - rx * rx) / rho4
        return FluxJet(
            psi=0.5 * s * np.log(rho2),
            dx=s * rx / rho2,
            dy=s * ry / rho2,
            dxx=dxx,
            dxy=-2.0 * s * rx * ry / rho4,
            dyy=-dxx,
        )

    def axis_guess(self) -> tuple[float, float]:
        return self.center


class PowerFourField(FluxField):
    """psi = R^4 with R the first coordinate (x > 0)."""

    type: Literal["power_four"] = "power_four"

    def jet(self, x: Real, y: Real) -> FluxJet:
        self._require_positive_x(x, y)
        xa = np.asarray(x, dtype=float)
        zeros = 0.0 * (xa + np.asarray(y, dtype=float))
        return FluxJet(
            psi=xa**4 + zeros,
            dx=4.0 * xa**3 + zeros,
            dy=zeros,
            dxx=12.0 * xa**2 + zeros,
            dxy=zeros,
            dyy=zeros,
        )


class ProductSquareField(FluxField):
    """psi = R^2 Z^2 (x > 0)."""

    type: Literal["product_square"] = "product_square"

    def jet(self, x: Real, y: Real) -> FluxJet:
        self._require_positive_x(x, y)
        xa = np.asarray(x, dtype=float)
        ya = np.asarray(y, dtype=float)
        return FluxJet(
            psi=xa * xa * ya * ya,
            dx=2.0 * xa * ya * ya,
            dy=2.0 * xa * xa * ya,
            dxx=2.0 * ya * ya + 0.0 * xa,
            dxy=4.0 * xa * ya,
            dyy=2.0 * xa * xa + 0.0 * ya,
        )


# Solovev coefficients for an ITER-like, up-down asymmetric equilibrium.
DEFAULT_SOLOVEV_COEFFICIENTS: tuple[float, ...] = (
    0.07350114445500399706,
    -0.08662417436317227513,
    -0.14639315434011026207,
    -0.07631237100536276213,
    0.09031790113794227394,
    -0.09157541239018724584,
    -0.003892282979837564482,
    0.04271891225076417603,
    0.22755456460027913117,
    -0.13047241360177695448,
    -0.03006974108476955225,
    0.004212671892103931173,
)
DEFAULT_SOLOVEV_R0 = 547.891714877869


def solovev_basis(x: sp.Symbol, y: sp.Symbol) -> list[sp.Expr]:
    """Homogeneous Grad-Shafranov polynomials in normalized coordinates."""
    ln = sp.log(x)
    return [
        sp.Integer(1),
        x**2,
        y**2 - x**2 * ln,
        x**4 - 4 * x**2 * y**2,
        2 * y**4 - 9 * y**2 * x**2 + 3 * x**4 * ln - 12 * x**2 * y**2 * ln,
        x**6 - 12 * x**4 * y**2 + 8 * x**2 * y**4,
        8 * y**6
        - 140 * y**4 * x**2
        + 75 * y**2 * x**4
        - 15 * x**6 * ln
        + 180 * x**4 * y**2 * ln
        - 120 * x**2 * y**4 * ln,
        y,
        y * x**2,
        y**3 - 3 * y * x**2 * ln,
        3 * y * x**4 - 4 * y**3 * x**2,
        8 * y**5 - 45 * y * x**4 - 80 * y**3 * x**2 * ln + 60 * y * x**4 * ln,
    ]


def solovev_particular(x: sp.Symbol, a: sp.Symbol) -> sp.Expr:
    """Particular solution with Δ*ψ_p = (1 - A) x^2 + A."""
    return x**4 / 8 + a * (x**2 * sp.log(x) / 2 - x**4 / 8)


@lru_cache(maxsize=1)
def _solovev_kernels() -> tuple[Callable[..., Any], ...]:
    x, y, a = sp.symbols("x y A", real=True)
    coeffs = sp.symbols("c1:13", real=True)
    psi = solovev_particular(x, a) + sum(
        (c * b for c, b in zip(coeffs, solovev_basis(x, y), strict=True)), sp.Integer(0)
    )
    exprs = [
        psi,
        sp.diff(psi, x),
        sp.diff(psi, y),
        sp.diff(psi, x, 2),
        sp.diff(psi, x, y),
        sp.diff(psi, y, 2),
    ]
    args = (x, y, a, *coeffs)
    logger.debug("Compiled Solovev kernels", terms=len(coeffs))
    return tuple(sp.lambdify(args, expr, modules="numpy") for expr in exprs)


class SolovevField(FluxField):
    """Solovev equilibrium psi(R, Z) = amplitude * psi_n(R/R0, Z/R0)."""

    type: Literal["solovev"] = "solovev"
    A: float = 0.0
    c: tuple[float, ...] = Field(default=DEFAULT_SOLOVEV_COEFFICIENTS, min_length=12, max_length=12)
    R0: float = Field(default=DEFAULT_SOLOVEV_R0, gt=0)
    amplitude: float = Field(default=DEFAULT_SOLOVEV_AMPLITUDE, gt=0)
    inverse_aspect_ratio: float | None = 0.41071428571428575
    elongation: float | None = 1.75
    triangularity: float | None = 0.47

    def jet(self, x: Real, y: Real) -> FluxJet:
        self._require_positive_x(x, y)
        xn = np.asarray(x, dtype=float) / self.R0
        yn = np.asarray(y, dtype=float) / self.R0
        shape = np.broadcast_shapes(xn.shape, yn.shape)
        zeros = np.zeros(shape)
        k = [np.asarray(f(xn, yn, self.A, *self.c), dtype=float) + zeros for f in _solovev_kernels()]
        s0 = self.amplitude
        s1 = s0 / self.R0
        s2 = s1 / self.R0
        return FluxJet(
            psi=s0 * k[0],
            dx=s1 * k[1],
            dy=s1 * k[2],
            dxx=s2 * k[3],
            dxy=s2 * k[4],
            dyy=s2 * k[5],
        )

    @property
    def length_scale(self) -> float:
        return self.R0

    def axis_guess(self) -> tuple[float, float]:
        return _solovev_axis(self)


@lru_cache(maxsize=16)
def _solovev_axis(field: SolovevField) -> tuple[float, float]:
    return find_o_point(field, (field.R0, 0.0))


def find_o_point(field: FluxField, guess: tuple[float, float]) -> tuple[float, float]:
    """Refine a critical point of psi by Newton iteration on grad psi.

    The result must be an extremum (definite Hessian); saddles are rejected.
    """

    def gradient(p: FloatArray) -> FloatArray:
        jet = field.jet(p[0], p[1])
        return np.array([float(jet.dx), float(jet.dy)])

    def hessian(p: FloatArray) -> FloatArray:
        jet = field.jet(p[0], p[1])
        return np.array([[float(jet.dxx), float(jet.dxy)], [float(jet.dxy), float(jet.dyy)]])

    sol = optimize.root(gradient, np.asarray(guess, dtype=float), jac=hessian, method="hybr")
    if not sol.success:
        raise NumericalError(f"O-point search for {field.type} failed: {sol.message}")
    x0, y0 = (float(v) for v in sol.x)
    jet = field.jet(x0, y0)
    det = float(jet.dxx) * float(jet.dyy) - float(jet.dxy) ** 2
    if det <= 0:
        raise NumericalError(f"Critical point of {field.type} at ({x0:.6g}, {y0:.6g}) is a saddle")
    logger.debug("Located O-point", field=field.type, x=x0, y=y0, psi=float(jet.psi))
    return x0, y0


AnalyticField = Annotated[
    AnnulusField | HarmonicLogField | PowerFourField | ProductSquareField | SolovevField,
    Field(discriminator="type"),
]


def eval_jet(field: FluxField, p: tuple[float, float]) -> FluxJet:
    """Evaluate psi and its partials at a single point."""
    x, y = float(p[0]), float(p[1])
    if not (np.isfinite(x) and np.isfinite(y)):
        raise FluxDomainError(field.type, x, y, "point is not finite")
    return field.jet(x, y).as_floats()
