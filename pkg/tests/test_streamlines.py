"""Tests for the theta angle, streamline integration and contour tracing."""

from typing import Literal

import numpy as np
import pytest

from gridforge.config import get_settings
from gridforge.flux.fields import AnnulusField, FluxField, HarmonicLogField
from gridforge.flux.models import FluxJet
from gridforge.ode import integrator as integrator_module
from gridforge.ode import (
    IntegratorConfig,
    Ray,
    ThetaFrame,
    dtheta,
    enclosed_area,
    find_flux_point,
    integrate_streamline,
    integrate_streamlines,
    integrate_with_aux,
    polygon_centroid,
    theta,
    theta_gradient,
    trace_contour,
)
from gridforge.shared.errors import (
    BracketFailureError,
    CenterPointError,
    ContourResidualError,
    DenominatorVanishingError,
    StepFailureError,
)

FRAME = ThetaFrame(x0=0.0, y0=0.0)


def _rotation(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return -y, x


def test_theta_branch_and_values() -> None:
    assert theta(FRAME, (1.0, 0.0)) == pytest.approx(0.0)
    assert theta(FRAME, (0.0, 1.0)) == pytest.approx(np.pi / 2)
    assert theta(FRAME, (-1.0, 0.0)) == pytest.approx(np.pi)
    assert theta(FRAME, (0.0, -1.0)) == pytest.approx(-np.pi / 2)


def test_theta_is_vectorized_about_a_shifted_frame() -> None:
    frame = ThetaFrame(x0=10.0, y0=-1.0)
    angles = theta(frame, (np.array([11.0, 10.0]), np.array([-1.0, 0.0])))

    np.testing.assert_allclose(angles, [0.0, np.pi / 2])


def test_dtheta_components() -> None:
    tx, ty = dtheta(FRAME, (2.0, 0.0))

    assert tx == pytest.approx(0.0)
    assert ty == pytest.approx(0.5)


def test_theta_undefined_at_the_frame_center() -> None:
    with pytest.raises(CenterPointError):
        theta(FRAME, (0.0, 0.0))
    with pytest.raises(CenterPointError):
        dtheta(FRAME, (np.array([1.0, 0.0]), np.array([0.0, 0.0])))


def test_streamlines_arrive_at_requested_angles() -> None:
    targets = np.linspace(0.5, 2 * np.pi, 7)
    starts = np.array([[1.0, 0.0], [2.0, 0.0], [0.5, 0.0]])

    points, aux = integrate_streamlines(
        _rotation, starts, 0.0, targets, param_gradient=theta_gradient(FRAME)
    )

    assert aux is None
    assert points.shape == (7, 3, 2)
    radii = np.array([1.0, 2.0, 0.5])
    np.testing.assert_allclose(points[:, :, 0], np.outer(np.cos(targets), radii), atol=1e-9)
    np.testing.assert_allclose(points[:, :, 1], np.outer(np.sin(targets), radii), atol=1e-9)


def test_streamline_results_do_not_depend_on_batching(monkeypatch: pytest.MonkeyPatch) -> None:
    starts = np.column_stack([np.linspace(1.0, 2.0, 9), np.zeros(9)])
    targets = [1.0, 2.0, 3.0]

    def trace() -> np.ndarray:
        points, _ = integrate_streamlines(
            _rotation, starts, 0.0, targets, param_gradient=theta_gradient(FRAME)
        )
        return points

    monkeypatch.setenv("GRIDFORGE_STREAMLINE_CHUNK", "4")
    monkeypatch.setenv("GRIDFORGE_THREADS", "1")
    get_settings.cache_clear()
    serial = trace()
    monkeypatch.setenv("GRIDFORGE_THREADS", "3")
    get_settings.cache_clear()
    threaded = trace()

    np.testing.assert_array_equal(serial, threaded)


def test_auxiliary_values_integrate_against_the_parameter() -> None:
    def aux_rhs(x: np.ndarray, y: np.ndarray, aux: np.ndarray) -> np.ndarray:
        return np.ones_like(aux)

    line = integrate_with_aux(
        _rotation,
        aux_rhs,
        (1.0, 0.0),
        0.0,
        0.0,
        2 * np.pi,
        param_gradient=theta_gradient(FRAME),
        dense=[np.pi],
    )

    assert line.aux_end is not None
    assert line.aux_end[0] == pytest.approx(2 * np.pi)
    assert line.samples is not None
    np.testing.assert_allclose(line.samples[0], [-1.0, 0.0], atol=1e-9)
    np.testing.assert_allclose(line.end, [1.0, 0.0], atol=1e-9)


def test_integrate_streamline_without_reparameterization() -> None:
    # dx/dt = x from x = 1 reaches e at t = 1
    def growth(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return x, np.zeros_like(y)

    line = integrate_streamline(growth, (1.0, 0.0), 0.0, 1.0)

    assert line.end[0] == pytest.approx(np.e, rel=1e-9)
    assert line.samples is None


def test_vanishing_denominator_is_reported() -> None:
    def along_x(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return np.ones_like(x), np.zeros_like(y)

    def y_gradient(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return np.zeros_like(x), np.ones_like(y)

    with pytest.raises(DenominatorVanishingError):
        integrate_streamlines(
            along_x, np.array([[0.0, 0.0]]), 0.0, [1.0], param_gradient=y_gradient
        )


def test_step_budget_is_enforced() -> None:
    config = IntegratorConfig(max_steps=1)

    with pytest.raises(StepFailureError, match="Step budget"):
        integrate_streamlines(
            _rotation,
            np.array([[1.0, 0.0]]),
            0.0,
            [2 * np.pi],
            config,
            param_gradient=theta_gradient(FRAME),
        )


def test_tightened_config_scales_tolerances() -> None:
    config = IntegratorConfig(rtol=1e-8, atol=1e-10).tightened(0.1)

    assert config.rtol == pytest.approx(1e-9)
    assert config.atol == pytest.approx(1e-11)


def test_batched_lines_share_tightened_tolerances(monkeypatch: pytest.MonkeyPatch) -> None:
    seen: list[IntegratorConfig] = []
    original = integrator_module.solve_batch

    def recording(*args: object) -> object:
        seen.append(args[-1])  # type: ignore[arg-type]
        return original(*args)  # type: ignore[arg-type]

    monkeypatch.setattr(integrator_module, "solve_batch", recording)
    monkeypatch.setenv("GRIDFORGE_STREAMLINE_CHUNK", "16")
    monkeypatch.setenv("GRIDFORGE_THREADS", "1")
    get_settings.cache_clear()
    config = IntegratorConfig(rtol=1e-8, atol=1e-10)
    starts = np.column_stack([np.linspace(1.0, 2.0, 20), np.zeros(20)])

    integrate_streamlines(
        _rotation, starts, 0.0, [1.0], config, param_gradient=theta_gradient(FRAME)
    )

    # batches of 16 and 4 lines
    assert [c.rtol for c in seen] == pytest.approx([0.25e-8, 0.5e-8])
    assert [c.atol for c in seen] == pytest.approx([0.25e-10, 0.5e-10])


def test_find_flux_point_along_rays() -> None:
    field = AnnulusField()

    x, y = find_flux_point(field, FRAME, 2.0)
    assert (x, y) == pytest.approx((2.0, 0.0), abs=1e-12)

    ray = Ray(origin=(0.0, 0.0), direction=(0.0, -3.0))
    x, y = find_flux_point(field, ray, 0.5)
    assert (x, y) == pytest.approx((0.0, -1.0), abs=1e-12)


def test_find_flux_point_reports_missing_contours() -> None:
    with pytest.raises(BracketFailureError):
        find_flux_point(AnnulusField(), FRAME, -1.0)


class _StepField(FluxField):
    """psi jumps from -1 to 1 at x = 1: a sign change with no root."""

    type: Literal["step"] = "step"

    def jet(self, x: float, y: float) -> FluxJet:
        xa = np.asarray(x, dtype=float) + 0.0 * np.asarray(y, dtype=float)
        zeros = np.zeros_like(xa)
        psi = np.where(xa < 1.0, -1.0, 1.0)
        return FluxJet(psi=psi, dx=zeros, dy=zeros, dxx=zeros, dxy=zeros, dyy=zeros)


def test_find_flux_point_starts_past_a_singular_origin() -> None:
    x, y = find_flux_point(HarmonicLogField(), FRAME, np.log(2.0))

    assert (x, y) == pytest.approx((2.0, 0.0), abs=1e-12)


def test_find_flux_point_rejects_points_missing_the_contour() -> None:
    with pytest.raises(ContourResidualError) as info:
        find_flux_point(_StepField(), FRAME, 0.0, psi_scale=1.0)

    assert info.value.residual == pytest.approx(1.0)


def test_trace_contour_samples_equal_angles() -> None:
    points = trace_contour(AnnulusField(), 2.0, FRAME, 8)

    angles = 2 * np.pi * np.arange(8) / 8
    np.testing.assert_allclose(points[:, 0], 2.0 * np.cos(angles), atol=1e-9)
    np.testing.assert_allclose(points[:, 1], 2.0 * np.sin(angles), atol=1e-9)


def test_enclosed_area_of_a_circle() -> None:
    field = AnnulusField(center=(3.0, -1.0))
    frame = ThetaFrame(x0=3.0, y0=-1.0)

    assert enclosed_area(field, 2.0, frame) == pytest.approx(4.0 * np.pi, rel=1e-9)


def test_polygon_centroid_of_a_square() -> None:
    square = np.array([[1.0, 1.0], [3.0, 1.0], [3.0, 3.0], [1.0, 3.0]])

    assert polygon_centroid(square) == pytest.approx((2.0, 2.0))
