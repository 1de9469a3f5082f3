"""Tests for 2x2 curvilinear tensor algebra."""

import numpy as np
import pytest

from gridforge.geometry import (
    Jacobian2,
    JacobianKind,
    Metric2,
    SymTensor2,
    compose_oneforms,
    covariant_metric,
    inverse_metric_from_gradients,
    invert_jacobian,
    push_tensor,
    volume_element,
)
from gridforge.shared.errors import DegenerateMetricError, SingularJacobianError


def _polar_oneforms(r: np.ndarray, t: np.ndarray) -> Jacobian2:
    """Gradients of (r, theta) at the points (r cos t, r sin t)."""
    return Jacobian2(np.cos(t), np.sin(t), -np.sin(t) / r, np.cos(t) / r)


def test_invert_jacobian_flips_direction() -> None:
    fwd = Jacobian2(2.0, 0.0, 0.0, 4.0)

    inv = invert_jacobian(fwd)

    assert inv.kind is JacobianKind.TANGENTS
    assert (inv.a11, inv.a12, inv.a21, inv.a22) == pytest.approx((0.5, 0.0, 0.0, 0.25))
    assert invert_jacobian(inv).kind is JacobianKind.ONE_FORMS


def test_invert_jacobian_is_an_inverse_elementwise() -> None:
    r = np.linspace(1.0, 2.0, 5)
    t = np.linspace(0.0, 6.0, 5)
    fwd = _polar_oneforms(r, t)

    inv = invert_jacobian(fwd)

    np.testing.assert_allclose(fwd.a11 * inv.a11 + fwd.a12 * inv.a21, 1.0, atol=1e-14)
    np.testing.assert_allclose(fwd.a11 * inv.a12 + fwd.a12 * inv.a22, 0.0, atol=1e-14)
    # tangents of polar coordinates: x_theta = -r sin t
    np.testing.assert_allclose(inv.a12, -r * np.sin(t), atol=1e-14)


def test_invert_jacobian_rejects_singular_matrices() -> None:
    with pytest.raises(SingularJacobianError):
        invert_jacobian(Jacobian2(1.0, 2.0, 2.0, 4.0))


def test_singular_floor_is_relative_to_scale() -> None:
    tiny = Jacobian2(1e-9, 0.0, 0.0, 1e-9)

    with pytest.raises(SingularJacobianError):
        invert_jacobian(tiny)
    assert invert_jacobian(tiny, scale=1e-9).a11 == pytest.approx(1e9)


def test_volume_element_of_polar_coordinates_is_r() -> None:
    r = np.array([1.0, 1.5, 2.0])
    t = np.array([0.0, 1.0, 3.0])

    sqrt_g = volume_element(_polar_oneforms(r, t))

    np.testing.assert_allclose(sqrt_g, r)


def test_inverse_metric_from_gradients_polar() -> None:
    r = np.array([1.0, 2.0, 3.0])
    t = np.array([0.3, 1.2, -2.0])
    j = _polar_oneforms(r, t)

    metric = inverse_metric_from_gradients(j.a11, j.a12, j.a21, j.a22)

    np.testing.assert_allclose(metric.guu, 1.0)
    np.testing.assert_allclose(metric.guv, 0.0, atol=1e-15)
    np.testing.assert_allclose(metric.gvv, 1.0 / r**2)
    np.testing.assert_allclose(metric.sqrt_g, r)


def test_inverse_metric_rejects_parallel_gradients() -> None:
    with pytest.raises(DegenerateMetricError):
        inverse_metric_from_gradients(1.0, 1.0, 2.0, 2.0)


def test_covariant_metric_inverts_the_inverse_metric() -> None:
    metric = Metric2(guu=2.0, guv=0.5, gvv=1.0)

    lower = covariant_metric(metric)

    assert metric.guu * lower.xx + metric.guv * lower.xy == pytest.approx(1.0)
    assert metric.guu * lower.xy + metric.guv * lower.yy == pytest.approx(0.0)
    assert metric.guv * lower.xy + metric.gvv * lower.yy == pytest.approx(1.0)


def test_push_tensor_identity_under_rotation() -> None:
    angle = 0.7
    c, s = np.cos(angle), np.sin(angle)
    rotation = Jacobian2(c, -s, s, c)

    pushed = push_tensor(SymTensor2(1.0, 0.0, 1.0), rotation)

    assert (pushed.xx, pushed.xy, pushed.yy) == pytest.approx((1.0, 0.0, 1.0))


def test_push_tensor_of_identity_gives_inverse_metric() -> None:
    r = np.array([1.0, 2.0])
    t = np.array([0.5, 2.5])
    j = _polar_oneforms(r, t)

    pushed = push_tensor(SymTensor2(np.ones(2), np.zeros(2), np.ones(2)), j)
    metric = inverse_metric_from_gradients(j.a11, j.a12, j.a21, j.a22)

    np.testing.assert_allclose(pushed.xx, metric.guu)
    np.testing.assert_allclose(pushed.xy, metric.guv, atol=1e-15)
    np.testing.assert_allclose(pushed.yy, metric.gvv)


def test_push_tensor_accepts_tangent_jacobians() -> None:
    fwd = Jacobian2(2.0, 1.0, 0.0, 3.0)
    chi = SymTensor2(2.0, 0.3, 1.0)

    direct = push_tensor(chi, fwd)
    via_tangents = push_tensor(chi, invert_jacobian(fwd))

    assert (via_tangents.xx, via_tangents.xy, via_tangents.yy) == pytest.approx(
        (direct.xx, direct.xy, direct.yy)
    )


def test_compose_oneforms_is_the_chain_rule() -> None:
    # u = r^2 in polar coordinates: (u_r, u_theta) = (2r, 0) gives grad u = 2 (x, y)
    r = np.array([1.0, 2.0])
    t = np.array([0.0, np.pi / 2])
    j = _polar_oneforms(r, t)

    ux, uy = compose_oneforms((2.0 * r, np.zeros(2)), j)

    np.testing.assert_allclose(ux, 2.0 * r * np.cos(t), atol=1e-14)
    np.testing.assert_allclose(uy, 2.0 * r * np.sin(t), atol=1e-14)


def test_sym_tensor_positive_definiteness() -> None:
    assert SymTensor2(2.0, 0.5, 1.0).is_positive_definite()
    assert not SymTensor2(1.0, 2.0, 1.0).is_positive_definite()
