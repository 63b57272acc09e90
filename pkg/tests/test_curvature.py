"""Tests of connections, curvature, and frames."""

from typing import Sequence

import numpy as np
import pytest

from qkgeo import GabcParams, curvature_norm_formula, gabc_metric
from qkgeo.exceptions import DomainError
from qkgeo.qkside.family import calibration_constant
from qkgeo.tensorlab.curvature import (
    CURVATURE_NORM_SCALE, bianchi_residual, christoffel, constant_curvature_residual, covariant_derivative_riemann,
    covariant_derivative_tensor, curvature_norm, einstein_residual, frame_components, metric_compatibility,
    metric_signature, reduced_scalar_curvature, ricci, riemann, scalar_curvature
)
from qkgeo.tensorlab.fields import MetricField


# points well inside the sampling box of every family member used below
POINTS = [
    pytest.param((0.8, 0.1, -0.2, 0.3), id="near axis"),
    pytest.param((1.4, -0.4, 0.5, -0.7), id="off axis"),
]


@pytest.mark.parametrize('point', POINTS)
def test_christoffel_against_finite_differences(uhm_metric: MetricField, point: Sequence[float],
                                                finite_differences: object) -> None:
    """Test that Christoffel symbols from jets agree with the Koszul formula applied to finite differences."""
    metric = uhm_metric.value(point)
    derivatives = finite_differences(uhm_metric.value, point)
    lowered = (np.einsum('lji->lij', derivatives) + derivatives - np.einsum('ijl->lij', derivatives)) / 2
    expected = np.einsum('kl,lij->kij', np.linalg.inv(metric), lowered)
    np.testing.assert_allclose(christoffel(uhm_metric, point), expected, rtol=0, atol=1e-7)


@pytest.mark.parametrize('point', POINTS)
def test_levi_civita_identities(uhm_metric: MetricField, point: Sequence[float]) -> None:
    """Test metric compatibility, the first Bianchi identity, and the symmetries of the Riemann tensor."""
    np.testing.assert_allclose(metric_compatibility(uhm_metric, point), 0, rtol=0, atol=1e-12)
    np.testing.assert_allclose(covariant_derivative_tensor(uhm_metric, uhm_metric, 'll', point), 0, rtol=0, atol=1e-12)
    scale = np.abs(riemann(uhm_metric, point)).max()
    np.testing.assert_allclose(bianchi_residual(uhm_metric, point), 0, rtol=0, atol=1e-12 * scale)
    lowered = np.einsum('lm,mkij->lkij', uhm_metric.value(point), riemann(uhm_metric, point))
    np.testing.assert_allclose(lowered, -np.einsum('lkij->lkji', lowered), rtol=0, atol=1e-12 * scale)
    np.testing.assert_allclose(lowered, -np.einsum('lkij->klij', lowered), rtol=0, atol=1e-10 * scale)
    np.testing.assert_allclose(lowered, np.einsum('lkij->ijlk', lowered), rtol=0, atol=1e-10 * scale)


@pytest.mark.parametrize('point', POINTS)
def test_hyperbolic_space(hyperbolic_params: GabcParams, point: Sequence[float]) -> None:
    """Test that the a = b = 0 member has constant sectional curvature -2, vanishing covariant derivative of the
    Riemann tensor, and the corresponding Einstein constant and invariants.
    """
    g = gabc_metric(hyperbolic_params)
    constant, deviation = constant_curvature_residual(g, point)
    np.testing.assert_allclose(constant, -2, rtol=0, atol=1e-10)
    np.testing.assert_allclose(deviation, 0, rtol=0, atol=1e-10)
    np.testing.assert_allclose(covariant_derivative_riemann(g, point), 0, rtol=0, atol=1e-9)
    einstein_constant, einstein_deviation = einstein_residual(g, point)
    np.testing.assert_allclose(einstein_constant, -6, rtol=0, atol=1e-10)
    np.testing.assert_allclose(einstein_deviation, 0, rtol=0, atol=1e-10)
    np.testing.assert_allclose(reduced_scalar_curvature(g, point), hyperbolic_params.nu, rtol=0, atol=1e-10)
    np.testing.assert_allclose(curvature_norm(g, point), 24, rtol=0, atol=1e-9)


@pytest.mark.parametrize('params', [
    pytest.param(GabcParams(0, 1, 1, -1), id="universal hypermultiplet"),
    pytest.param(GabcParams(1, 1, 1, -1), id="Pedersen"),
    pytest.param(GabcParams(-1, 1, 1, -1), id="u(1,1)"),
    pytest.param(GabcParams(0, 1, 1, -1).scale(2), id="rescaled"),
])
@pytest.mark.parametrize('point', POINTS)
def test_family_invariants(params: GabcParams, point: Sequence[float]) -> None:
    """Test the Einstein condition, the scalar curvature 12 nu, and the closed form of the curvature norm."""
    if not params.chart.contains(point):
        return pytest.skip("The point is outside of the admissible domain.")
    g = gabc_metric(params)
    constant, deviation = einstein_residual(g, point)
    np.testing.assert_allclose(constant, 3 * params.nu, rtol=1e-9, atol=0)
    np.testing.assert_allclose(deviation, 0, rtol=0, atol=1e-8)
    np.testing.assert_allclose(scalar_curvature(g, point), 12 * params.nu, rtol=1e-9, atol=0)
    np.testing.assert_allclose(curvature_norm(g, point), curvature_norm_formula(params, point[0]), rtol=1e-8, atol=0)
    np.testing.assert_allclose(np.einsum('ikij->jk', riemann(g, point)), ricci(g, point), rtol=0, atol=0)


def test_calibration_of_curvature_norm() -> None:
    """Test that calibrating on b = 0 members reproduces the frozen scale of the curvature norm."""
    for params in [GabcParams(1, 0, 1, -1), GabcParams(-1, 0, 1, -1), GabcParams(0, 0, 1, -1)]:
        np.testing.assert_allclose(
            calibration_constant(params, (0.8, 0.1, 0.2, 0.0)), CURVATURE_NORM_SCALE, rtol=1e-9, atol=0
        )
    with pytest.raises(ValueError):
        calibration_constant(GabcParams(0, 1, 1, -1), (0.8, 0.1, 0.2, 0.0))


def test_signature_and_frames(uhm_metric: MetricField) -> None:
    """Test that the metric is positive definite and that the orthonormal frame diagonalizes it."""
    point = (1.2, 0.3, 0.1, -0.4)
    assert metric_signature(uhm_metric, point) == (4, 0)
    metric = uhm_metric.value(point)
    np.testing.assert_allclose(frame_components(metric, metric, 'll'), np.eye(4), rtol=0, atol=1e-12)


def test_points_outside_the_domain(uhm_metric: MetricField) -> None:
    """Test that curvature at an inadmissible point raises a domain error."""
    with pytest.raises(DomainError):
        riemann(uhm_metric, (-0.5, 0, 0, 0))
    with pytest.raises(DomainError):
        scalar_curvature(uhm_metric, (0.5, 0, 0, 0, 0))


def test_curvature_norm_of_universal_hypermultiplet(uhm_params: GabcParams, uhm_metric: MetricField) -> None:
    """Test the curvature norm of the one-loop deformed universal hypermultiplet at rho = 1 against its exact value."""
    expected = 24 * 730 / 729
    np.testing.assert_allclose(curvature_norm_formula(uhm_params, 1.0), expected, rtol=1e-14, atol=0)
    np.testing.assert_allclose(curvature_norm(uhm_metric, (1.0, 0.1, 0.2, 0.3)), expected, rtol=1e-8, atol=0)
