"""Tests of hyper-Kähler models, rotating Killing fields, and the elementary deformation."""

from typing import Callable, Sequence

import numpy as np
import pytest

from qkgeo import BoyerFinleyModel, GabcParams, RigidCmapModel, TodaSolution, highdim_condition, u_family
from qkgeo.exceptions import (
    CriterionError, InvalidSolutionError, SignatureError, UnsupportedDimensionError
)
from qkgeo.hkside.boyer_finley import RHO, X, boyer_finley_metric, constant_solution, omega1_bf
from qkgeo.hkside.deformation import conformal_factor, deformation_signature, elementary_deformation
from qkgeo.hkside.rotating import (
    RotatingKillingData, conformal_relation_residual, integrability_criterion, kahler_residual, lemma_chain,
    phi_by_quadrature, prop_IH_checks, psi_orbit_residual, require_criterion, rotating_data, rotating_residuals,
    sigma_tilde_contraction, sigma_tilde_cross_check, xi_formula, xi_identity_residual
)
from qkgeo.tensorlab.curvature import covariant_derivative_tensor, einstein_residual, metric_signature
from qkgeo.utilities.basics import Array


# points inside the chart of the Boyer-Finley model of the deformed universal hypermultiplet
BF_POINTS = [
    pytest.param((0.8, 0.1, -0.2, 0.3), id="near axis"),
    pytest.param((1.7, -0.5, 0.4, -0.6), id="off axis"),
]


@pytest.fixture(scope='module')
def bf_data(bf_model: BoyerFinleyModel) -> RotatingKillingData:
    """Hamiltonian data of the Boyer-Finley model."""
    return rotating_data(bf_model.g, bf_model.Z, bf_model.f_Z, bf_model.omega1)


@pytest.fixture(scope='module')
def perturbed_data(uhm_params: GabcParams) -> RotatingKillingData:
    """Hamiltonian data of the Boyer-Finley metric of a function that does not solve the Toda equation."""
    solution = u_family(uhm_params)
    model = BoyerFinleyModel(solution.replace(solution.expression + RHO * X / 10), validate=False)
    return rotating_data(model.g, model.Z, model.f_Z, model.omega1)


@pytest.fixture(scope='module')
def cmap_points(cmap_model: RigidCmapModel, sample_points: Callable) -> Array:
    """A few points on the chart of the rigid c-map model."""
    return sample_points(cmap_model.g, 3)


def test_toda_solutions(uhm_params: GabcParams) -> None:
    """Test that family functions solve the Toda equation and that invalid declarations are rejected."""
    solution = u_family(uhm_params)
    assert solution.residual is not None and solution.residual < 1e-10
    assert abs(solution.toda_residual((0.8, 0.1, -0.2, 0.3))) < 1e-10
    assert str(solution)
    with pytest.raises(InvalidSolutionError):
        solution.replace(solution.expression + RHO * X / 10, validate=True)
    with pytest.raises(ValueError):
        TodaSolution('rho * t', -1)
    with pytest.raises(ValueError):
        TodaSolution('log(rho)', 0)


def test_constant_solution() -> None:
    """Test that constant functions solve the Toda equation but give no Boyer-Finley metric."""
    solution = constant_solution(2.0)
    assert solution.toda_residual((1.0, 0.2, 0.3, 0.0)) == 0
    with pytest.raises(SignatureError):
        BoyerFinleyModel(solution)
    with pytest.raises(ValueError):
        constant_solution(-1.0)


@pytest.mark.parametrize('point', BF_POINTS)
def test_boyer_finley_model(bf_model: BoyerFinleyModel, point: Sequence[float]) -> None:
    """Test that the Boyer-Finley metric is Ricci-flat and definite, and that f_Z is the Hamiltonian of Z."""
    assert bf_model.hamiltonian_residual(point) < 1e-12
    constant, deviation = einstein_residual(bf_model.g, point)
    np.testing.assert_allclose(constant, 0, rtol=0, atol=1e-9)
    np.testing.assert_allclose(deviation, 0, rtol=0, atol=1e-9)
    assert metric_signature(bf_model.g, point) == (0, 4)
    I1 = bf_model.I1.value(point)
    np.testing.assert_allclose(I1 @ I1, -np.eye(4), rtol=0, atol=1e-12)


def test_boyer_finley_constructors(bf_model: BoyerFinleyModel, uhm_params: GabcParams) -> None:
    """Test that the standalone constructors agree with the model and that the Kähler form is parallel."""
    point = (1.1, 0.2, -0.3, 0.4)
    solution = u_family(uhm_params)
    np.testing.assert_allclose(boyer_finley_metric(solution).value(point), bf_model.g.value(point), rtol=0, atol=0)
    np.testing.assert_allclose(omega1_bf(solution).value(point), bf_model.omega1.value(point), rtol=0, atol=0)
    np.testing.assert_allclose(
        covariant_derivative_tensor(bf_model.g, bf_model.omega1, 'll', point), 0, rtol=0, atol=1e-9
    )
    np.testing.assert_allclose(covariant_derivative_tensor(bf_model.g, bf_model.I1, 'ul', point), 0, rtol=0, atol=1e-9)


@pytest.mark.parametrize('point', BF_POINTS)
def test_rotating_killing_field(bf_data: RotatingKillingData, point: Sequence[float]) -> None:
    """Test that Z is a rotating Killing field whose norm satisfies the integrability criterion."""
    for key, residual in rotating_residuals(bf_data, point).items():
        assert residual.max_abs < 1e-10, key
    assert integrability_criterion(bf_data, point).max_abs < 1e-10
    for key, residual in lemma_chain(bf_data, point).items():
        assert residual.max_abs < 1e-10, key
    require_criterion(bf_data, point)
    assert psi_orbit_residual(bf_data, point) < 1e-10


def test_criterion_fails_on_perturbed_data(perturbed_data: RotatingKillingData) -> None:
    """Test that the criterion and the equivalent conditions fail for a perturbed function."""
    point = (1.2, 0.5, -0.3, 0.2)
    assert integrability_criterion(perturbed_data, point).max_abs > 1e-3
    chain = lemma_chain(perturbed_data, point)
    assert chain['proportionality'].max_abs > 1e-3
    assert chain['wedge'].max_abs > 1e-3
    with pytest.raises(CriterionError):
        require_criterion(perturbed_data, point)


@pytest.mark.parametrize('point', BF_POINTS)
def test_conformal_kahler_structure(bf_data: RotatingKillingData, point: Sequence[float]) -> None:
    """Test the contraction of sigma~ with Z, its relation to omega_H, and the Kähler condition before and after
    integrating xi.
    """
    assert sigma_tilde_contraction(bf_data, point).max_abs < 1e-10
    assert conformal_relation_residual(bf_data, point).max_abs < 1e-9
    assert np.isfinite(xi_formula(bf_data, point))
    assert xi_identity_residual(bf_data, point).max_abs < 1e-8
    phi = phi_by_quadrature(bf_data, (0.6, 0.0, 0.0, 0.0))
    assert abs(phi.value((0.6, 0.1, -0.2, 0.3))) < 1e-14
    assert kahler_residual(bf_data, phi, point).max_abs < 1e-7


@pytest.mark.parametrize('point', BF_POINTS)
def test_conformal_deformation(bf_data: RotatingKillingData, point: Sequence[float]) -> None:
    """Test that the four-dimensional deformation rescales the metric by f_H / f_Z^2 into a definite metric."""
    deformed = elementary_deformation(bf_data).value(point)
    factor = conformal_factor(bf_data, point)
    np.testing.assert_allclose(deformed, factor * bf_data.g.value(point), rtol=1e-12, atol=0)
    assert deformation_signature(bf_data, point) == (4, 0)


def test_cmap_quaternionic_structure(cmap_model: RigidCmapModel, cmap_points: Array) -> None:
    """Test that the flat structures satisfy the quaternion relations and that Z rotates them."""
    assert str(cmap_model)
    assert metric_signature(cmap_model.g, cmap_points[0]) == (4, 4)
    for point in cmap_points:
        for key, value in cmap_model.quaternion_residuals(point).items():
            assert value < 1e-12, key
        residuals = rotating_residuals(cmap_model.data, point)
        assert set(residuals) == {'killing', 'rotation_I1', 'hamiltonian', 'rotation_I2', 'rotation_I3'}
        assert all(r.max_abs < 1e-12 for r in residuals.values())
        assert cmap_model.block_structure_residual(point).max_abs < 1e-12


def test_cmap_endomorphism_of_hamiltonian(cmap_model: RigidCmapModel, cmap_points: Array) -> None:
    """Test that I_H is compatible with omega_H and commutes with the complex structures."""
    for point in cmap_points:
        for key, residual in prop_IH_checks(cmap_model.data, point).items():
            assert residual.max_abs < 1e-12, key


def test_cmap_sigma_tilde(cmap_model: RigidCmapModel, cmap_points: Array) -> None:
    """Test the closed form of the exterior derivative of sigma~ and its contraction with Z."""
    for point in cmap_points:
        assert sigma_tilde_cross_check(cmap_model.data, point).max_abs < 1e-8
        assert sigma_tilde_contraction(cmap_model.data, point).max_abs < 1e-10


def test_cmap_deformation(cmap_model: RigidCmapModel, cmap_points: Array) -> None:
    """Test that the deformation of the indefinite flat metric is positive definite."""
    assert deformation_signature(cmap_model.data, cmap_points[0]) == (8, 0)
    with pytest.raises(UnsupportedDimensionError):
        phi_by_quadrature(cmap_model.data, cmap_points[0])


def test_highdim_condition(cmap_model: RigidCmapModel, cmap_points: Array) -> None:
    """Test that nabla Z vanishes along the fibres and misses -I_1 / 2 off the quaternionic span by a half."""
    for point in cmap_points:
        residuals = highdim_condition(cmap_model, point)
        assert residuals['vertical'].max_abs < 1e-14
        np.testing.assert_allclose(residuals['deviation'].max_abs, 0.5, rtol=1e-8, atol=0)
    with pytest.raises(ValueError):
        highdim_condition(RigidCmapModel(1), (0.6, -0.4, 0.3, 0.2))
    with pytest.raises(ValueError):
        RigidCmapModel(0)
