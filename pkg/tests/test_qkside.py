"""Tests of the quaternionic Kähler family, its Przanowski-Tod views, symmetries, and coordinate changes."""

from typing import Sequence

import numpy as np
import pytest
import sympy as sp

from qkgeo import (
    GabcParams, PTChart, TodaSolution, available_cases, case_transform, classify_algebra, gabc_metric,
    gauge_transform, hermitian_pair, killing_fields, pt_metric, singularity_distance, u_family
)
from qkgeo.configurations.sampling import SamplePlan
from qkgeo.exceptions import CasePreconditionError, NotApplicableError, SignatureError
from qkgeo.hkside.boyer_finley import X, Y
from qkgeo.qkside.cases import CASES
from qkgeo.qkside.family import (
    cohomogeneity_monotonicity, liouville_general, liouville_residual, scalar_curvature_sign_residual, u_expression
)
from qkgeo.qkside.hermitian import (
    hermitian_residuals, lee_closed_residual, nijenhuis_residual, orientation, orientation_residual
)
from qkgeo.qkside.singularity import singularity_root
from qkgeo.tensorlab import calculus
from qkgeo.tensorlab.fields import scalar


# representative parameters of each case
CASE_PARAMETERS = [
    pytest.param('1', (0, 0, 1, -1), id="1"),
    pytest.param('2', (0, 1, 1, -1), id="2"),
    pytest.param('3', (1, 1, 1, -1), id="3"),
    pytest.param('4+', (1, 0, 1, -1), id="4+"),
    pytest.param('4-', (1, 0, -1, 1), id="4-"),
    pytest.param('5', (1, -1, 1, -1), id="5"),
    pytest.param('6', (1, -1, 0, 1), id="6"),
    pytest.param('7', (-1, -1, 1, -1), id="7"),
    pytest.param('8', (-1, 0, 1, -1), id="8"),
    pytest.param('9', (-1, 1, 1, -1), id="9"),
    pytest.param('10', (-1, 1, 1, -1), id="10"),
]


def closed_form_chart(params: GabcParams) -> PTChart:
    """Przanowski-Tod view of a family member with the one-form declared in closed form."""
    K, b, D = params.K, params.b, params.D
    return PTChart(u_family(params), theta=[0, -K * b * Y / D, K * b * X / D, 0])


def test_parameter_validation() -> None:
    """Test that invalid parameters and empty domains are rejected."""
    with pytest.raises(ValueError):
        GabcParams(0, 1, 1, 0)
    with pytest.raises(ValueError):
        GabcParams(np.nan, 1, 1, -1)
    with pytest.raises(ValueError):
        GabcParams(0, 1, 1, 1)
    params = GabcParams(1, 1, 1, -1)
    assert str(params)
    np.testing.assert_allclose(params.k, -1 + 4, rtol=0, atol=0)
    with pytest.raises(ValueError):
        GabcParams(1, 0, 1, -1).k
    assert GabcParams(0, 1, 0, -1).locally_symmetric
    assert not params.locally_symmetric


@pytest.mark.parametrize('params', [
    pytest.param(GabcParams(0, 1, 1, -1), id="universal hypermultiplet"),
    pytest.param(GabcParams(1, 1, 1, -1), id="Pedersen"),
    pytest.param(GabcParams(1, 0, 1, -1), id="b = 0"),
])
def test_przanowski_tod_view(params: GabcParams) -> None:
    """Test that the Przanowski-Tod metric with the closed-form one-form is the family member, and that the one-form
    has the prescribed exterior derivative.
    """
    chart = closed_form_chart(params)
    points = SamplePlan(size=3, specification_options={'seed': 1}).sample(chart.chart)
    g = gabc_metric(params)
    for point in points:
        np.testing.assert_allclose(chart.g.value(point), g.value(point), rtol=1e-12, atol=1e-14)
        assert chart.theta_residual(point).max_abs < 1e-10
        assert chart.flux_closure(point) < 1e-10
        coframe = chart.coframe().value(point)
        np.testing.assert_allclose(coframe.T @ coframe, g.value(point), rtol=1e-12, atol=1e-14)


def test_integrated_one_form(pt_chart: PTChart) -> None:
    """Test that the one-form integrated by quadrature has the prescribed exterior derivative."""
    assert str(pt_chart)
    assert pt_chart.base is not None
    for point in SamplePlan(size=3, specification_options={'seed': 2}).sample(pt_chart.chart):
        assert pt_chart.theta_residual(point).max_abs < 1e-8
    with pytest.raises(ValueError):
        PTChart(pt_chart.solution, nodes=1)
    point = (0.9, 0.3, -0.4, 0.1)
    np.testing.assert_allclose(pt_metric(pt_chart.solution).g.value(point), pt_chart.g.value(point), rtol=1e-12, atol=0)


def test_nonpositive_potential() -> None:
    """Test that solutions with K(rho u_rho - 2) < 0 give no Przanowski-Tod metric."""
    with pytest.raises(SignatureError):
        PTChart(TodaSolution('log(rho)', 1))


@pytest.mark.parametrize('params', [
    pytest.param(GabcParams(0, 1, 1, -1), id="universal hypermultiplet"),
    pytest.param(GabcParams(-1, 1, 1, -1), id="u(1,1)"),
])
def test_hermitian_structures(params: GabcParams) -> None:
    r"""Test that J_1 and J~_1 are orthogonal almost complex structures with opposite orientations and that J~_1 is
    integrable with a closed Lee form.
    """
    chart = closed_form_chart(params)
    J1, J1_tilde = hermitian_pair(chart)
    for point in SamplePlan(size=2, specification_options={'seed': 3}).sample(chart.chart):
        for J in [J1, J1_tilde]:
            for key, residual in hermitian_residuals(chart, J, point).items():
                assert residual.max_abs < 1e-10, key
        assert nijenhuis_residual(chart, J1_tilde, point).max_abs < 1e-8
        assert lee_closed_residual(chart, J1_tilde, point).max_abs < 1e-8
        sigma = calculus.fundamental_form(chart.g, J1_tilde)
        lee = calculus.lee_form(chart.g, J1_tilde)
        difference = calculus.exterior_derivative(sigma).value(point) - calculus.wedge(lee, sigma).value(point)
        np.testing.assert_allclose(difference, 0, rtol=0, atol=1e-8)
        assert orientation(chart, J1, point) == -orientation(chart, J1_tilde, point)
        assert orientation_residual(chart, point) == 0


@pytest.mark.parametrize(['params', 'algebra'], [
    pytest.param(GabcParams(0, 1, 1, -1), 'o2_heis3', id="a = 0"),
    pytest.param(GabcParams(1, 1, 1, -1), 'u2', id="a > 0"),
    pytest.param(GabcParams(-1, 1, 1, -1), 'u11', id="a < 0"),
])
def test_killing_fields(params: GabcParams, algebra: str) -> None:
    """Test that the four fields are Killing, span three dimensions, and close on the expected algebra."""
    catalog = killing_fields(params)
    assert catalog.expected_algebra == algebra
    points = SamplePlan(size=6, specification_options={'seed': 4}).sample(params.chart)
    for point in points[:2]:
        assert catalog.killing_residual(point).max_abs < 1e-10
        assert catalog.span_rank(point) == 3
    assert classify_algebra(catalog, points) == algebra


def test_degenerate_killing_fields() -> None:
    """Test that b = 0 leaves the fields dependent and the algebra unclassified."""
    catalog = killing_fields(GabcParams(1, 0, 1, -1))
    assert catalog.expected_algebra is None
    assert catalog.killing_residual((0.8, 0.1, 0.2, 0.3)).max_abs < 1e-10
    assert catalog.span_rank((0.8, 0.1, 0.2, 0.3)) == 2
    with pytest.raises(ValueError):
        classify_algebra(catalog)


@pytest.mark.parametrize(['case', 'values'], CASE_PARAMETERS)
def test_case_transforms(case: str, values: Sequence[float]) -> None:
    """Test that each target metric pulls back to the family member and that the coordinate change inverts."""
    transform = case_transform(case, GabcParams(*values))
    assert str(transform)
    assert case in available_cases(GabcParams(*values))
    for point in SamplePlan(size=4, specification_options={'seed': 5}).sample(transform.params.chart):
        assert transform.pullback_residual(point).max_abs < 1e-8
        assert transform.roundtrip_residual(point) < 1e-10


def test_case_preconditions() -> None:
    """Test that cases whose preconditions fail are rejected and that unknown cases are errors."""
    assert CASES[0] == '1'
    with pytest.raises(CasePreconditionError):
        case_transform('3', GabcParams(0, 1, 1, -1))
    with pytest.raises(CasePreconditionError):
        case_transform('1', GabcParams(1, 1, 1, -1))
    with pytest.raises(ValueError):
        case_transform('11', GabcParams(1, 1, 1, -1))
    assert available_cases(GabcParams(0, 0, 1, -1)) == ['1']
    assert available_cases(GabcParams(1, 0, 1, -1)) == ['4+']
    assert available_cases(GabcParams(1, -1, 1, -1)) == ['5', '6']


def test_singularity_distance() -> None:
    """Test that the distance to the curvature singularity is finite, decreases toward it, and is only defined when the
    singularity bounds the domain.
    """
    params = GabcParams(1, -1, 1, -1)
    assert singularity_root(params) == 2
    far, far_error = singularity_distance(params, 0.5)
    near, near_error = singularity_distance(params, 1.5)
    assert np.isfinite(far) and np.isfinite(near)
    assert far > near > 0
    assert far_error < 1e-6 and near_error < 1e-6
    with pytest.raises(NotApplicableError):
        singularity_distance(params, 2.5)
    with pytest.raises(NotApplicableError):
        singularity_root(GabcParams(0, 1, 1, -1))
    with pytest.raises(NotApplicableError):
        singularity_root(GabcParams(1, 0, 1, -1))


def test_monotonicity_of_curvature_norm() -> None:
    """Test that the curvature norm separates hypersurfaces unless it is constant."""
    strict, change = cohomogeneity_monotonicity(GabcParams(1, -1, 1, -1), (0.2, 1.9))
    assert strict and change > 0
    strict, _ = cohomogeneity_monotonicity(GabcParams(1, 0, 1, -1), (0.2, 1.9))
    assert not strict
    with pytest.raises(ValueError):
        cohomogeneity_monotonicity(GabcParams(1, -1, 1, -1), (2.5, 3.0))


def test_scalar_curvature_sign(pedersen_params: GabcParams) -> None:
    """Test that the sign of the scalar curvature matches that of -(b rho + 2c)."""
    assert scalar_curvature_sign_residual(pedersen_params, (0.8, 0.1, -0.2, 0.3)) == 0


def test_gauge_transforms(pedersen_params: GabcParams) -> None:
    """Test that holomorphic changes of coordinates preserve the Toda equation."""
    point = (0.9, 0.3, -0.4, 0.1)
    rescaled = TodaSolution(gauge_transform(u_expression(pedersen_params), '2*zeta'), -1)
    assert abs(rescaled.toda_residual(point)) < 1e-10
    exponential = TodaSolution(gauge_transform('log(rho + 1)', 'exp(zeta)'), -1)
    assert abs(exponential.toda_residual(point)) < 1e-10
    np.testing.assert_allclose(exponential.u.value(point), np.log(1.9) + 0.6, rtol=1e-12, atol=0)
    with pytest.raises(ValueError):
        gauge_transform('log(rho)', 'zeta * rho')


@pytest.mark.parametrize('f', [
    pytest.param('zeta/2', id="standard"),
    pytest.param('zeta**2 + 1', id="quadratic"),
])
def test_liouville_equation(pedersen_params: GabcParams, f: str) -> None:
    """Test that u - ln Q and the general solutions built from holomorphic functions solve the Liouville equation."""
    chart = pedersen_params.chart
    point = (0.9, 0.3, 0.4, 0.1)
    G = scalar(chart, liouville_general(pedersen_params.a, f))
    assert abs(liouville_residual(G, pedersen_params.a, point)) < 1e-10
    family = scalar(chart, u_expression(pedersen_params) - sp.log(pedersen_params.Q))
    assert abs(liouville_residual(family, pedersen_params.a, point)) < 1e-12
