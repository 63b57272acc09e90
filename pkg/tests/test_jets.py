"""Tests of truncated Taylor arithmetic."""

import math

import numpy as np
import pytest

from qkgeo.exceptions import DegenerateMetricError, JetOrderError
from qkgeo.tensorlab import jets
from qkgeo.tensorlab.jets import Jet


@pytest.mark.parametrize(['name', 'function', 'derivatives', 'value'], [
    pytest.param('exp', jets.exp, lambda v: [math.exp(v)] * 4, 0.3, id="exp"),
    pytest.param('log', jets.log, lambda v: [math.log(v), 1 / v, -1 / v**2, 2 / v**3], 1.7, id="log"),
    pytest.param(
        'sqrt', jets.sqrt, lambda v: [v**0.5, 0.5 * v**-0.5, -0.25 * v**-1.5, 0.375 * v**-2.5], 2.2, id="sqrt"
    ),
    pytest.param('sin', jets.sin, lambda v: [math.sin(v), math.cos(v), -math.sin(v), -math.cos(v)], 0.4, id="sin"),
    pytest.param('cos', jets.cos, lambda v: [math.cos(v), -math.sin(v), -math.cos(v), math.sin(v)], 0.4, id="cos"),
    pytest.param('sinh', jets.sinh, lambda v: [math.sinh(v), math.cosh(v), math.sinh(v), math.cosh(v)], 0.8, id="sinh"),
    pytest.param(
        'atan', jets.atan, lambda v: [math.atan(v), 1 / (1 + v**2), -2 * v / (1 + v**2)**2,
                                      (6 * v**2 - 2) / (1 + v**2)**3], 0.6, id="atan"
    ),
])
def test_univariate_derivatives(name: str, function: object, derivatives: object, value: float) -> None:
    """Test that elementary functions of a coordinate jet carry their known derivatives up to third order."""
    jet = function(Jet.variable(value, 0, 1, 3))
    expected = derivatives(value)
    computed = [jet.value, jet.first[0], jet.second[0, 0], jet.third[0, 0, 0]]
    np.testing.assert_allclose(computed, expected, rtol=1e-12, atol=1e-14, err_msg=name)


@pytest.mark.parametrize('point', [
    pytest.param([0.3, 1.2], id="positive quadrant"),
    pytest.param([-0.7, 0.5], id="negative abscissa"),
])
def test_product_rule_against_finite_differences(point: list, finite_differences: object) -> None:
    """Test that gradients and Hessians of a composite expression agree with central finite differences."""
    def compute(values: np.ndarray, order: int = 0) -> Jet:
        x, y = jets.coordinates(values, order)
        return x * jets.exp(y) / (1 + x**2) + jets.sin(x * y)

    jet = compute(point, 2)
    gradient = finite_differences(lambda p: compute(p).value, point)
    hessian = finite_differences(lambda p: compute(p, 1).first, point)
    np.testing.assert_allclose(jet.first, gradient, rtol=0, atol=1e-8)
    np.testing.assert_allclose(jet.second, hessian, rtol=0, atol=1e-6)
    np.testing.assert_allclose(jet.second, jet.second.T, rtol=0, atol=0)


def test_third_derivatives_are_symmetric() -> None:
    """Test that third derivatives of a product of coordinate functions are totally symmetric and exact."""
    x, y, z = jets.coordinates([0.5, -1.5, 2.0], 3)
    jet = x * y * z + x**3
    third = jet.third
    for permutation in ['ikj', 'jik', 'jki', 'kij', 'kji']:
        np.testing.assert_allclose(third, np.einsum(f'ijk->{permutation}', third), rtol=0, atol=0)
    assert third[0, 1, 2] == 1
    assert third[0, 0, 0] == 6


def test_mixed_numbers_and_arrays() -> None:
    """Test that jets combine with numbers and broadcast over NumPy arrays."""
    x, y = jets.coordinates([2.0, 3.0], 1)
    jet = 3 - x / 4 + 2 ** y
    np.testing.assert_allclose(jet.value, 3 - 0.5 + 8, rtol=0, atol=1e-12)
    np.testing.assert_allclose(jet.first, [-0.25, 8 * math.log(2)], rtol=0, atol=1e-12)
    scaled = x * np.array([1.0, 2.0])
    assert scaled.dtype == object
    np.testing.assert_allclose(jets.values(scaled), [2.0, 4.0], rtol=0, atol=0)


def test_partial_lowers_the_order() -> None:
    """Test that partial derivatives of jets are themselves jets of one lower order."""
    x, y = jets.coordinates([1.0, 2.0], 2)
    jet = x**2 * y
    partial = jet.partial(0)
    assert partial.order == 1
    np.testing.assert_allclose([partial.value, *partial.first], [4.0, 4.0, 2.0], rtol=0, atol=1e-12)
    with pytest.raises(JetOrderError):
        jets.coordinates([1.0, 2.0], 0)[0].partial(0)


@pytest.mark.parametrize('order', [
    pytest.param(-1, id="negative"),
    pytest.param(4, id="above three"),
])
def test_invalid_orders(order: int) -> None:
    """Test that jets of unsupported orders cannot be constructed."""
    with pytest.raises(ValueError):
        jets.coordinates([0.0, 0.0], order)


def test_domain_errors() -> None:
    """Test that elementary functions outside their domains and divisions by zero raise errors."""
    x, = jets.coordinates([0.0], 1)
    with pytest.raises(ZeroDivisionError):
        1 / x
    with pytest.raises(ValueError):
        jets.log(x - 1)
    with pytest.raises(ValueError):
        abs(x)


def test_stack_and_unstack() -> None:
    """Test that stacking keeps derivative axes last and that unstacking restores the jets."""
    x, y = jets.coordinates([0.5, 0.25], 2)
    array = np.array([[x * y, x], [y, x + y]], dtype=object)
    stacked = jets.stack(array)
    assert [s.shape for s in stacked] == [(2, 2), (2, 2, 2), (2, 2, 2, 2)]
    np.testing.assert_allclose(stacked[1][0, 0], [0.25, 0.5], rtol=0, atol=0)
    restored = jets.stack(jets.unstack(stacked))
    for original, copied in zip(stacked, restored):
        np.testing.assert_allclose(original, copied, rtol=0, atol=0)
    with pytest.raises(JetOrderError):
        jets.stack(array, 3)


def test_inverse_derivatives(finite_differences: object) -> None:
    """Test that derivatives of the inverse of a matrix of jets agree with finite differences of the inverse."""
    def matrix(point: np.ndarray, order: int) -> np.ndarray:
        x, y = jets.coordinates(point, order)
        return np.array([[2 + x**2, x * y], [x * y, 1 + jets.exp(y)]], dtype=object)

    point = [0.4, -0.3]
    inverse = jets.invert(matrix(point, 3))
    np.testing.assert_allclose(jets.values(inverse), np.linalg.inv(jets.values(matrix(point, 0))), rtol=0, atol=1e-12)
    gradient = finite_differences(lambda p: np.linalg.inv(jets.values(matrix(p, 0))), point)
    np.testing.assert_allclose(jets.stack(inverse, 1)[1], gradient, rtol=0, atol=1e-8)
    hessian = finite_differences(lambda p: jets.stack(jets.invert(matrix(p, 1)), 1)[1], point)
    np.testing.assert_allclose(jets.stack(inverse, 2)[2], hessian, rtol=0, atol=1e-6)


def test_singular_inverse() -> None:
    """Test that inverting a singular matrix of jets raises an error."""
    x, y = jets.coordinates([1.0, 1.0], 1)
    with pytest.raises(DegenerateMetricError):
        jets.invert(np.array([[x, y], [x, y]], dtype=object))
