r"""Tensor calculus on fields.

Each function here composes fields into a new derived field, so results can be evaluated at any admissible point with
:meth:`~qkgeo.tensorlab.fields.Field.value` and differentiated further. For example, :math:`d(d\omega)` is simply
``exterior_derivative(exterior_derivative(omega))``, evaluated with jets of order two.
"""

from typing import Any, Callable, Optional, Sequence, Type

import numpy as np

from . import operators
from .fields import (
    EndoField, Field, MetricField, OneForm, PForm, ScalarField, TensorField, VectorField
)


def derive(
        cls: Type[Field], fields: Sequence[Field], operator: Callable[..., Any], shape: Sequence[int], label: str,
        depth: int = 0) -> Any:
    """Compose fields on a common chart with an operator on their jets. The depth counts derivatives taken by the
    operator itself.
    """
    chart = fields[0].chart
    if any(f.chart is not chart for f in fields):
        raise ValueError("Fields must live on the same chart.")

    def function(coordinates: Any) -> Any:
        return operator(*(f.evaluate(coordinates) for f in fields))

    return cls.derived(chart, tuple(shape), function, label=label, depth=max(f.depth for f in fields) + depth)


def form_class(degree: int) -> Type[Field]:
    """Choose the field class of a form of some degree."""
    return ScalarField if degree == 0 else OneForm if degree == 1 else PForm


def exterior_derivative(omega: Field) -> Any:
    """Differentiate a form. Forms of top degree have a vanishing derivative."""
    degree = len(omega.shape) + 1
    n = omega.chart.dimensions
    return derive(form_class(degree), [omega], operators.exterior_derivative, (n,) * degree, f"d({omega.label})", 1)


def wedge(alpha: Field, beta: Field) -> Any:
    """Compute the exterior product of two forms."""
    degree = len(alpha.shape) + len(beta.shape)
    n = alpha.chart.dimensions
    return derive(form_class(degree), [alpha, beta], operators.wedge, (n,) * degree, f"{alpha.label}^{beta.label}")


def interior_product(V: VectorField, omega: Field) -> Any:
    """Contract a vector field into the first slot of a form."""
    degree = len(omega.shape) - 1
    if degree < 0:
        raise ValueError("Functions have no slots to contract.")
    shape = omega.shape[1:]
    return derive(form_class(degree), [V, omega], operators.interior_product, shape, f"i({V.label}){omega.label}")


def lie_bracket(V: VectorField, W: VectorField) -> VectorField:
    """Compute the Lie bracket of two vector fields."""
    return derive(VectorField, [V, W], operators.lie_bracket, V.shape, f"[{V.label}, {W.label}]", 1)


def jacobi_residual(X: VectorField, Y: VectorField, Z: VectorField) -> VectorField:
    """Compute the cyclic sum of nested brackets, which vanishes by the Jacobi identity."""
    return derive(VectorField, [X, Y, Z], operators.jacobi, X.shape, "Jacobi sum", 2)


def lie_derivative_metric(g: Field, V: VectorField) -> TensorField:
    """Compute the Lie derivative of a symmetric tensor along a vector field."""
    return derive(TensorField, [g, V], lambda m, v: operators.lie_derivative_metric(v, m), g.shape, f"L({V.label})g", 1)


def lie_derivative_endo(J: EndoField, V: VectorField) -> EndoField:
    """Compute the Lie derivative of an endomorphism field along a vector field."""
    return derive(EndoField, [J, V], lambda e, v: operators.lie_derivative_endo(v, e), J.shape, f"L({V.label})J", 1)


def lie_derivative_form(omega: Field, V: VectorField) -> Any:
    """Compute the Lie derivative of a form along a vector field."""
    cls = form_class(len(omega.shape))
    return derive(cls, [omega, V], lambda w, v: operators.lie_derivative_form(v, w), omega.shape, f"L({V.label})w", 1)


def nijenhuis(J: EndoField) -> TensorField:
    """Compute the Nijenhuis tensor ``N[i, j, k]`` of an almost complex structure, which is checked along the way."""
    n = J.chart.dimensions
    return derive(TensorField, [J], operators.nijenhuis, (n, n, n), f"N({J.label})", 1)


def fundamental_form(g: MetricField, J: EndoField) -> PForm:
    r"""Compute the two-form :math:`\sigma = g(J\cdot, \cdot)`."""
    return derive(PForm, [g, J], operators.fundamental_form, g.shape, f"g({J.label}, )")


def endomorphism_of(g: MetricField, sigma: Field) -> EndoField:
    r"""Recover the endomorphism :math:`J` with :math:`g(J\cdot, \cdot) = \sigma`."""
    return derive(EndoField, [g, sigma], operators.endomorphism_of, g.shape, f"g^-1 {sigma.label}")


def lee_form(g: MetricField, J: EndoField) -> OneForm:
    r"""Compute the Lee form :math:`\theta` defined by :math:`d\sigma = \theta \wedge \sigma` in four dimensions."""
    return derive(OneForm, [fundamental_form(g, J)], operators.lee_form, (g.chart.dimensions,), f"theta({J.label})", 1)


def lee_form_differential(g: MetricField, J: EndoField) -> PForm:
    r"""Compute :math:`d\theta`, which vanishes exactly when the structure is locally conformally Kähler."""
    return exterior_derivative(lee_form(g, J))


def covariant_derivative(g: MetricField, V: VectorField) -> EndoField:
    r"""Compute :math:`\nabla V` as an endomorphism field, :math:`(\nabla V)^i_j = (\nabla_{\partial_j}V)^i`."""
    return derive(EndoField, [g, V], operators.covariant_derivative_vector, g.shape, f"nabla {V.label}", 1)


def lower(g: MetricField, V: VectorField) -> OneForm:
    """Lower the index of a vector field."""
    return derive(OneForm, [g, V], operators.lower, V.shape, f"g({V.label}, )")


def apply(E: EndoField, V: VectorField) -> VectorField:
    """Apply an endomorphism field to a vector field."""
    return derive(VectorField, [E, V], operators.apply, V.shape, f"{E.label} {V.label}")


def compose(A: EndoField, B: EndoField) -> EndoField:
    """Compose endomorphism fields, applying the second one first."""
    return derive(EndoField, [A, B], operators.compose, A.shape, f"{A.label} {B.label}")


def pairing(g: Field, V: VectorField, W: VectorField) -> ScalarField:
    """Evaluate a bilinear form on two vector fields."""
    return derive(ScalarField, [g, V, W], operators.pairing, (), f"g({V.label}, {W.label})")


def combine(
        cls: Type[Field], fields: Sequence[Field], function: Callable[..., Any], shape: Optional[Sequence[int]] = None,
        label: str = '') -> Any:
    """Combine fields pointwise with a function of their jet arrays. The shape defaults to that of the first field."""
    shape = fields[0].shape if shape is None else shape
    return derive(cls, fields, lambda *arrays: np.asarray(function(*arrays), dtype=object), shape, label)
