r"""The elementary deformation of a hyper-Kähler metric along a rotating Killing field.

The deformed metric is

.. math::

   g_H = \frac{1}{f_Z}g_N|_{(\mathbb{H}Z)^\perp} + \frac{f_H}{f_Z^2}g_N|_{\mathbb{H}Z},

where :math:`\mathbb{H}Z` is spanned by :math:`Z, I_1Z, I_2Z, I_3Z`. In four dimensions the span is everything and the
deformation is the conformal rescaling :math:`g_H = (f_H/f_Z^2)g_N`.
"""

from typing import Any, Sequence, Tuple

import numpy as np

from .rotating import RotatingKillingData, hyperkahler_forms
from ..exceptions import RankError, UnsupportedDimensionError
from ..tensorlab import calculus
from ..tensorlab.curvature import metric_signature
from ..tensorlab.fields import MetricField, check_point
from ..tensorlab.jets import Jet
from ..utilities.algebra import compute_condition_number


def quaternionic_gram(data: RotatingKillingData, point: Sequence[float]) -> Any:
    """Compute the Gram matrix of :math:`Z` and its images under the available complex structures at a point."""
    Z = data.Z.value(point)
    vectors = np.column_stack([Z] + [I.value(point) @ Z for I in data.structures])
    return vectors.T @ data.g.value(point) @ vectors


def elementary_deformation(data: RotatingKillingData) -> MetricField:
    """Construct the elementary deformation :math:`g_H`, which raises an error wherever the quaternionic span of
    :math:`Z` is degenerate.
    """
    g = data.g
    if not data.quaternionic:
        if data.dimensions != 4:
            raise UnsupportedDimensionError
        return calculus.combine(MetricField, [g, data.f_Z, data.f_H], lambda m, f, h: h / f**2 * m, label='g_H')

    alphas = hyperkahler_forms(data)
    fields = [g, data.f_Z, data.f_H, data.norm] + alphas

    def function(coordinates: Sequence[Jet]) -> Any:
        point = [float(c) for c in coordinates]
        if not compute_condition_number(quaternionic_gram(data, point)) < 1 / np.finfo(np.float64).eps:
            raise RankError(point)
        m, f, h, norm, *arrays = (field.evaluate(coordinates) for field in fields)
        projected = sum(np.multiply.outer(a, a) for a in arrays) / norm
        return m / f + (h / f**2 - 1 / f) * projected

    depth = max(field.depth for field in fields)
    return MetricField.derived(g.chart, g.shape, function, label='g_H', depth=depth)


def deformation_signature(data: RotatingKillingData, point: Sequence[float]) -> Tuple[int, int]:
    """Count the positive and negative eigenvalues of the elementary deformation at a point."""
    return metric_signature(elementary_deformation(data), check_point(data.g.chart, point))


def conformal_factor(data: RotatingKillingData, point: Sequence[float]) -> float:
    r"""Evaluate :math:`f_H/f_Z^2`, the factor of the deformation on :math:`\mathbb{H}Z`."""
    return float(data.f_H.value(point) / data.f_Z.value(point)**2)
