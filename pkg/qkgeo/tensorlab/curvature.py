r"""Levi-Civita connections, curvature, and covariant derivatives.

Conventions: :math:`\Gamma` is stored as ``gamma[k, i, j]`` :math:`= \Gamma^k_{ij}`, the Riemann tensor as
``R[l, k, i, j]`` :math:`= R^l_{kij} = (R(\partial_i, \partial_j)\partial_k)^l` with
:math:`R(X, Y) = \nabla_X\nabla_Y - \nabla_Y\nabla_X - \nabla_{[X, Y]}`, and the Ricci tensor as
:math:`\mathrm{Ric}_{jk} = R^i_{kij}`, which is the trace of :math:`W \mapsto R(W, X)Y`. Derivative axes always come
last.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import jets
from .fields import Field, MetricField, Residual, VectorField, check_point
from .. import options
from ..exceptions import DegenerateMetricError, JetOrderError
from ..utilities.algebra import count_signature, gram_schmidt, precisely_compute_eigenvalues
from ..utilities.basics import Array


# the single convention constant relating the full contraction of the Riemann tensor to the curvature norm; it is
# fixed by calibrate_curvature_norm on a locally symmetric member of the family and then frozen here
CURVATURE_NORM_SCALE = 0.25


def metric_stack(g: MetricField, point: Sequence[float], order: int) -> List[Array]:
    """Evaluate a metric and its derivatives up to an order at an admissible point."""
    point = check_point(g.chart, point)
    if order > options.jet_order:
        raise JetOrderError(order, options.jet_order)
    stacked = g.stacked(point, order)
    determinant = np.linalg.det(stacked[0])
    if not np.isfinite(determinant) or abs(determinant) < np.finfo(np.float64).tiny:
        raise DegenerateMetricError(float(determinant))
    return stacked


def christoffel_stack(g_stack: Sequence[Array], order: int = 0) -> List[Array]:
    r"""Compute :math:`\Gamma^k_{ij}` and its derivatives up to an order from a metric stack that carries one more
    derivative.
    """
    if len(g_stack) < order + 2:
        raise JetOrderError(order + 1, len(g_stack) - 1)
    inverse = jets.invert_stacked(g_stack[:order + 1])
    g1 = g_stack[1]
    lower = [0.5 * (np.transpose(g1, (0, 2, 1)) + g1 - np.transpose(g1, (2, 0, 1)))]
    if order >= 1:
        g2 = g_stack[2]
        lower.append(0.5 * (np.transpose(g2, (0, 2, 1, 3)) + g2 - np.transpose(g2, (2, 0, 1, 3))))
    if order >= 2:
        g3 = g_stack[3]
        lower.append(0.5 * (np.transpose(g3, (0, 2, 1, 3, 4)) + g3 - np.transpose(g3, (2, 0, 1, 3, 4))))

    A = inverse
    gamma = [np.einsum('kl,lij->kij', A[0], lower[0])]
    if order >= 1:
        gamma.append(np.einsum('kla,lij->kija', A[1], lower[0]) + np.einsum('kl,lija->kija', A[0], lower[1]))
    if order >= 2:
        gamma.append(
            np.einsum('klab,lij->kijab', A[2], lower[0]) + np.einsum('kla,lijb->kijab', A[1], lower[1]) +
            np.einsum('klb,lija->kijab', A[1], lower[1]) + np.einsum('kl,lijab->kijab', A[0], lower[2])
        )
    return gamma


def riemann_stack(gamma: Sequence[Array], order: int = 0) -> List[Array]:
    """Compute the Riemann tensor and optionally its first derivatives from Christoffel symbols with derivatives."""
    if len(gamma) < order + 2:
        raise JetOrderError(order + 2, len(gamma))
    G, G1 = gamma[0], gamma[1]
    R = (
        np.einsum('ljki->lkij', G1) - np.einsum('likj->lkij', G1) + np.einsum('lim,mjk->lkij', G, G) -
        np.einsum('ljm,mik->lkij', G, G)
    )
    stacked = [R]
    if order >= 1:
        G2 = gamma[2]
        stacked.append(
            np.einsum('ljkia->lkija', G2) - np.einsum('likja->lkija', G2) + np.einsum('lima,mjk->lkija', G1, G) +
            np.einsum('lim,mjka->lkija', G, G1) - np.einsum('ljma,mik->lkija', G1, G) -
            np.einsum('ljm,mika->lkija', G, G1)
        )
    return stacked


def covariant_derivative_values(tensor: Array, derivatives: Array, gamma: Array, kinds: str) -> Array:
    """Covariantly differentiate a tensor with slots of the given kinds (``'u'`` for upper, ``'l'`` for lower) given its
    partial derivatives, appending the direction of differentiation as the last axis.
    """
    if len(kinds) != np.ndim(tensor):
        raise ValueError("There must be one kind per slot of the tensor.")
    result = np.array(derivatives, dtype=np.float64, copy=True)
    last = np.ndim(tensor)
    for slot, kind in enumerate(kinds):
        connection = gamma if kind == 'u' else -np.transpose(gamma, (2, 1, 0))
        contracted = np.tensordot(connection, tensor, axes=([2], [slot]))
        result += np.moveaxis(contracted, [0, 1], [slot, last])
    return result


def christoffel(g: MetricField, point: Sequence[float]) -> Array:
    r"""Compute the Christoffel symbols :math:`\Gamma^k_{ij}` of a metric at a point."""
    return christoffel_stack(metric_stack(g, point, 1))[0]


def riemann(g: MetricField, point: Sequence[float]) -> Array:
    """Compute the Riemann tensor ``R[l, k, i, j]`` of a metric at a point."""
    return riemann_stack(christoffel_stack(metric_stack(g, point, 2), 1))[0]


def ricci(g: MetricField, point: Sequence[float]) -> Array:
    """Compute the Ricci tensor of a metric at a point."""
    return np.einsum('ikij->jk', riemann(g, point))


def scalar_curvature(g: MetricField, point: Sequence[float]) -> float:
    """Compute the scalar curvature of a metric at a point."""
    g_stack = metric_stack(g, point, 2)
    R = riemann_stack(christoffel_stack(g_stack, 1))[0]
    return float(np.einsum('jk,jk->', np.linalg.inv(g_stack[0]), np.einsum('ikij->jk', R)))


def reduced_scalar_curvature(g: MetricField, point: Sequence[float]) -> float:
    r"""Compute :math:`\nu`, the scalar curvature divided by :math:`4m(m + 2)` in dimension :math:`4m`."""
    m = g.chart.dimensions / 4
    return scalar_curvature(g, point) / (4 * m * (m + 2))


def full_contraction(R: Array, metric: Array) -> float:
    r"""Contract :math:`R_{ijkl}R^{ijkl}` with all indices moved by the metric."""
    inverse = np.linalg.inv(metric)
    lowered = np.einsum('lm,mkij->lkij', metric, R)
    raised = np.einsum('la,kb,ic,jd,abcd->lkij', inverse, inverse, inverse, inverse, lowered, optimize=True)
    return float(np.einsum('lkij,lkij->', lowered, raised))


def curvature_norm(g: MetricField, point: Sequence[float]) -> float:
    """Compute the curvature norm, the scaled full contraction of the Riemann tensor with itself."""
    g_stack = metric_stack(g, point, 2)
    R = riemann_stack(christoffel_stack(g_stack, 1))[0]
    return CURVATURE_NORM_SCALE * full_contraction(R, g_stack[0])


def calibrate_curvature_norm(g: MetricField, point: Sequence[float], expected: float) -> float:
    """Compute the constant that maps the full contraction of the Riemann tensor onto an expected curvature norm."""
    g_stack = metric_stack(g, point, 2)
    R = riemann_stack(christoffel_stack(g_stack, 1))[0]
    return expected / full_contraction(R, g_stack[0])


def covariant_derivative_vector(g: MetricField, V: VectorField, point: Sequence[float]) -> Array:
    r"""Compute :math:`\nabla V` as an endomorphism ``E[i, j]`` :math:`= (\nabla_{\partial_j} V)^i`."""
    gamma = christoffel_stack(metric_stack(g, point, 1))[0]
    V0, V1 = V.stacked(point, 1)
    return covariant_derivative_values(V0, V1, gamma, 'u')


def covariant_derivative_tensor(g: MetricField, T: Field, kinds: str, point: Sequence[float]) -> Array:
    """Covariantly differentiate a tensor field whose slots have the given kinds, appending the direction last."""
    gamma = christoffel_stack(metric_stack(g, point, 1))[0]
    T0, T1 = T.stacked(point, 1)
    return covariant_derivative_values(T0, T1, gamma, kinds)


def covariant_derivative_riemann(g: MetricField, point: Sequence[float]) -> Array:
    r"""Compute :math:`\nabla R` with the direction of differentiation last, which needs the metric to jet order 3."""
    gamma = christoffel_stack(metric_stack(g, point, 3), 2)
    R = riemann_stack(gamma, 1)
    return covariant_derivative_values(R[0], R[1], gamma[0], 'ulll')


def metric_compatibility(g: MetricField, point: Sequence[float]) -> Array:
    r"""Compute :math:`\nabla g`, which vanishes for the Levi-Civita connection."""
    g_stack = metric_stack(g, point, 1)
    gamma = christoffel_stack(g_stack)[0]
    return covariant_derivative_values(g_stack[0], g_stack[1], gamma, 'll')


def bianchi_residual(g: MetricField, point: Sequence[float]) -> Array:
    """Compute the cyclic sum of the Riemann tensor over its last three indices."""
    R = riemann(g, point)
    return R + np.einsum('lijk->lkij', R) + np.einsum('ljki->lkij', R)


def orthonormal_frame(metric: Array, complex_structure: Optional[Array] = None) -> Array:
    """Construct a pseudo-orthonormal frame of a metric from the coordinate frame."""
    frame = gram_schmidt(metric, complex_structure=complex_structure)
    if frame.shape[1] != metric.shape[0]:
        raise DegenerateMetricError(float(np.linalg.det(metric)))
    return frame


def frame_components(tensor: Array, metric: Array, kinds: str, frame: Optional[Array] = None) -> Array:
    """Express a tensor in a pseudo-orthonormal frame, contracting lower slots with the frame and upper slots with the
    dual coframe.
    """
    if frame is None:
        frame = orthonormal_frame(metric)
    coframe = np.linalg.inv(frame)
    transformed = np.asarray(tensor, dtype=np.float64)
    for slot, kind in enumerate(kinds):
        matrix = frame if kind == 'l' else coframe.T
        transformed = np.moveaxis(np.tensordot(transformed, matrix, axes=([slot], [0])), -1, slot)
    return transformed


def einstein_residual(g: MetricField, point: Sequence[float]) -> Tuple[float, Array]:
    r"""Compute the Einstein constant :math:`\lambda = \mathrm{scal}/n` and the deviation :math:`\mathrm{Ric} - \lambda
    g` in a pseudo-orthonormal frame.
    """
    g_stack = metric_stack(g, point, 2)
    R = riemann_stack(christoffel_stack(g_stack, 1))[0]
    Ric = np.einsum('ikij->jk', R)
    metric = g_stack[0]
    constant = float(np.einsum('jk,jk->', np.linalg.inv(metric), Ric)) / metric.shape[0]
    return constant, frame_components(Ric - constant * metric, metric, 'll')


def constant_curvature_residual(g: MetricField, point: Sequence[float]) -> Tuple[float, Array]:
    r"""Fit :math:`R_{lkij} = \lambda(g_{li}g_{kj} - g_{lj}g_{ki})` by least squares and return :math:`\lambda` with the
    deviation in a pseudo-orthonormal frame.
    """
    g_stack = metric_stack(g, point, 2)
    metric = g_stack[0]
    lowered = np.einsum('lm,mkij->lkij', metric, riemann_stack(christoffel_stack(g_stack, 1))[0])
    pattern = np.einsum('li,kj->lkij', metric, metric) - np.einsum('lj,ki->lkij', metric, metric)
    frame = orthonormal_frame(metric)
    lowered = frame_components(lowered, metric, 'llll', frame)
    pattern = frame_components(pattern, metric, 'llll', frame)
    constant = float(np.sum(lowered * pattern) / np.sum(pattern * pattern))
    return constant, lowered - constant * pattern


def metric_signature(g: MetricField, point: Sequence[float]) -> Tuple[int, int]:
    """Count the positive and negative eigenvalues of a metric at a point."""
    eigenvalues, successful = precisely_compute_eigenvalues(g.value(check_point(g.chart, point)))
    if not successful:
        raise DegenerateMetricError(np.nan)
    positive, negative, zero = count_signature(eigenvalues)
    if zero:
        raise DegenerateMetricError(0.0)
    return positive, negative


def frame_residual(tensor: Array, metric: Array, kinds: str, point: Sequence[float]) -> Residual:
    """Summarize the components of a tensor at a point in a pseudo-orthonormal frame of a metric."""
    return Residual.of_array(frame_components(tensor, metric, kinds), point, 'orthonormal')
