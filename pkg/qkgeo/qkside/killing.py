r"""Killing fields of the family :math:`g^{a,b,c}` and the Lie algebra that they span.

In the coordinates :math:`(\rho, x, y, t)` the fields are the real and imaginary parts of
:math:`\partial_\zeta + \frac{a}{2}\bar\zeta^2\partial_{\bar\zeta} - \frac{i}{2}Kb\bar\zeta\partial_t`, the field
:math:`-a\,\mathrm{Im}(\zeta\partial_\zeta) - \frac{Kb}{2}\partial_t`, and :math:`\mathrm{Im}(\zeta\partial_\zeta)`.
They preserve the hypersurfaces of constant :math:`\rho` and span a three-dimensional distribution. For :math:`b \neq 0`
they are linearly independent and span :math:`\mathfrak{o}(2) \ltimes \mathfrak{heis}_3(\mathbb{R})` if :math:`a = 0`,
:math:`\mathfrak{u}(2)` if :math:`a > 0`, and :math:`\mathfrak{u}(1, 1)` if :math:`a < 0`.
"""

import itertools
from typing import List, Optional, Sequence

import numpy as np

from .family import GabcParams, gabc_metric
from .. import options
from ..configurations.sampling import SamplePlan
from ..exceptions import ClosureError
from ..hkside.boyer_finley import X, Y
from ..tensorlab import calculus
from ..tensorlab.curvature import frame_residual
from ..tensorlab.fields import MetricField, Residual, VectorField, check_point, vector
from ..utilities.algebra import count_signature, least_squares_residual
from ..utilities.basics import Array, StringRepresentation


# labels of the classified algebras
ALGEBRAS = ('o2_heis3', 'u2', 'u11')


class KillingCatalog(StringRepresentation):
    r"""The four Killing fields of a family member.

    Attributes
    ----------
    params : `GabcParams`
        The family member.
    g : `MetricField`
        The metric against which the Killing equation is measured, which is the member's metric unless another metric
        in the coordinates ``(rho, x, y, t)`` was supplied.
    fields : `list of VectorField`
        The fields :math:`V_1, \dots, V_4`.
    expected_algebra : `str or None`
        Label of the algebra that the fields span, which is ``None`` for :math:`b = 0`, where :math:`V_3` is a multiple
        of :math:`V_4`.

    """

    params: GabcParams
    g: MetricField
    fields: List[VectorField]
    expected_algebra: Optional[str]

    def __init__(self, params: GabcParams, g: Optional[MetricField] = None) -> None:
        """Declare the fields on the chart of the metric."""
        a, b, K = params.a, params.b, params.K
        self.params = params
        self.g = gabc_metric(params) if g is None else g
        chart = self.g.chart
        self.fields = [
            vector(chart, [0, 1 / 2 + a / 4 * (X**2 - Y**2), a / 2 * X * Y, -K * b / 2 * Y], 'V_1'),
            vector(chart, [0, -a / 2 * X * Y, -1 / 2 + a / 4 * (X**2 - Y**2), -K * b / 2 * X], 'V_2'),
            vector(chart, [0, -a / 2 * Y, a / 2 * X, -K * b / 2], 'V_3'),
            vector(chart, [0, Y / 2, -X / 2, 0], 'V_4'),
        ]
        self.expected_algebra = None
        if b != 0:
            self.expected_algebra = ALGEBRAS[0] if a == 0 else ALGEBRAS[1] if a > 0 else ALGEBRAS[2]

    def __str__(self) -> str:
        """Format the catalog as a string."""
        return f"Killing fields of {self.g.chart.name} spanning {self.expected_algebra or 'a degenerate algebra'}."

    def killing_residual(self, point: Sequence[float]) -> Residual:
        """Summarize the Lie derivatives of the metric along all four fields in an orthonormal frame."""
        point = check_point(self.g.chart, point)
        derivatives = np.stack([calculus.lie_derivative_metric(self.g, V).value(point) for V in self.fields])
        return frame_residual(np.moveaxis(derivatives, 0, -1), self.g.value(point), 'll', point)

    def span_rank(self, point: Sequence[float], atol: float = 1e-10) -> int:
        """Compute the dimension of the span of the fields at a point."""
        point = check_point(self.g.chart, point)
        values = np.column_stack([V.value(point) for V in self.fields])
        return int(np.linalg.matrix_rank(values, tol=atol))

    def structure_constants(self, points: Optional[Sequence[Sequence[float]]] = None,
                            tolerance: float = 1e-8) -> Array:
        r"""Extract structure constants ``C[i, j, k]`` with :math:`[V_i, V_j] = \sum_k C_{ijk}V_k` by least squares over
        several points, which raises an error if the brackets leave the span of the fields.
        """
        if points is None:
            points = SamplePlan(size=6).sample(self.g.chart)
        points = [check_point(self.g.chart, p) for p in points]
        basis = np.vstack([np.column_stack([V.value(p) for V in self.fields]) for p in points])
        count = len(self.fields)
        constants = np.zeros((count, count, count), dtype=options.dtype)
        worst = 0.0
        for i, j in itertools.combinations(range(count), 2):
            bracket = calculus.lie_bracket(self.fields[i], self.fields[j])
            target = np.concatenate([bracket.value(p) for p in points])
            coefficients, residual = least_squares_residual(basis, target)
            constants[i, j] = coefficients
            constants[j, i] = -coefficients
            worst = max(worst, residual)
        if not worst <= tolerance:
            raise ClosureError(worst)
        return constants


def killing_fields(params: GabcParams, g: Optional[MetricField] = None) -> KillingCatalog:
    """Construct the catalog of Killing fields of a family member, optionally measured against another metric."""
    return KillingCatalog(params, g)


def killing_form(constants: Array) -> Array:
    r"""Compute :math:`B_{ij} = \mathrm{tr}(\mathrm{ad}_i\mathrm{ad}_j)` from structure constants, where
    :math:`(\mathrm{ad}_i)_{kj} = C_{ijk}`.
    """
    adjoint = np.transpose(constants, (0, 2, 1))
    return np.einsum('ikl,jlk->ij', adjoint, adjoint)


def classify_algebra(catalog: KillingCatalog, points: Optional[Sequence[Sequence[float]]] = None,
                     atol: Optional[float] = None) -> str:
    r"""Classify the algebra spanned by the fields from the derived subalgebra and the signature of the Killing form
    restricted to it.

    A three-dimensional derived subalgebra on which the Killing form is degenerate is the Heisenberg algebra of
    :math:`\mathfrak{o}(2) \ltimes \mathfrak{heis}_3(\mathbb{R})`. A definite Killing form identifies
    :math:`\mathfrak{su}(2)` and thus :math:`\mathfrak{u}(2)`, and signature :math:`(2, 1)` identifies
    :math:`\mathfrak{su}(1, 1)` and thus :math:`\mathfrak{u}(1, 1)`. Eigenvalues below ``atol`` count as zero, which
    defaults to ``options.classification_atol``.
    """
    if catalog.params.b == 0:
        raise ValueError("The fields are linearly dependent when b = 0, so they do not determine structure constants.")
    if atol is None:
        atol = options.classification_atol
    constants = catalog.structure_constants(points)
    count = constants.shape[0]

    # the derived subalgebra is spanned by the brackets
    brackets = constants.reshape(count * count, count)
    _, singular_values, right = np.linalg.svd(brackets)
    rank = int((singular_values > atol).sum())
    if rank != 3:
        raise ValueError(f"The derived subalgebra has dimension {rank} instead of 3.")
    derived = right[:rank].T

    # restrict the Killing form to the derived subalgebra
    restricted = derived.T @ killing_form(constants) @ derived
    positive, negative, zero = count_signature(np.linalg.eigvalsh((restricted + restricted.T) / 2), atol)
    if zero:
        return 'o2_heis3'
    if negative == 3:
        return 'u2'
    if (positive, negative) == (2, 1):
        return 'u11'
    raise ValueError(f"The Killing form has unexpected signature ({positive}, {negative}).")
