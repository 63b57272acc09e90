r"""The pair of Hermitian structures of a Przanowski-Tod metric.

On the orthonormal coframe :math:`(e^0, e^1, e^2, e^3)` of :class:`~qkgeo.qkside.przanowski_tod.PTChart`, the structure
:math:`J_1` rotates :math:`e^0` into :math:`e^1` and :math:`e^2` into :math:`e^3`. The structure :math:`\tilde J_1`
agrees with :math:`J_1` on :math:`\mathrm{span}(e^2, e^3)` and has the opposite sign on :math:`\mathrm{span}(e^0, e^1)`,
which is dual to the span of :math:`X = \partial_t` and :math:`J_1X`. The two structures induce opposite orientations,
and :math:`\tilde J_1` is integrable and conformally Kähler.
"""

from typing import Any, Dict, Sequence, Tuple

import numpy as np

from .przanowski_tod import PTChart
from ..tensorlab import calculus, jets
from ..tensorlab.curvature import frame_residual
from ..tensorlab.fields import EndoField, MetricField, Residual, check_point


# action of the structures on coframe components
FRAME_J1 = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=np.float64)
FRAME_J1_TILDE = np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=np.float64)


def frame_structure(chart: PTChart, matrix: Any, label: str) -> EndoField:
    r"""Transport a constant matrix on coframe components into an endomorphism field :math:`J = C^{-1}MC`, where the
    rows of :math:`C` are the coframe.
    """
    matrix = np.asarray(matrix, dtype=np.float64)

    def conjugate(coframe: Any) -> Any:
        return jets.invert(coframe) @ matrix @ coframe

    return calculus.combine(EndoField, [chart.coframe()], conjugate, label=label)


def hermitian_pair(chart: PTChart) -> Tuple[EndoField, EndoField]:
    r"""Construct :math:`J_1` and :math:`\tilde J_1`."""
    return frame_structure(chart, FRAME_J1, 'J_1'), frame_structure(chart, FRAME_J1_TILDE, 'J~_1')


def hermitian_residuals(chart: PTChart, J: EndoField, point: Sequence[float]) -> Dict[str, Residual]:
    r"""Measure :math:`J^2 + \mathrm{Id}` and :math:`g(J\cdot, J\cdot) - g` in an orthonormal frame."""
    point = check_point(chart.chart, point)
    metric = chart.g.value(point)
    value = J.value(point)
    return {
        'square': frame_residual(value @ value + np.eye(chart.dimensions), metric, 'ul', point),
        'compatibility': frame_residual(value.T @ metric @ value - metric, metric, 'll', point),
    }


def nijenhuis_residual(chart: PTChart, J: EndoField, point: Sequence[float]) -> Residual:
    """Summarize the Nijenhuis tensor of a structure in an orthonormal frame."""
    point = check_point(chart.chart, point)
    return frame_residual(calculus.nijenhuis(J).value(point), chart.g.value(point), 'ull', point)


def lee_closed_residual(chart: PTChart, J: EndoField, point: Sequence[float]) -> Residual:
    r"""Summarize :math:`d\theta` of the Lee form of a structure in an orthonormal frame."""
    point = check_point(chart.chart, point)
    return frame_residual(calculus.lee_form_differential(chart.g, J).value(point), chart.g.value(point), 'll', point)


def pfaffian(sigma: Any) -> float:
    r"""Compute the Pfaffian :math:`\sigma_{01}\sigma_{23} - \sigma_{02}\sigma_{13} + \sigma_{03}\sigma_{12}`, so that
    :math:`\sigma \wedge \sigma = 2\,\mathrm{Pf}(\sigma)\,dx^0 \wedge dx^1 \wedge dx^2 \wedge dx^3`.
    """
    return float(sigma[0, 1] * sigma[2, 3] - sigma[0, 2] * sigma[1, 3] + sigma[0, 3] * sigma[1, 2])


def orientation(chart: PTChart, J: EndoField, point: Sequence[float]) -> int:
    r"""Compute the sign of :math:`\sigma \wedge \sigma` of the fundamental form of a structure against
    :math:`d\rho \wedge dx \wedge dy \wedge dt`.
    """
    return orientation_sign(chart.g, J, check_point(chart.chart, point))


def orientation_sign(g: MetricField, J: EndoField, point: Sequence[float]) -> int:
    """Compute the sign of the Pfaffian of the fundamental form of a structure on any four-dimensional chart."""
    point = check_point(g.chart, point)
    return int(np.sign(pfaffian(calculus.fundamental_form(g, J).value(point))))


def opposition_residual(g: MetricField, J: EndoField, J_other: EndoField, point: Sequence[float]) -> float:
    r"""Compute :math:`|\epsilon + \epsilon'|` for the orientation signs of two structures, which vanishes exactly when
    they induce opposite orientations and is ``2`` when they induce the same one.
    """
    return float(abs(orientation_sign(g, J, point) + orientation_sign(g, J_other, point)))


def orientation_residual(chart: PTChart, point: Sequence[float]) -> float:
    r"""Measure whether :math:`J_1` and :math:`\tilde J_1` induce opposite orientations. The residual is
    :math:`|\epsilon_1 + \tilde\epsilon_1|` for the orientation signs, which vanishes exactly when they are opposite.
    """
    J1, J1_tilde = hermitian_pair(chart)
    return opposition_residual(chart.g, J1, J1_tilde, check_point(chart.chart, point))
