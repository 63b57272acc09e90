r"""Self-dual Einstein metrics of Przanowski-Tod type.

A solution :math:`u(\rho, x, y)` of the continuous Toda equation with :math:`P = K(\rho\partial_\rho u - 2) > 0`
determines the quaternionic Kähler metric

.. math::

   g = \frac{1}{4\rho^2}\left(P d\rho^2 + 2Pe^u(dx^2 + dy^2) + \frac{1}{P}(dt + \Theta)^2\right),

where the one-form :math:`\Theta` satisfies

.. math::

   d\Theta = (\partial_yP\,dx - \partial_xP\,dy) \wedge d\rho - 2\partial_\rho(Pe^u)\,dx \wedge dy.

The right-hand side is closed exactly when :math:`u` solves the Toda equation. In the gauge
:math:`\Theta_\rho = \Theta_t = 0`, :math:`\Theta` is recovered by integrating along coordinate segments from a base
point, first in :math:`\rho` and then in :math:`x`, with Gauss-Legendre quadrature on coordinate jets so that the
integrals can be differentiated like any other field.
"""

from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from ..configurations.sampling import SamplePlan
from ..exceptions import SignatureError
from ..hkside.boyer_finley import COORDINATES, RHO, X, Y, TodaSolution
from ..tensorlab import calculus, jets
from ..tensorlab.curvature import frame_residual
from ..tensorlab.fields import (
    Chart, MetricField, OneForm, PForm, Residual, ScalarField, TensorField, check_point, diff, one_form, scalar,
    two_form
)
from ..tensorlab.jets import Jet
from ..utilities.basics import StringRepresentation, format_point


class PTChart(StringRepresentation):
    r"""The Przanowski-Tod metric of a Toda solution.

    Parameters
    ----------
    solution : `TodaSolution`
        The solution :math:`u`.
    theta : `sequence of str or Expr, optional`
        Closed form components of :math:`\Theta` in the coordinates ``(rho, x, y, t)``. By default, :math:`\Theta` is
        integrated from the prescribed :math:`d\Theta`.
    base : `sequence of float, optional`
        Values :math:`(\rho_0, x_0)` at which the integrals that define :math:`\Theta` start. By default,
        :math:`\rho_0` is the radial coordinate of the first admissible sample point and :math:`x_0` is the center of
        the sampling interval of :math:`x`.
    nodes : `int, optional`
        Number of Gauss-Legendre nodes per integral. By default, ``32``.
    plan : `SamplePlan, optional`
        Points at which :math:`P > 0` is checked. By default, ``20`` Halton points are used.

    Attributes
    ----------
    chart : `Chart`
        Chart of the solution, restricted to :math:`P > 0`.
    P : `ScalarField`
        The function :math:`K(\rho\partial_\rho u - 2)`.
    Theta : `OneForm`
        The one-form :math:`\Theta`.
    flux : `PForm`
        The prescribed two-form :math:`d\Theta`.
    g : `MetricField`
        The metric.

    Raises
    ------
    `SignatureError`
        If :math:`P` is not positive at every checked point.

    """

    solution: TodaSolution
    chart: Chart
    P: ScalarField
    Theta: OneForm
    flux: PForm
    g: MetricField
    base: Optional[Tuple[float, float]]
    _exponential: ScalarField
    _radius: ScalarField
    _flux_components: TensorField

    def __init__(
            self, solution: TodaSolution, theta: Optional[Sequence[Any]] = None,
            base: Optional[Sequence[float]] = None, nodes: int = 32, plan: Optional[SamplePlan] = None) -> None:
        """Check the sign of P and assemble the metric."""
        if not isinstance(nodes, int) or nodes < 2:
            raise ValueError("nodes must be an integer of at least 2.")
        self.solution = solution
        u = solution.expression
        P = solution.K * (RHO * diff(u, RHO) - 2)

        # P must be positive on the solution's domain
        points = (plan or SamplePlan(size=20)).sample(solution.chart)
        function = sp.lambdify(solution.chart.symbols, P, modules='math')
        if any(not function(*p) > 0 for p in points):
            raise SignatureError
        bounds = [tuple(b) for b in solution.chart.bounds]
        self.chart = Chart(f'pt[{solution.chart.name}]', COORDINATES, bounds, solution.constraints + (P,))

        # the prescribed exterior derivative of Theta
        components = [-diff(P, Y), diff(P, X), -2 * diff(P * sp.exp(u), RHO)]
        self.flux = two_form(self.chart, {(0, 1): components[0], (0, 2): components[1], (1, 2): components[2]}, 'F')
        self._flux_components = TensorField.from_expressions(self.chart, components, 'F')
        self.P = scalar(self.chart, P, 'P')
        self._exponential = scalar(self.chart, P * sp.exp(u), 'P e^u')
        self._radius = scalar(self.chart, RHO, 'rho')

        # either declare Theta or integrate it
        if theta is not None:
            self.base = None
            self.Theta = one_form(self.chart, theta, 'Theta')
        else:
            if base is None:
                reference = SamplePlan(size=1).sample(self.chart)[0]
                base = (float(reference[0]), float(self.chart.bounds[1].mean()))
            self.base = (float(base[0]), float(base[1]))
            self.Theta = self._integrate(nodes)

        self.g = calculus.combine(
            MetricField, [self.P, self._exponential, self.Theta, self._radius], self._assemble, shape=(4, 4),
            label='g_PT'
        )

    def __str__(self) -> str:
        """Format the chart as a string."""
        theta = "closed form" if self.base is None else f"integrated from {format_point(self.base)}"
        return f"Przanowski-Tod metric of u = {self.solution.expression} with Theta in {theta} on {self.chart.name}."

    @staticmethod
    def _assemble(P: Any, exponential: Any, theta: Any, radius: Any) -> Any:
        """Assemble metric components from jets of P, Pe^u, Theta, and rho."""
        P, exponential, radius = P[()], exponential[()], radius[()]
        fibre = theta + np.array([0, 0, 0, 1])
        components = np.multiply.outer(fibre, fibre) / P
        components[0, 0] = components[0, 0] + P
        components[1, 1] = components[1, 1] + 2 * exponential
        components[2, 2] = components[2, 2] + 2 * exponential
        return components / (4 * radius**2)

    def _integrate(self, nodes: int) -> OneForm:
        r"""Construct :math:`\Theta_x = \int_{\rho_0}^\rho F_{\rho x}\,ds` and :math:`\Theta_y = \int_{\rho_0}^\rho
        F_{\rho y}\,ds + \int_{x_0}^x F_{xy}(\rho_0, s, y)\,ds`.
        """
        abscissae, weights = np.polynomial.legendre.leggauss(nodes)
        fractions = ((abscissae + 1) / 2).tolist()
        weights = (weights / 2).tolist()
        rho0, x0 = self.base
        flux = self._flux_components

        def function(coordinates: Sequence[Jet]) -> List[Any]:
            rho, x, y, t = coordinates
            start = Jet.constant(rho0, len(coordinates), rho.order)
            radial_x: Any = 0.0
            radial_y: Any = 0.0
            transverse: Any = 0.0
            for fraction, weight in zip(fractions, weights):
                values = flux.evaluate([rho0 + (rho - rho0) * fraction, x, y, t])
                radial_x = radial_x + values[0] * weight
                radial_y = radial_y + values[1] * weight
                transverse = transverse + flux.evaluate([start, x0 + (x - x0) * fraction, y, t])[2] * weight
            return [0.0, (rho - rho0) * radial_x, (rho - rho0) * radial_y + (x - x0) * transverse, 0.0]

        return OneForm.derived(self.chart, (4,), function, label='Theta')

    @property
    def dimensions(self) -> int:
        """Dimension of the chart."""
        return self.chart.dimensions

    def theta_residual(self, point: Sequence[float]) -> Residual:
        r"""Measure :math:`d\Theta - F` against the prescribed two-form in an orthonormal frame of the metric."""
        point = check_point(self.chart, point)
        difference = calculus.exterior_derivative(self.Theta).value(point) - self.flux.value(point)
        return frame_residual(difference, self.g.value(point), 'll', point)

    def flux_closure(self, point: Sequence[float]) -> float:
        """Compute the largest component of the exterior derivative of the prescribed two-form, which vanishes for
        solutions of the Toda equation.
        """
        point = check_point(self.chart, point)
        return float(np.abs(calculus.exterior_derivative(self.flux).value(point)).max())

    def coframe(self) -> TensorField:
        r"""Construct the orthonormal coframe :math:`e^0 \propto d\rho`, :math:`e^1 \propto dt + \Theta`,
        :math:`e^2 \propto dx`, and :math:`e^3 \propto dy` as the rows of a matrix field.
        """
        def assemble(P: Any, exponential: Any, theta: Any, radius: Any) -> Any:
            P, exponential, radius = P[()], exponential[()], radius[()]
            root = jets.sqrt(P)
            horizontal = jets.sqrt(2 * exponential) / (2 * radius)
            rows = np.empty((4, 4), dtype=object)
            rows[...] = 0.0
            rows[0, 0] = root / (2 * radius)
            rows[1] = (theta + np.array([0, 0, 0, 1])) / (2 * radius * root)
            rows[2, 1] = horizontal
            rows[3, 2] = horizontal
            return rows

        fields = [self.P, self._exponential, self.Theta, self._radius]
        return calculus.combine(TensorField, fields, assemble, shape=(4, 4), label='e')


def pt_metric(solution: TodaSolution, **kwargs: Any) -> PTChart:
    r"""Construct the Przanowski-Tod metric of a Toda solution with :math:`\Theta` integrated from the prescribed
    :math:`d\Theta`. Keyword arguments are passed to :class:`PTChart`.
    """
    return PTChart(solution, **kwargs)
