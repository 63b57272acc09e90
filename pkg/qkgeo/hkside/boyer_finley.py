r"""Hyper-Kähler metrics of Boyer-Finley type.

A solution :math:`u(\rho, x, y)` of the continuous Toda equation :math:`(\partial_x^2 + \partial_y^2)u +
2\partial_\rho^2 e^u = 0` determines the metric

.. math::

   g_N = K\partial_\rho u\,(d\rho^2 + 2e^u(dx^2 + dy^2)) + \frac{4K}{\partial_\rho u}\eta^2, \quad
   \eta = dt - \tfrac{1}{2}(\partial_yu\,dx - \partial_xu\,dy),

with the Kähler form :math:`\omega_1 = -2K d\rho \wedge \eta + 2Ke^u\partial_\rho u\,dx \wedge dy` and the rotating
Killing field :math:`Z = \partial_t`, whose Hamiltonian with :math:`\iota_Z\omega_1 = -df_Z` is :math:`f_Z = -2K\rho`.
"""

from typing import Any, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from ..configurations.sampling import SamplePlan
from ..exceptions import InvalidSolutionError, SamplingError, SignatureError
from ..tensorlab import calculus, jets
from ..tensorlab.fields import (
    Chart, EndoField, MetricField, PForm, ScalarField, VectorField, check_point, diff, metric, scalar, symmetric_square,
    two_form, vector
)
from ..utilities.basics import Bounds, StringRepresentation, format_number


# coordinates of Boyer-Finley and Przanowski-Tod charts
COORDINATES = ('rho', 'x', 'y', 't')
RHO, X, Y, T = sp.symbols(COORDINATES, real=True)

# sampling box of charts over which solutions are validated
DEFAULT_BOUNDS: Bounds = ((0.05, 3.0), (-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0))


class TodaSolution(StringRepresentation):
    r"""A solution :math:`u(\rho, x, y)` of the continuous Toda equation along with a nonzero scale :math:`K`.

    Parameters
    ----------
    expression : `str or Expr`
        Expression for :math:`u` in the symbols ``rho``, ``x``, and ``y``. It must not depend on ``t``.
    K : `float`
        Nonzero scale.
    bounds : `sequence of tuple, optional`
        Sampling box of the chart with coordinates ``(rho, x, y, t)``.
    constraints : `sequence of str or Expr, optional`
        Expressions that must be positive on the domain in addition to :math:`\rho > 0`, for example the argument of a
        logarithm in :math:`u`.
    name : `str, optional`
        Name of the chart.
    validate : `bool, optional`
        Whether to validate the solution on sampled points, which raises an :class:`InvalidSolutionError` if the
        residual exceeds ``tolerance``. Perturbed functions that serve as negative controls are constructed with
        ``validate=False``.
    plan : `SamplePlan, optional`
        Configuration of validation points. By default, ``20`` Halton points are used.
    tolerance : `float, optional`
        Largest admissible absolute Toda residual. By default, ``1e-8``.

    """

    expression: sp.Expr
    K: float
    chart: Chart
    u: ScalarField
    residual: Optional[float]
    _constraints: Tuple[Any, ...]

    def __init__(
            self, expression: Any, K: float, bounds: Bounds = DEFAULT_BOUNDS, constraints: Sequence[Any] = (),
            name: str = 'toda', validate: bool = True, plan: Optional[SamplePlan] = None,
            tolerance: float = 1e-8) -> None:
        """Declare the solution and optionally validate it."""
        if not isinstance(K, (int, float)) or K == 0:
            raise ValueError("K must be a nonzero real number.")
        self._constraints = ('rho',) + tuple(constraints)
        self.chart = Chart(name, COORDINATES, bounds, self._constraints)
        self.expression = sp.sympify(expression, locals=dict(zip(COORDINATES, (RHO, X, Y, T))))
        if T in self.expression.free_symbols:
            raise ValueError("Solutions of the Toda equation must not depend on t.")
        self.K = float(K)
        self.u = scalar(self.chart, self.expression, 'u')
        self.residual = None
        if validate:
            self.validate(plan, tolerance)

    def __str__(self) -> str:
        """Format the solution as a string."""
        residual = "unvalidated" if self.residual is None else f"residual {format_number(self.residual)}"
        return f"Toda solution u = {self.expression} with K = {format_number(self.K)} ({residual})."

    @property
    def constraints(self) -> Tuple[Any, ...]:
        """Domain constraints of the chart, including positivity of the radial coordinate."""
        return self._constraints

    def toda_residual(self, point: Sequence[float]) -> float:
        r"""Evaluate :math:`(\partial_x^2 + \partial_y^2)u + 2\partial_\rho^2 e^u` at a point with second order jets."""
        u = self.u.jet(check_point(self.chart, point), 2)
        exponential = jets.exp(u)
        return float(u.second[1, 1] + u.second[2, 2] + 2 * exponential.second[0, 0])

    def validate(self, plan: Optional[SamplePlan] = None, tolerance: float = 1e-8) -> float:
        """Compute the largest absolute Toda residual over sampled points and raise an error if it exceeds a
        tolerance.
        """
        points = (plan or SamplePlan(size=20)).sample(self.chart)
        self.residual = max((abs(self.toda_residual(p)) for p in points), default=0.0)
        if not self.residual <= tolerance:
            raise InvalidSolutionError(self.residual)
        return self.residual

    def replace(self, expression: Any, validate: bool = False) -> 'TodaSolution':
        """Declare another function on a chart with the same box and constraints."""
        return TodaSolution(
            expression, self.K, [tuple(b) for b in self.chart.bounds], self._constraints[1:],
            f'{self.chart.name}-replaced', validate
        )


class BoyerFinleyModel(StringRepresentation):
    r"""The Boyer-Finley hyper-Kähler metric of a Toda solution with its Kähler form, rotating Killing field, and
    Hamiltonian.

    The chart of the model adds the constraint that :math:`\partial_\rho u` keeps the sign that it has at the first
    admissible sample point, which makes the metric definite. Metrics with :math:`K\partial_\rho u < 0` are negative
    definite.

    Attributes
    ----------
    solution : `TodaSolution`
        The underlying solution.
    chart : `Chart`
        Chart on which all fields of the model live.
    g : `MetricField`
        The metric :math:`g_N`.
    omega1 : `PForm`
        The Kähler form :math:`\omega_1`.
    I1 : `EndoField`
        The complex structure :math:`I_1 = -g_N^{-1}\omega_1`.
    Z : `VectorField`
        The rotating Killing field :math:`\partial_t`.
    f_Z : `ScalarField`
        The Hamiltonian :math:`-2K\rho`.
    u : `ScalarField`
        The solution on the model's chart.

    """

    solution: TodaSolution
    chart: Chart
    g: MetricField
    omega1: PForm
    I1: EndoField
    Z: VectorField
    f_Z: ScalarField
    u: ScalarField
    sign: int

    def __init__(self, solution: TodaSolution, validate: bool = True) -> None:
        """Validate the solution and assemble the fields."""
        if validate and solution.residual is None:
            solution.validate()
        self.solution = solution
        K = solution.K
        u = solution.expression
        u_rho = diff(u, RHO)

        # fix the sign of the radial derivative at an admissible point
        try:
            reference = SamplePlan(size=1).sample(solution.chart)[0]
        except SamplingError:
            raise SignatureError
        derivative = float(sp.lambdify((RHO, X, Y, T), u_rho, modules='math')(*reference))
        if derivative == 0:
            raise SignatureError
        self.sign = int(np.sign(derivative))
        constraints = solution.constraints[1:] + (self.sign * u_rho,)
        bounds = [tuple(b) for b in solution.chart.bounds]
        self.chart = Chart(f'bf[{solution.chart.name}]', COORDINATES, bounds, ('rho',) + constraints)

        # assemble the metric and Kähler form
        eta = [0, -diff(u, Y) / 2, diff(u, X) / 2, 1]
        radial = K * u_rho
        self.g = metric(self.chart, symmetric_square(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], eta],
            [radial, 2 * radial * sp.exp(u), 2 * radial * sp.exp(u), 4 * K / u_rho]
        ), 'g_N')
        self.omega1 = two_form(self.chart, {
            (0, 1): -2 * K * eta[1],
            (0, 2): -2 * K * eta[2],
            (0, 3): -2 * K,
            (1, 2): 2 * K * sp.exp(u) * u_rho,
        }, 'omega_1')
        self.I1 = calculus.endomorphism_of(self.g, self.omega1)
        self.Z = vector(self.chart, [0, 0, 0, 1], 'Z')
        self.f_Z = scalar(self.chart, -2 * K * RHO, 'f_Z')
        self.u = scalar(self.chart, u, 'u')

        # the sampled domain must be non-empty
        SamplePlan(size=1).sample(self.chart)

    def __str__(self) -> str:
        """Format the model as a string."""
        definiteness = "positive" if self.sign * self.solution.K > 0 else "negative"
        return f"Boyer-Finley model of u = {self.solution.expression} ({definiteness} definite) on {self.chart.name}."

    @property
    def dimensions(self) -> int:
        """Dimension of the hyper-Kähler manifold."""
        return self.chart.dimensions

    def hamiltonian_residual(self, point: Sequence[float]) -> float:
        r"""Compute the largest component of :math:`\iota_Z\omega_1 + df_Z` at a point."""
        point = check_point(self.chart, point)
        contracted = calculus.interior_product(self.Z, self.omega1).value(point)
        return float(np.abs(contracted + calculus.exterior_derivative(self.f_Z).value(point)).max())


def boyer_finley_metric(solution: TodaSolution) -> MetricField:
    """Construct the Boyer-Finley metric of a Toda solution. Use :class:`BoyerFinleyModel` to access the Kähler form
    and Killing field on the same chart.
    """
    return BoyerFinleyModel(solution).g


def omega1_bf(solution: TodaSolution) -> PForm:
    """Construct the Kähler form of the Boyer-Finley metric of a Toda solution."""
    return BoyerFinleyModel(solution).omega1


def constant_solution(c: float, K: float = -1.0) -> TodaSolution:
    r"""Construct the constant solution :math:`u = \ln c`, whose Toda residual vanishes identically."""
    if c <= 0:
        raise ValueError("c must be positive.")
    return TodaSolution(sp.log(sp.Float(c)), K, name='constant')
