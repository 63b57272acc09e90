r"""The family :math:`g^{a,b,c}` of self-dual Einstein metrics.

For real constants :math:`a, b, c` and a nonzero scale :math:`K`, let :math:`Q = a\rho^2 + b\rho + c`,
:math:`D = 1 + \frac{a}{2}|\zeta|^2` with :math:`\zeta = x + iy`, and :math:`W = b\rho + 2c`. The metric

.. math::

   g^{a,b,c} = -\frac{K}{4\rho^2}\left(\frac{W}{Q}d\rho^2 + \frac{2W}{D^2}|d\zeta|^2 +
   \frac{Q}{W}\left(-\frac{dt}{K} + \frac{b(y\,dx - x\,dy)}{D}\right)^2\right)

is the Przanowski-Tod metric of the Toda solution :math:`e^u = Q/D^2`. It is quaternionic Kähler with reduced scalar
curvature :math:`\nu = 2/K` wherever :math:`\rho > 0`, :math:`Q > 0`, and :math:`KW < 0`.
"""

from typing import Any, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from ..configurations.sampling import SamplePlan
from ..exceptions import PoleError, SamplingError
from ..hkside.boyer_finley import COORDINATES, DEFAULT_BOUNDS, RHO, T, X, Y, TodaSolution
from ..tensorlab import jets
from ..tensorlab.curvature import calibrate_curvature_norm, scalar_curvature
from ..tensorlab.fields import Chart, MetricField, ScalarField, check_point, metric, symmetric_square
from ..utilities.basics import Bounds, StringRepresentation


# holomorphic coordinate in which gauge transformations and Liouville solutions are written
ZETA = sp.Symbol('zeta')


class GabcParams(StringRepresentation):
    r"""Parameters :math:`(a, b, c, K)` of a member of the family along with the chart of its admissible domain.

    The chart's constraints are :math:`\rho > 0`, :math:`Q > 0`, :math:`D > 0`, and :math:`-KW > 0`. The last one
    selects the components of :math:`W \neq 0` on which the sign of :math:`K` makes the metric positive definite.

    Parameters
    ----------
    a, b, c : `float`
        Coefficients of :math:`Q`.
    K : `float`
        Nonzero scale, which fixes :math:`\nu = 2/K`.
    bounds : `sequence of tuple, optional`
        Sampling box of the chart with coordinates ``(rho, x, y, t)``.
    constraints : `sequence of str or Expr, optional`
        Additional constraints that restrict the domain, for example to one side of :math:`2a\rho + b = 0`.

    Raises
    ------
    `ValueError`
        If the admissible domain does not meet the sampling box.

    """

    a: float
    b: float
    c: float
    K: float
    chart: Chart
    Q: sp.Expr
    D: sp.Expr
    W: sp.Expr
    _extra: Tuple[Any, ...]

    def __init__(
            self, a: float, b: float, c: float, K: float, bounds: Bounds = DEFAULT_BOUNDS,
            constraints: Sequence[Any] = ()) -> None:
        """Validate the parameters and declare the chart."""
        for name, value in [('a', a), ('b', b), ('c', c), ('K', K)]:
            if not isinstance(value, (int, float)) or not np.isfinite(value):
                raise ValueError(f"{name} must be a finite real number.")
        if K == 0:
            raise ValueError("K must be nonzero.")
        self.a, self.b, self.c, self.K = float(a), float(b), float(c), float(K)
        self.Q = self.a * RHO**2 + self.b * RHO + self.c
        self.D = 1 + self.a / 2 * (X**2 + Y**2)
        self.W = self.b * RHO + 2 * self.c
        self._extra = tuple(constraints)
        name = f"gabc:{self.a:g},{self.b:g},{self.c:g},{self.K:g}"
        self.chart = Chart(name, COORDINATES, bounds, [RHO, self.Q, self.D, -self.K * self.W] + list(constraints))
        try:
            SamplePlan(size=1).sample(self.chart)
        except SamplingError:
            raise ValueError(f"The admissible domain of {name} does not meet the sampling box.")

    def __str__(self) -> str:
        """Format the parameters as a string."""
        return f"Family member with a = {self.a}, b = {self.b}, c = {self.c}, and K = {self.K} on {self.chart.name}."

    @property
    def bounds(self) -> Bounds:
        """Sampling box of the chart."""
        return [tuple(b) for b in self.chart.bounds]

    @property
    def constraints(self) -> Tuple[Any, ...]:
        """Constraints beyond the ones that every member carries."""
        return self._extra

    @property
    def nu(self) -> float:
        r"""Reduced scalar curvature :math:`\nu = 2/K`."""
        return 2 / self.K

    @property
    def discriminant(self) -> float:
        """Discriminant :math:`b^2 - 4ac` of :math:`Q`."""
        return self.b**2 - 4 * self.a * self.c

    @property
    def k(self) -> float:
        r"""Parameter :math:`k = 4ac/b^2 - 1` of the Pedersen form of the metric, which needs :math:`b \neq 0`."""
        if self.b == 0:
            raise ValueError("The Pedersen parameter is only defined for b != 0.")
        return 4 * self.a * self.c / self.b**2 - 1

    @property
    def locally_symmetric(self) -> bool:
        r"""Whether :math:`bc(b^2 - 4ac) = 0`, in which case the curvature norm is constant."""
        return self.b * self.c * self.discriminant == 0

    def admissible_rho(self, rho: float) -> bool:
        r"""Decide whether the hypersurface at some :math:`\rho` meets the admissible domain at :math:`\zeta = 0`."""
        return rho > 0 and self.a * rho**2 + self.b * rho + self.c > 0 and -self.K * (self.b * rho + 2 * self.c) > 0

    def restrict(self, constraints: Sequence[Any], bounds: Optional[Bounds] = None) -> 'GabcParams':
        """Copy the parameters with additional domain constraints and optionally another sampling box."""
        return GabcParams(
            self.a, self.b, self.c, self.K, self.bounds if bounds is None else bounds, self._extra + tuple(constraints)
        )

    def scale(self, factor: float) -> 'GabcParams':
        """Copy the parameters with the scale multiplied by a positive factor."""
        if not factor > 0:
            raise ValueError("factor must be positive.")
        return GabcParams(self.a, self.b, self.c, factor * self.K, self.bounds, self._extra)


def gabc_expressions(params: GabcParams) -> sp.Matrix:
    """Construct the SymPy components of the metric of a family member."""
    Q, D, W = params.Q, params.D, params.W
    prefactor = -params.K / (4 * RHO**2)
    fibre = [0, params.b * Y / D, -params.b * X / D, -1 / params.K]
    one_forms = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], fibre]
    weights = [prefactor * W / Q, prefactor * 2 * W / D**2, prefactor * 2 * W / D**2, prefactor * Q / W]
    return symmetric_square(one_forms, weights)


def gabc_metric(params: GabcParams) -> MetricField:
    """Construct the metric of a family member on the chart of its parameters."""
    return metric(params.chart, gabc_expressions(params), 'g^abc')


def u_expression(params: GabcParams) -> sp.Expr:
    r"""Construct :math:`u = \ln Q - 2\ln D`."""
    return sp.log(params.Q) - 2 * sp.log(params.D)


def u_family(params: GabcParams, validate: bool = True) -> TodaSolution:
    r"""Construct the Toda solution :math:`e^u = Q/D^2` on the box and domain of a family member."""
    return TodaSolution(
        u_expression(params), params.K, params.bounds, (params.Q, params.D, -params.K * params.W) + params.constraints,
        f'toda[{params.chart.name}]', validate
    )


def liouville_residual(G: ScalarField, a: float, point: Sequence[float]) -> float:
    r"""Evaluate :math:`\partial_\zeta\partial_{\bar\zeta}G + ae^G` at a point, where
    :math:`\partial_\zeta\partial_{\bar\zeta} = \frac{1}{4}(\partial_x^2 + \partial_y^2)`.
    """
    chart = G.chart
    point = check_point(chart, point)
    x, y = chart.coordinates.index('x'), chart.coordinates.index('y')
    jet = G.jet(point, 2)
    return float((jet.second[x, x] + jet.second[y, y]) / 4 + a * jets.exp(jet).value)


def holomorphic_parts(f: Any) -> Tuple[sp.Expr, sp.Expr, sp.Expr]:
    r"""Split a holomorphic function of :math:`\zeta` into its real and imaginary parts in :math:`(x, y)` and return
    them along with :math:`|f'|^2`.
    """
    expression = sp.sympify(f, locals={'zeta': ZETA})
    if expression.free_symbols - {ZETA}:
        raise ValueError("Holomorphic functions must be expressions in zeta alone.")
    substitution = {ZETA: X + sp.I * Y}
    value = sp.expand_complex(expression.subs(substitution))
    derivative = sp.expand_complex(sp.diff(expression, ZETA).subs(substitution))
    modulus = sp.re(derivative)**2 + sp.im(derivative)**2
    return sp.re(value), sp.im(value), modulus


def gauge_transform(u: Any, f: Any) -> sp.Expr:
    r"""Transform a Toda solution by a holomorphic change of coordinates, :math:`u \mapsto u(\rho, f(\zeta)) +
    \ln|f'(\zeta)|^2`, which preserves the Toda equation and the isometry class of the Przanowski-Tod metric.
    """
    real, imaginary, modulus = holomorphic_parts(f)
    expression = sp.sympify(u, locals=dict(zip(COORDINATES, (RHO, X, Y, T))))
    return expression.subs({X: real, Y: imaginary}, simultaneous=True) + sp.log(modulus)


def liouville_general(a: float, f: Any) -> sp.Expr:
    r"""Construct the solution :math:`G = \ln(4|f'|^2/(1 + 2a|f|^2)^2)` of :math:`\partial_\zeta\partial_{\bar\zeta}G =
    -ae^G` from a holomorphic function :math:`f`. The function :math:`f = \zeta/2` gives :math:`G = -2\ln D`.
    """
    real, imaginary, modulus = holomorphic_parts(f)
    return sp.log(4 * modulus) - 2 * sp.log(1 + 2 * a * (real**2 + imaginary**2))


def curvature_norm_formula(params: GabcParams, rho: float) -> float:
    r"""Evaluate the closed form :math:`6\nu^2(1 + b^2(b^2 - 4ac)^2(\rho/(b\rho + 2c))^6)` of the curvature norm."""
    W = params.b * rho + 2 * params.c
    if W == 0:
        raise PoleError('b rho + 2c', rho)
    return 6 * params.nu**2 * (1 + params.b**2 * params.discriminant**2 * (rho / W)**6)


def scalar_curvature_formula(params: GabcParams) -> float:
    r"""Scalar curvature :math:`12\nu` of a member."""
    return 12 * params.nu


def scalar_curvature_sign_residual(params: GabcParams, point: Sequence[float]) -> float:
    r"""Compare the sign of the scalar curvature with that of :math:`-(b\rho + 2c)`. The residual is zero when they
    agree and the magnitude of the scalar curvature otherwise.
    """
    point = check_point(params.chart, point)
    scalar = scalar_curvature(gabc_metric(params), point)
    expected = -(params.b * point[0] + 2 * params.c)
    return 0.0 if np.sign(scalar) == np.sign(expected) else abs(scalar)


def cohomogeneity_monotonicity(
        params: GabcParams, interval: Tuple[float, float], steps: int = 200) -> Tuple[bool, float]:
    r"""Check that the curvature norm formula is a strictly monotonic function of :math:`\rho` on the admissible part of
    an interval, which makes :math:`\rho` an invariant of the isometry group.

    Returns whether the formula is strictly monotonic and the smallest relative change between consecutive grid points.
    """
    grid = [r for r in np.linspace(*interval, steps) if params.admissible_rho(r)]
    if len(grid) < 2:
        raise ValueError("The interval contains fewer than two admissible grid points.")
    values = np.array([curvature_norm_formula(params, r) for r in grid])
    changes = np.diff(values) / np.abs(values[:-1])
    strict = bool((changes > 0).all() or (changes < 0).all())
    return strict, float(np.abs(changes).min())


def calibration_constant(params: GabcParams, point: Sequence[float]) -> float:
    r"""Compute the constant that maps the full contraction of the Riemann tensor onto :math:`6\nu^2` on a member with
    :math:`b = 0`, where the closed form is constant.
    """
    if params.b != 0:
        raise ValueError("Calibration needs a member with b = 0.")
    point = check_point(params.chart, point)
    return calibrate_curvature_norm(gabc_metric(params), point, 6 * params.nu**2)
