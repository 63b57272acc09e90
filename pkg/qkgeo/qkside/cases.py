r"""Coordinate changes that identify members of the family :math:`g^{a,b,c}` with known metrics.

Each case maps a chart of new coordinates into the chart :math:`(\rho, x, y, t)` of the family and comes with a target
metric in the new coordinates whose pullback is :math:`g^{a,b,c}`:

- ``'1'``: :math:`a = b = 0` is real hyperbolic space, :math:`-\frac{K}{2\rho^2}(d\rho^2 + dX^2 + dY^2 + dT^2)`.
- ``'2'``: :math:`a = 0 \neq b` is the one-loop deformed universal hypermultiplet, written as the family itself.
- ``'4+'``, ``'4-'``, and ``'8'``: :math:`b = 0` and :math:`a \neq 0` are cohomogeneity one metrics over round or
  hyperbolic two-dimensional fibres, with :math:`\rho = s/r` and :math:`t = s\tau` for :math:`s = \sqrt{|c/a|}`.
- ``'3'``, ``'5'``, ``'6'``, ``'7'``, ``'9'``, and ``'10'``: :math:`ab \neq 0` are Pedersen-type metrics with the
  parameter :math:`k = 4ac/b^2 - 1`. With :math:`B = b/(2a)`, :math:`\epsilon = \pm 1`, and
  :math:`\epsilon' = \mathrm{sign}(a)`, the map is :math:`\rho = B(\epsilon/\varrho^2 - 1)`,
  :math:`\zeta = \sqrt{2/|a|}\,\xi`, and :math:`t = (bK/a)\theta`, and the target is

  .. math::

     -\frac{2K}{(\epsilon - \varrho^2)^2}\left(\frac{\epsilon + k\varrho^2}{1 + k\varrho^4}d\varrho^2 +
     \frac{\epsilon'\varrho^2(\epsilon + k\varrho^2)}{(1 + \epsilon'|\xi|^2)^2}|d\xi|^2 +
     \frac{\varrho^2(1 + k\varrho^4)}{\epsilon + k\varrho^2}\varphi^2\right), \quad
     \varphi = \frac{1}{2}d\theta - \frac{\epsilon'(Y\,dX - X\,dY)}{1 + \epsilon'|\xi|^2}.

  The sign :math:`\epsilon` is :math:`-1` for ``'6'`` and ``'10'``, where :math:`\epsilon b(2a\rho + b) > 0` selects the
  other side of :math:`2a\rho + b = 0`. Case ``'6'`` with :math:`c = 0` is the Fubini-Study metric.

"""

import math
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from .family import GabcParams, gabc_expressions, gabc_metric
from ..exceptions import CasePreconditionError
from ..hkside.boyer_finley import COORDINATES, RHO
from ..tensorlab.curvature import frame_components
from ..tensorlab.fields import Chart, MetricField, Residual, TensorField, check_point, metric, symmetric_square
from ..utilities.basics import Array, StringRepresentation


# identifiers of the cases in the order in which they are listed
CASES = ('1', '2', '3', '4+', '4-', '5', '6', '7', '8', '9', '10')

# signs epsilon of the Pedersen-type cases and the conditions on (a, b) under which they apply
PEDERSEN_CASES: Dict[str, Tuple[int, Callable[[float, float], bool]]] = {
    '3': (1, lambda a, b: a > 0 and b > 0),
    '5': (1, lambda a, b: a > 0 > b),
    '6': (-1, lambda a, b: a > 0 > b),
    '7': (1, lambda a, b: a < 0 and b < 0),
    '9': (1, lambda a, b: a < 0 < b),
    '10': (-1, lambda a, b: a < 0 < b),
}


class CaseTransform(StringRepresentation):
    r"""A coordinate change from a chart of new coordinates into the chart of a family member.

    Attributes
    ----------
    case : `str`
        Identifier of the case.
    description : `str`
        Name of the identified metric.
    params : `GabcParams`
        The family member, restricted to the part of its domain that the case covers.
    chart : `Chart`
        Chart of the new coordinates.
    forward : `TensorField`
        The old coordinates as functions of the new ones.
    target : `MetricField`
        The target metric in the new coordinates.
    k : `float or None`
        The Pedersen parameter :math:`k = 4ac/b^2 - 1` of Pedersen-type cases.

    """

    case: str
    description: str
    params: GabcParams
    chart: Chart
    forward: TensorField
    target: MetricField
    k: Optional[float]
    _inverse: Callable[[Array], Array]

    def __init__(
            self, case: str, description: str, params: GabcParams, chart: Chart, forward: Sequence[Any],
            target: Any, inverse: Callable[[Array], Array], k: Optional[float] = None) -> None:
        """Declare the fields of the transform."""
        self.case = case
        self.description = description
        self.params = params
        self.chart = chart
        self.forward = TensorField.from_expressions(chart, list(forward), 'Phi')
        self.target = metric(chart, target, f'target[{case}]')
        self._inverse = inverse
        self.k = k

    def __str__(self) -> str:
        """Format the transform as a string."""
        k = "" if self.k is None else f" with k = {self.k:g}"
        return f"Case {self.case}: {self.params.chart.name} as {self.description}{k}."

    def inverse(self, point: Sequence[float]) -> Array:
        """Map a point of the family's chart to new coordinates."""
        return self._inverse(np.asarray(point, dtype=np.float64))

    def pullback(self, point: Sequence[float]) -> Array:
        r"""Pull the target metric back to a point of the family's chart, :math:`\Phi^*g = J^\top g J` with the Jacobian
        :math:`J` of the forward map at the corresponding new point.
        """
        new = self.inverse(point)
        jacobian = self.forward.stacked(new, 1)[1]
        return jacobian.T @ self.target.value(new) @ jacobian

    def pullback_residual(self, point: Sequence[float], g: Optional[MetricField] = None) -> Residual:
        """Summarize the difference between the pulled-back target and the family member in an orthonormal frame."""
        point = check_point(self.params.chart, point)
        value = (g or gabc_metric(self.params)).value(point)
        return Residual.of_array(frame_components(self.pullback(point) - value, value, 'll'), point, 'orthonormal')

    def roundtrip_residual(self, point: Sequence[float]) -> float:
        """Compute the largest deviation of the forward map composed with the inverse map from the identity."""
        point = check_point(self.params.chart, point)
        return float(np.abs(self.forward.value(self.inverse(point)) - np.asarray(point)).max())


def case_transform(case: str, params: GabcParams) -> CaseTransform:
    """Construct the coordinate change of a case, which raises an error unless the parameters satisfy its precondition
    and its part of the domain meets the sampling box.
    """
    case = str(case)
    if case not in CASES:
        raise ValueError(f"case must be one of {list(CASES)}.")
    a, b, c = params.a, params.b, params.c
    if case == '1':
        builder, admissible = _hyperbolic_space, a == 0 and b == 0
    elif case == '2':
        builder, admissible = _universal_hypermultiplet, a == 0 and b != 0
    elif case in {'4+', '4-', '8'}:
        signs = {'4+': (1, 1), '4-': (1, -1), '8': (-1, 1)}[case]
        builder, admissible = _cohomogeneity_one, b == 0 and (np.sign(a), np.sign(c)) == signs
    else:
        builder, admissible = _pedersen, PEDERSEN_CASES[case][1](a, b)
    if not admissible:
        raise CasePreconditionError(case)
    try:
        return builder(case, params)
    except ValueError:
        raise CasePreconditionError(case)


def _hyperbolic_space(case: str, params: GabcParams) -> CaseTransform:
    """Map the a = b = 0 member onto real hyperbolic space in horospherical coordinates."""
    names = ('rho', 'X', 'Y', 'T')
    rho, X, Y, T = sp.symbols(names, real=True)
    K = params.K
    scale = math.sqrt(2 * params.c)
    chart = Chart('hyperbolic', names, params.bounds, ['rho'])
    weight = -K / (2 * rho**2)
    target = symmetric_square(np.eye(4).tolist(), [weight] * 4)

    def inverse(point: Array) -> Array:
        return np.array([point[0], scale * point[1], scale * point[2], point[3] / (2 * K)])

    forward = [rho, X / scale, Y / scale, 2 * K * T]
    return CaseTransform(case, "real hyperbolic space", params, chart, forward, target, inverse)


def _universal_hypermultiplet(case: str, params: GabcParams) -> CaseTransform:
    """Map the a = 0 member onto itself."""
    symbols = sp.symbols(COORDINATES, real=True)
    chart = Chart('hypermultiplet', COORDINATES, params.bounds, ['rho'])
    return CaseTransform(
        case, "the deformed universal hypermultiplet", params, chart, list(symbols), gabc_expressions(params),
        lambda point: np.array(point, dtype=np.float64)
    )


def _cohomogeneity_one(case: str, params: GabcParams) -> CaseTransform:
    r"""Map a b = 0 member onto a metric of the form :math:`\pm\frac{K}{2}(dr^2/h + h(d\tau/2K)^2 + r^2g_\Sigma)` with
    :math:`h = 1 + r^2`, :math:`1 - r^2`, or :math:`r^2 - 1`.
    """
    names = ('r', 'X', 'Y', 'tau')
    r, X, Y, tau = sp.symbols(names, real=True)
    a, c, K = params.a, params.c, params.K
    s = math.sqrt(abs(c / a))
    stretch = math.sqrt(2 / abs(a))
    curvature = np.sign(a)
    h = {'4+': 1 + r**2, '4-': 1 - r**2, '8': r**2 - 1}[case]
    prefactor = K / 2 if case == '4-' else -K / 2
    fibre = 4 / (1 + curvature * (X**2 + Y**2))**2
    chart = Chart(f'cohomogeneity[{case}]', names, [(0.01, 10.0), (-10.0, 10.0), (-10.0, 10.0), (-10.0, 10.0)], [r, h])
    weights = [prefactor / h, prefactor * r**2 * fibre, prefactor * r**2 * fibre, prefactor * h / (4 * K**2)]
    target = symmetric_square(np.eye(4).tolist(), weights)

    def inverse(point: Array) -> Array:
        return np.array([s / point[0], point[1] / stretch, point[2] / stretch, point[3] / s])

    forward = [s / r, stretch * X, stretch * Y, s * tau]
    description = {
        '4+': "a cohomogeneity one metric with round fibres and hyperbolic end",
        '4-': "a cohomogeneity one metric with round fibres and a spherical cap",
        '8': "a cohomogeneity one metric with hyperbolic fibres",
    }[case]
    return CaseTransform(case, description, params, chart, forward, target, inverse)


def _pedersen(case: str, params: GabcParams) -> CaseTransform:
    """Map a member with ab != 0 onto a Pedersen-type metric."""
    epsilon = PEDERSEN_CASES[case][0]
    a, b, K = params.a, params.b, params.K
    sign = 1 if a > 0 else -1
    B = b / (2 * a)
    stretch = math.sqrt(2 / abs(a))
    k = params.k

    # restrict the member to its side of 2a rho + b = 0
    restricted = params.restrict([epsilon * np.sign(b) * (2 * a * RHO + b)])

    names = ('varrho', 'X', 'Y', 'theta')
    varrho, X, Y, theta = sp.symbols(names, real=True)
    bounds = [(0.01, 10.0), (-10.0, 10.0), (-10.0, 10.0), (-100.0, 100.0)]
    denominator = 1 + sign * (X**2 + Y**2)
    chart = Chart(f'pedersen[{case}]', names, bounds, [varrho, denominator])
    level = epsilon + k * varrho**2
    quartic = 1 + k * varrho**4
    prefactor = -2 * K / (epsilon - varrho**2)**2
    planar = prefactor * sign * varrho**2 * level / denominator**2
    fibre = [0, -sign * Y / denominator, sign * X / denominator, sp.Rational(1, 2)]
    target = symmetric_square(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], fibre],
        [prefactor * level / quartic, planar, planar, prefactor * varrho**2 * quartic / level]
    )

    def inverse(point: Array) -> Array:
        squared = epsilon * b / (2 * a * point[0] + b)
        return np.array([np.sqrt(squared), point[1] / stretch, point[2] / stretch, a * point[3] / (b * K)])

    forward = [B * (epsilon / varrho**2 - 1), stretch * X, stretch * Y, b * K / a * theta]
    description = "the Pedersen metric" if epsilon == 1 and a > 0 and b > 0 else "a Pedersen-type metric"
    if case == '6' and params.c == 0:
        description = "the Fubini-Study metric"
    return CaseTransform(case, description, restricted, chart, forward, target, inverse, k)


def available_cases(params: GabcParams) -> List[str]:
    """List the cases whose preconditions a family member satisfies."""
    cases: List[str] = []
    for case in CASES:
        try:
            case_transform(case, params)
        except CasePreconditionError:
            continue
        cases.append(case)
    return cases
