r"""Rotating Killing fields and the data of the hyper-Kähler/quaternionic Kähler correspondence.

Given a hyper-Kähler metric :math:`g_N` with Kähler form :math:`\omega_1`, a rotating Killing field :math:`Z` with
:math:`\iota_Z\omega_1 = -df_Z`, and a constant :math:`c`, the data consist of the shifted Hamiltonian :math:`f_Z + c`,
the function :math:`f_H = f_Z + g_N(Z, Z)`, the closed two-form :math:`\omega_H = \omega_1 + d(g_N(Z, \cdot))`, and the
endomorphism :math:`I_H = I_1 + 2\nabla Z` with :math:`g_N(I_H\cdot, \cdot) = \omega_H`. Wherever
:math:`d(g_N(Z, Z))` is proportional to :math:`df_Z`, the proportionality factor :math:`\psi` with
:math:`d(g_N(Z, Z)) = 2\psi df_Z` drives the conformal Kähler structure of the quaternionic Kähler side.
"""

import warnings
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.integrate

from ..exceptions import CriterionError, MomentMapError, PoleError, QuadratureError, UnsupportedDimensionError
from ..tensorlab import calculus, jets, operators
from ..tensorlab.curvature import frame_components, frame_residual
from ..tensorlab.fields import (
    EndoField, MetricField, OneForm, PForm, Residual, ScalarField, VectorField, check_point
)
from ..tensorlab.jets import Jet
from ..utilities.algebra import least_squares_residual
from ..utilities.basics import Array, StringRepresentation, format_number


# gradients of the Hamiltonian below this magnitude count as critical points
CRITICAL_GRADIENT = 1e-12

# values of the factors of xi below this magnitude count as poles
POLE_THRESHOLD = 1e-12


class RotatingKillingData(StringRepresentation):
    r"""Hamiltonian data of a rotating Killing field on a hyper-Kähler chart.

    Attributes
    ----------
    g : `MetricField`
        The hyper-Kähler metric :math:`g_N`.
    Z : `VectorField`
        The rotating Killing field.
    f_Z : `ScalarField`
        The Hamiltonian, shifted by ``c_offset``.
    f_H : `ScalarField`
        The function :math:`f_Z + g_N(Z, Z)`.
    norm : `ScalarField`
        The function :math:`g_N(Z, Z)`.
    psi : `ScalarField`
        The least squares factor :math:`\psi` of :math:`d(g_N(Z, Z))` against :math:`2df_Z`.
    omega1 : `PForm`
        The Kähler form :math:`\omega_1`.
    omegaH : `PForm`
        The two-form :math:`\omega_H`.
    I_H : `EndoField`
        The endomorphism :math:`I_H`.
    structures : `tuple of EndoField`
        The available complex structures. Rigid c-map models provide :math:`(I_1, I_2, I_3)` and Boyer-Finley models
        provide :math:`I_1` alone.
    forms : `tuple of PForm`
        The Kähler forms :math:`\omega_k = g_N(I_k\cdot, \cdot)` of the available structures.
    nabla_Z : `EndoField`
        The covariant derivative :math:`\nabla Z`.
    c_offset : `float`
        The constant by which the Hamiltonian was shifted.

    """

    g: MetricField
    Z: VectorField
    f_Z: ScalarField
    f_H: ScalarField
    norm: ScalarField
    psi: ScalarField
    omega1: PForm
    omegaH: PForm
    I_H: EndoField
    structures: Tuple[EndoField, ...]
    forms: Tuple[PForm, ...]
    nabla_Z: EndoField
    c_offset: float

    def __init__(
            self, g: MetricField, Z: VectorField, f_Z: ScalarField, omega1: PForm, c_offset: float = 0.0,
            structures: Optional[Sequence[EndoField]] = None) -> None:
        """Assemble the derived fields."""
        self.g = g
        self.Z = Z
        self.omega1 = omega1
        self.c_offset = float(c_offset)
        self.f_Z = calculus.combine(ScalarField, [f_Z], lambda f: f + self.c_offset, label='f_Z')
        self.norm = calculus.pairing(g, Z, Z)
        self.f_H = calculus.combine(ScalarField, [self.f_Z, self.norm], lambda f, n: f + n, label='f_H')
        self.omegaH = calculus.combine(
            PForm, [omega1, calculus.exterior_derivative(calculus.lower(g, Z))], lambda w, d: w + d, label='omega_H'
        )
        if structures is None:
            structures = [calculus.endomorphism_of(g, omega1)]
        self.structures = tuple(structures)
        self.forms = (omega1,) + tuple(calculus.fundamental_form(g, I) for I in self.structures[1:])
        self.nabla_Z = calculus.covariant_derivative(g, Z)
        self.I_H = calculus.combine(EndoField, [self.I1, self.nabla_Z], lambda i, n: i + 2 * n, label='I_H')
        self.psi = self._build_psi()

    def __str__(self) -> str:
        """Format the data as a string."""
        return (
            f"Rotating Killing data of {self.Z.label or 'Z'} on {self.g.chart.name} with {len(self.structures)} "
            f"complex structures and offset {format_number(self.c_offset)}."
        )

    @property
    def I1(self) -> EndoField:
        """The complex structure whose Kähler form defines the Hamiltonian."""
        return self.structures[0]

    @property
    def dimensions(self) -> int:
        """Dimension of the chart."""
        return self.g.chart.dimensions

    @property
    def quaternionic(self) -> bool:
        """Whether the full triple of complex structures is available."""
        return len(self.structures) == 3

    def _build_psi(self) -> ScalarField:
        """Fit the proportionality factor pointwise, which raises an error at critical points of the Hamiltonian."""
        d_norm = calculus.exterior_derivative(self.norm)
        d_f = calculus.exterior_derivative(self.f_Z)

        def function(coordinates: Sequence[Jet]) -> Any:
            gradient = d_f.evaluate(coordinates)
            if not operators.magnitude(gradient) > CRITICAL_GRADIENT:
                raise MomentMapError([float(c) for c in coordinates])
            return np.dot(d_norm.evaluate(coordinates), gradient) / (2 * np.dot(gradient, gradient))

        return ScalarField.derived(self.g.chart, (), function, label='psi', depth=d_norm.depth)

    def psi_fit(self, point: Sequence[float]) -> Tuple[float, float]:
        r"""Compute :math:`\psi` at a point along with the largest coordinate component of the part of
        :math:`d(g_N(Z, Z))` that :math:`2\psi df_Z` does not explain.
        """
        d_norm = calculus.exterior_derivative(self.norm).value(point)
        d_f = calculus.exterior_derivative(self.f_Z).value(point)
        if not np.abs(d_f).max() > CRITICAL_GRADIENT:
            raise MomentMapError(point)
        coefficients, residual = least_squares_residual(2 * d_f[:, None], d_norm)
        return float(coefficients[0]), residual


def rotating_data(
        g: MetricField, Z: VectorField, f_Z: ScalarField, omega1: PForm, c_offset: float = 0.0,
        structures: Optional[Sequence[EndoField]] = None) -> RotatingKillingData:
    """Assemble the Hamiltonian data of a rotating Killing field."""
    return RotatingKillingData(g, Z, f_Z, omega1, c_offset, structures)


def rotating_residuals(data: RotatingKillingData, point: Sequence[float]) -> Dict[str, Residual]:
    r"""Measure the identities that make :math:`Z` a rotating Killing field with Hamiltonian :math:`f_Z`:
    :math:`L_Zg = 0`, :math:`L_ZI_1 = 0`, and :math:`\iota_Z\omega_1 = -df_Z`, along with :math:`L_ZI_2 = I_3` and
    :math:`L_ZI_3 = -I_2` when the full triple is available.
    """
    point = check_point(data.g.chart, point)
    metric = data.g.value(point)
    residuals = {
        'killing': frame_residual(calculus.lie_derivative_metric(data.g, data.Z).value(point), metric, 'll', point),
        'rotation_I1': frame_residual(calculus.lie_derivative_endo(data.I1, data.Z).value(point), metric, 'ul', point),
        'hamiltonian': frame_residual(
            calculus.interior_product(data.Z, data.omega1).value(point) +
            calculus.exterior_derivative(data.f_Z).value(point), metric, 'l', point
        ),
    }
    if data.quaternionic:
        _, I2, I3 = data.structures
        rotated2 = calculus.lie_derivative_endo(I2, data.Z).value(point) - I3.value(point)
        rotated3 = calculus.lie_derivative_endo(I3, data.Z).value(point) + I2.value(point)
        residuals['rotation_I2'] = frame_residual(rotated2, metric, 'ul', point)
        residuals['rotation_I3'] = frame_residual(rotated3, metric, 'ul', point)
    return residuals


def psi_orbit_residual(data: RotatingKillingData, point: Sequence[float]) -> float:
    r"""Compute :math:`d\psi(Z)`, which vanishes when :math:`\psi` is constant along the orbits of :math:`Z`."""
    contracted = calculus.interior_product(data.Z, calculus.exterior_derivative(data.psi))
    return float(abs(contracted.value(point)))


def integrability_criterion(data: RotatingKillingData, point: Sequence[float]) -> Residual:
    r"""Measure :math:`df_H \wedge df_Z` in a pseudo-orthonormal frame."""
    point = check_point(data.g.chart, point)
    wedge = calculus.wedge(calculus.exterior_derivative(data.f_H), calculus.exterior_derivative(data.f_Z))
    return frame_residual(wedge.value(point), data.g.value(point), 'll', point)


def lemma_chain(data: RotatingKillingData, point: Sequence[float]) -> Dict[str, Residual]:
    r"""Measure three equivalent forms of the integrability criterion side by side: proportionality of
    :math:`d(g_N(Z, Z))` and :math:`df_Z`, the wedge :math:`df_H \wedge df_Z`, and membership of
    :math:`\nabla_ZZ` in the span of :math:`Z` and :math:`I_1Z`.
    """
    point = check_point(data.g.chart, point)
    metric = data.g.value(point)
    _, proportionality = data.psi_fit(point)

    # express vectors in a pseudo-orthonormal frame before projecting
    Z = data.Z.value(point)
    basis = np.column_stack([Z, data.I1.value(point) @ Z])
    target = data.nabla_Z.value(point) @ Z
    transformed_basis = frame_components(basis, metric, 'u')
    transformed_target = frame_components(target, metric, 'u')
    _, membership = least_squares_residual(transformed_basis, transformed_target)
    return {
        'proportionality': Residual(proportionality, proportionality, point, 'coordinate'),
        'wedge': integrability_criterion(data, point),
        'membership': Residual(membership, membership, point, 'orthonormal'),
    }


def require_criterion(data: RotatingKillingData, point: Sequence[float], tolerance: float = 1e-8) -> None:
    r"""Raise an error if the integrability criterion fails at a point, in which case :math:`\psi` is undefined."""
    _, residual = data.psi_fit(point)
    if not residual <= tolerance:
        raise CriterionError(residual)


def prop_IH_checks(data: RotatingKillingData, point: Sequence[float]) -> Dict[str, Residual]:
    r"""Measure :math:`g(I_H\cdot, \cdot) - \omega_H`, the skew-symmetry :math:`g(I_H\cdot, \cdot) + g(\cdot,
    I_H\cdot)`, and the largest commutator :math:`[I_H, I_k]` over the available complex structures.
    """
    point = check_point(data.g.chart, point)
    metric = data.g.value(point)
    I_H = data.I_H.value(point)
    fundamental = operators.fundamental_form(metric, I_H) - data.omegaH.value(point)
    skew = metric @ I_H + (metric @ I_H).T
    commutators = [I_H @ I.value(point) - I.value(point) @ I_H for I in data.structures]
    commutation = max(frame_residual(c, metric, 'ul', point).max_abs for c in commutators)
    return {
        'fundamental': frame_residual(fundamental, metric, 'll', point),
        'skew': frame_residual(skew, metric, 'll', point),
        'commutation': Residual(commutation, commutation, point, 'orthonormal'),
    }


def hyperkahler_forms(data: RotatingKillingData) -> List[OneForm]:
    r"""Construct the one-forms :math:`\alpha_\mu = g_N(I_\mu Z, \cdot)` for :math:`I_0 = \mathrm{Id}` and the available
    complex structures.
    """
    alphas = [calculus.lower(data.g, data.Z)]
    alphas.extend(calculus.lower(data.g, calculus.apply(I, data.Z)) for I in data.structures)
    return alphas


def sigma_tilde(data: RotatingKillingData) -> PForm:
    r"""Construct the two-form :math:`\tilde\sigma`.

    With :math:`F = f_H/f_Z^2` and :math:`G = g_N(Z, Z) = f_H - f_Z`, the full triple gives

    .. math::

       \tilde\sigma = \frac{F}{G}(-\alpha_0 \wedge \alpha_1 + \alpha_2 \wedge \alpha_3) + \frac{1}{f_Z}
       \Bigl(\omega_1 - \frac{\alpha_0 \wedge \alpha_1 + \alpha_2 \wedge \alpha_3}{G}\Bigr),

    where the bracket is the component of :math:`\omega_1` on :math:`(\mathbb{H}Z)^\perp`. In four dimensions that
    component vanishes, which eliminates :math:`\alpha_2 \wedge \alpha_3` and leaves :math:`\tilde\sigma = F\omega_1 -
    2F\alpha_0 \wedge \alpha_1 / G`.
    """
    alphas = hyperkahler_forms(data)
    if data.quaternionic:
        def general(omega: Array, f: Array, f_H: Array, *a: Array) -> Array:
            G = f_H - f
            F = f_H / f**2
            pair01 = operators.wedge(a[0], a[1])
            pair23 = operators.wedge(a[2], a[3])
            return F / G * (pair23 - pair01) + (omega - (pair01 + pair23) / G) / f

        return calculus.combine(PForm, [data.omega1, data.f_Z, data.f_H] + alphas, general, label='sigma~')

    if data.dimensions != 4:
        raise UnsupportedDimensionError

    def conformal(omega: Array, f: Array, f_H: Array, a0: Array, a1: Array) -> Array:
        F = f_H / f**2
        return F * omega - 2 * F * operators.wedge(a0, a1) / (f_H - f)

    return calculus.combine(PForm, [data.omega1, data.f_Z, data.f_H] + alphas[:2], conformal, label='sigma~')


def d_sigma_tilde_formula(data: RotatingKillingData) -> PForm:
    r"""Construct the closed-form expression for :math:`d\tilde\sigma` on models with the full triple.

    With :math:`h = F/G`, :math:`c_1 = -(1 + 2\psi)/f_H + 2/f_Z + 2\psi/G`, :math:`d\alpha_0 = \omega_H - \omega_1`,
    :math:`d\alpha_2 = \omega_3`, :math:`d\alpha_3 = -\omega_2`, and :math:`dG = 2\psi df_Z`,

    .. math::

       d\tilde\sigma = h\bigl((c_1\alpha_2 \wedge \alpha_3 - d\alpha_0) \wedge \alpha_1 + \alpha_2 \wedge \omega_2 +
       \alpha_3 \wedge \omega_3\bigr) + \frac{1}{f_Z^2}\alpha_1 \wedge (\omega_1)_\perp +
       \frac{1}{f_Z}d(\omega_1)_\perp,

    where :math:`d(\omega_1)_\perp = -2\psi G^{-2}\alpha_1 \wedge \alpha_2 \wedge \alpha_3 - G^{-1}(d\alpha_0 \wedge
    \alpha_1 + \alpha_2 \wedge \omega_2 + \alpha_3 \wedge \omega_3)`.
    """
    if not data.quaternionic:
        raise UnsupportedDimensionError
    alphas = hyperkahler_forms(data)
    d_alpha0 = calculus.combine(PForm, [data.omegaH, data.omega1], lambda h, w: h - w)
    _, omega2, omega3 = data.forms

    def formula(
            omega1: Array, omega2: Array, omega3: Array, d_alpha0: Array, f: Array, f_H: Array, psi: Array,
            a0: Array, a1: Array, a2: Array, a3: Array) -> Array:
        G = f_H - f
        h = f_H / (f**2 * G)
        c1 = -(1 + 2 * psi) / f_H + 2 / f + 2 * psi / G
        pair23 = operators.wedge(a2, a3)
        rotation = operators.wedge(a2, omega2) + operators.wedge(a3, omega3)
        perpendicular = omega1 - (operators.wedge(a0, a1) + pair23) / G
        d_perpendicular = (
            -2 * psi / G**2 * operators.wedge(a1, pair23) - (operators.wedge(d_alpha0, a1) + rotation) / G
        )
        return (
            h * (operators.wedge(c1 * pair23 - d_alpha0, a1) + rotation) + operators.wedge(a1, perpendicular) / f**2 +
            d_perpendicular / f
        )

    fields = [data.omega1, omega2, omega3, d_alpha0, data.f_Z, data.f_H, data.psi] + alphas
    n = data.dimensions
    return calculus.combine(PForm, fields, formula, shape=(n, n, n), label='d sigma~')


def sigma_tilde_cross_check(data: RotatingKillingData, point: Sequence[float]) -> Residual:
    r"""Compare the closed-form :math:`d\tilde\sigma` with the exterior derivative of :math:`\tilde\sigma`."""
    point = check_point(data.g.chart, point)
    numerical = calculus.exterior_derivative(sigma_tilde(data)).value(point)
    formula = d_sigma_tilde_formula(data).value(point)
    return frame_residual(numerical - formula, data.g.value(point), 'lll', point)


def sigma_tilde_contraction(data: RotatingKillingData, point: Sequence[float]) -> Residual:
    r"""Measure :math:`\iota_Z\tilde\sigma - (f_H/f_Z^2)df_Z`."""
    point = check_point(data.g.chart, point)
    contracted = calculus.interior_product(data.Z, sigma_tilde(data)).value(point)
    f = float(data.f_Z.value(point))
    f_H = float(data.f_H.value(point))
    expected = f_H / f**2 * calculus.exterior_derivative(data.f_Z).value(point)
    return frame_residual(contracted - expected, data.g.value(point), 'l', point)


def conformal_relation_residual(data: RotatingKillingData, point: Sequence[float]) -> Residual:
    r"""Measure :math:`\omega_H + (f_Z^2/f_H)(1 + 2\psi)\tilde\sigma` in four dimensions."""
    point = check_point(data.g.chart, point)
    f = float(data.f_Z.value(point))
    f_H = float(data.f_H.value(point))
    psi = float(data.psi.value(point))
    difference = data.omegaH.value(point) + f**2 / f_H * (1 + 2 * psi) * sigma_tilde(data).value(point)
    return frame_residual(difference, data.g.value(point), 'll', point)


def xi_factors(data: RotatingKillingData, point: Sequence[float]) -> Dict[str, float]:
    r"""Evaluate the denominators of :math:`\xi` at a point."""
    f = float(data.f_Z.value(point))
    f_H = float(data.f_H.value(point))
    return {'f_Z': f, 'f_H': f_H, 'f_H - f_Z': f_H - f}


def xi_field(data: RotatingKillingData) -> ScalarField:
    r"""Construct :math:`\xi = 2/f_Z - (2 + 4\psi)/f_H + (4 + 4\psi)/(f_H - f_Z)`."""
    def function(f: Array, f_H: Array, psi: Array) -> Array:
        return 2 / f - (2 + 4 * psi) / f_H + (4 + 4 * psi) / (f_H - f)

    return calculus.combine(ScalarField, [data.f_Z, data.f_H, data.psi], function, label='xi')


def xi_formula(data: RotatingKillingData, point: Sequence[float]) -> float:
    r"""Evaluate :math:`\xi` at a point, which raises an error that names a vanishing denominator."""
    point = check_point(data.g.chart, point)
    for factor, value in xi_factors(data, point).items():
        if not abs(value) > POLE_THRESHOLD:
            raise PoleError(factor)
    return float(xi_field(data).value(point))


def check_poles(
        data: RotatingKillingData, start: Sequence[float], end: Sequence[float], steps: int = 64) -> None:
    r"""Raise an error if a denominator of :math:`\xi` vanishes or changes sign on the segment between two points."""
    start = np.asarray(start, dtype=np.float64)
    end = np.asarray(end, dtype=np.float64)
    previous: Optional[Dict[str, float]] = None
    for weight in np.linspace(0, 1, steps + 1):
        point = start + weight * (end - start)
        factors = xi_factors(data, point)
        for factor, value in factors.items():
            crossed = previous is not None and np.sign(previous[factor]) != np.sign(value)
            if not abs(value) > POLE_THRESHOLD or crossed:
                raise PoleError(factor, float(point[0]))
        previous = factors


def phi_by_quadrature(data: RotatingKillingData, base: Sequence[float], coordinate: int = 0) -> ScalarField:
    r"""Integrate :math:`d\phi = \xi df_Z` along one coordinate with :math:`\phi = 0` at the base value of that
    coordinate.

    Values come from adaptive quadrature. Derivatives come from the integrand through the chain rule, which requires
    the integrand to depend on the integration coordinate alone. This holds in four dimensions when the criterion is
    satisfied, since :math:`\psi` and :math:`f_Z` are then functions of each other.
    """
    if data.dimensions != 4:
        raise UnsupportedDimensionError
    integrand = calculus.combine(
        ScalarField, [xi_field(data), calculus.exterior_derivative(data.f_Z)], lambda x, d: x * d[coordinate],
        label='xi df_Z'
    )
    origin = float(base[coordinate])

    def integrate(point: Sequence[float]) -> float:
        end = list(point)
        start = list(point)
        start[coordinate] = origin
        check_poles(data, start, end)

        def evaluate(value: float) -> float:
            moved = list(point)
            moved[coordinate] = value
            return float(integrand.value(moved))

        try:
            with warnings.catch_warnings():
                warnings.simplefilter('error', scipy.integrate.IntegrationWarning)
                return scipy.integrate.quad(evaluate, origin, end[coordinate], epsabs=1e-13, epsrel=1e-12, limit=200)[0]
        except scipy.integrate.IntegrationWarning as exception:
            raise QuadratureError(exception)

    def function(coordinates: Sequence[Jet]) -> Any:
        point = [float(c) for c in coordinates]
        order = coordinates[0].order
        value = integrate(point)
        if order == 0:
            return value
        derivative = integrand.jet(point, order - 1)
        d2 = derivative.first[coordinate] if order >= 2 else 0.0
        d3 = derivative.second[coordinate, coordinate] if order >= 3 else 0.0
        return coordinates[coordinate].compose(value, derivative.value, d2, d3)

    return ScalarField.derived(data.g.chart, (), function, label='phi', depth=max(integrand.depth - 1, 0))


def kahler_residual(data: RotatingKillingData, phi: ScalarField, point: Sequence[float]) -> Residual:
    r"""Measure :math:`d(e^\phi\tilde\sigma) - e^\phi f_Z^{-2}\omega_H \wedge df_Z`, the pulled-back form of the
    closedness of the Kähler form on the quaternionic Kähler side.
    """
    point = check_point(data.g.chart, point)
    scaled = calculus.combine(PForm, [phi, sigma_tilde(data)], lambda p, s: jets.exp(p[()]) * s, shape=(4, 4))
    source = calculus.combine(
        PForm, [phi, data.f_Z, calculus.wedge(data.omegaH, calculus.exterior_derivative(data.f_Z))],
        lambda p, f, w: jets.exp(p[()]) * w / f**2, shape=(4, 4, 4)
    )
    difference = calculus.exterior_derivative(scaled).value(point) - source.value(point)
    return frame_residual(difference, data.g.value(point), 'lll', point)


def xi_identity_residual(data: RotatingKillingData, point: Sequence[float]) -> Residual:
    r"""Measure :math:`d\tilde\sigma + \xi df_Z \wedge \tilde\sigma - f_Z^{-2}\omega_H \wedge df_Z`, which is the
    Kähler condition before integrating :math:`\xi`.
    """
    point = check_point(data.g.chart, point)
    sigma = sigma_tilde(data)
    d_f = calculus.exterior_derivative(data.f_Z)
    f = float(data.f_Z.value(point))
    difference = (
        calculus.exterior_derivative(sigma).value(point) +
        xi_formula(data, point) * calculus.wedge(d_f, sigma).value(point) -
        calculus.wedge(data.omegaH, d_f).value(point) / f**2
    )
    return frame_residual(difference, data.g.value(point), 'lll', point)


def hyperkahler_projector(data: RotatingKillingData) -> EndoField:
    r"""Construct the orthogonal projector :math:`\sum_\mu I_\mu Z \otimes \alpha_\mu / g_N(Z, Z)` onto the span of
    :math:`Z` and its images under the available complex structures.
    """
    vectors = [data.Z] + [calculus.apply(I, data.Z) for I in data.structures]
    alphas = hyperkahler_forms(data)

    def function(norm: Array, *arrays: Array) -> Array:
        half = len(arrays) // 2
        return sum(np.multiply.outer(v, a) for v, a in zip(arrays[:half], arrays[half:])) / norm

    return calculus.combine(EndoField, [data.norm] + vectors + alphas, function, shape=data.g.shape, label='P')
