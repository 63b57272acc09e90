"""Named checks and the specifications with which they run."""

import time
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp

from .models import Model
from .. import options
from ..configurations.sampling import SamplePlan
from ..exceptions import FibreDerivativeError, NotApplicableError, RegistryError
from ..hkside.cmap import highdim_condition
from ..hkside.rotating import (
    integrability_criterion, kahler_residual, phi_by_quadrature, prop_IH_checks, rotating_residuals,
    sigma_tilde_cross_check
)
from ..qkside.family import (
    curvature_norm_formula, gabc_metric, liouville_residual, scalar_curvature_sign_residual
)
from ..qkside.hermitian import hermitian_pair, lee_closed_residual, nijenhuis_residual, opposition_residual
from ..qkside.killing import classify_algebra
from ..qkside.singularity import singularity_distance, singularity_root
from ..tensorlab.curvature import covariant_derivative_riemann, curvature_norm, einstein_residual, frame_residual
from ..tensorlab.fields import scalar
from ..utilities.basics import Array, Point, StringRepresentation, format_number, generate_items, output_progress


# pairs of points and measured quantities, along with details worth reporting
Measurement = Tuple[List[Tuple[Point, float]], Dict[str, Any]]

# an expectation is a verdict that the check should reach or a value that its quantity should match
Expectation = Union[str, float]

# largest covariant derivative of the rotating field along fibre directions that the deviation check accepts
VERTICAL_TOLERANCE = 1e-10


class Check(StringRepresentation):
    """A named identity that can be measured on the models to which it applies.

    Attributes
    ----------
    name : `str`
        Name of the check.
    description : `str`
        What the check measures.
    target : `str`
        Default target.
    tolerance : `float`
        Default tolerance. For expected failures, this is the floor that the residual must exceed.
    samples : `int`
        Default number of sample points.
    frame : `str`
        Frame in which residual components are measured, either ``'coordinate'`` or ``'orthonormal'``.
    control : `str or None`
        A registered negative control on which the check fails.

    """

    name: str
    description: str
    target: str
    tolerance: float
    samples: int
    frame: str
    control: Optional[str]
    _expected: Union[Expectation, Callable[[Model], Expectation]]
    _applies: Callable[[Model], bool]
    _measure: Callable[[Model, SamplePlan], Measurement]

    def __init__(
            self, name: str, description: str, target: str, tolerance: float, samples: int,
            applies: Callable[[Model], bool], measure: Callable[[Model, SamplePlan], Measurement],
            expected: Union[Expectation, Callable[[Model], Expectation]] = 'pass', frame: str = 'orthonormal',
            control: Optional[str] = None) -> None:
        """Store the definition."""
        self.name = name
        self.description = description
        self.target = target
        self.tolerance = tolerance
        self.samples = samples
        self.frame = frame
        self.control = control
        self._expected = expected
        self._applies = applies
        self._measure = measure

    def __str__(self) -> str:
        """Format the check as a string."""
        return f"{self.name}: {self.description}"

    def applies(self, model: Model) -> bool:
        """Decide whether the check can be measured on a model."""
        try:
            return bool(self._applies(model))
        except (NotApplicableError, ValueError):
            return False

    def expected(self, model: Model) -> Expectation:
        """The expectation of the check on a model."""
        return self._expected(model) if callable(self._expected) else self._expected

    @property
    def expectation(self) -> str:
        """The expectation as it is listed, which depends on the target when it is not fixed."""
        if callable(self._expected):
            return "depends on target"
        return self._expected if isinstance(self._expected, str) else format_number(self._expected)

    def measure(self, model: Model, plan: SamplePlan) -> Measurement:
        """Measure the check's quantity on a model at the points of a sample plan."""
        return self._measure(model, plan)


class CheckSpec(StringRepresentation):
    """Specification of a single run of a check.

    Parameters
    ----------
    name : `str`
        Name of a registered check.
    target : `str, optional`
        Target identifier. By default, the check's default target is used.
    tolerance : `float, optional`
        Positive tolerance. By default, the check's default tolerance is used.
    sample_count : `int, optional`
        Positive number of sample points. By default, the check's default number is used.
    seed : `int, optional`
        Seed of the sample plan. By default, ``options.seed`` is used.
    expected : `str or float, optional`
        Either ``'pass'``, ``'fail'``, or a value that the measured quantity should match within the tolerance. By
        default, the check's expectation on the target is used.

    """

    name: str
    target: str
    tolerance: float
    sample_count: int
    seed: int
    expected: Optional[Expectation]

    def __init__(
            self, name: str, target: Optional[str] = None, tolerance: Optional[float] = None,
            sample_count: Optional[int] = None, seed: Optional[int] = None,
            expected: Optional[Expectation] = None) -> None:
        """Validate the specification and fill in defaults."""
        if name not in CHECKS:
            raise RegistryError(name, CHECKS)
        check = CHECKS[name]
        self.name = name
        self.target = check.target if target is None else target
        self.tolerance = check.tolerance if tolerance is None else tolerance
        self.sample_count = check.samples if sample_count is None else sample_count
        self.seed = options.seed if seed is None else seed
        self.expected = expected
        if not isinstance(self.target, str):
            raise TypeError("target must be a str.")
        if not isinstance(self.tolerance, (int, float)) or not self.tolerance > 0:
            raise ValueError("tolerance must be a positive float.")
        if not isinstance(self.sample_count, int) or self.sample_count < 1:
            raise ValueError("sample_count must be a positive integer.")
        if not isinstance(self.seed, int):
            raise ValueError("seed must be an integer.")
        if expected is not None and expected not in {'pass', 'fail'} and not isinstance(expected, (int, float)):
            raise ValueError("expected must be 'pass', 'fail', or a float.")
        self.tolerance = float(self.tolerance)

    def __str__(self) -> str:
        """Format the specification as a string."""
        return (
            f"Check '{self.name}' on '{self.target}' with tolerance {format_number(self.tolerance)}, "
            f"{self.sample_count} samples, and seed {self.seed}."
        )

    @property
    def check(self) -> Check:
        """The registered check."""
        return CHECKS[self.name]

    def replace(self, **kwargs: Any) -> 'CheckSpec':
        """Copy the specification with some fields replaced."""
        fields = {
            'target': self.target, 'tolerance': self.tolerance, 'sample_count': self.sample_count, 'seed': self.seed,
            'expected': self.expected
        }
        fields.update(kwargs)
        return CheckSpec(self.name, **fields)

    def plan(self) -> SamplePlan:
        """Build the sample plan of the specification."""
        return SamplePlan('halton', self.sample_count, {'seed': self.seed})


def evaluate_points(points: Array, function: Callable[[Point], float]) -> List[Tuple[Point, float]]:
    """Evaluate a function at each point, in parallel if a pool is available, and keep the order of the points."""
    points = [tuple(float(c) for c in p) for p in points]
    items = generate_items(range(len(points)), lambda i: (points[i],), function)
    return [(points[i], float(q)) for i, q in output_progress(items, len(points), time.time())]


def measure_toda(model: Model, plan: SamplePlan) -> Measurement:
    """Measure the continuous Toda equation."""
    return evaluate_points(plan.sample(model.chart), model.solution.toda_residual), {}


def measure_liouville(model: Model, plan: SamplePlan) -> Measurement:
    r"""Measure the Liouville equation for :math:`G = u - \ln Q`."""
    solution = model.solution
    G = scalar(solution.chart, solution.expression - sp.log(model.params.Q), 'G')
    a = model.params.a
    return evaluate_points(plan.sample(model.chart), lambda p: liouville_residual(G, a, p)), {}


def measure_einstein(model: Model, plan: SamplePlan) -> Measurement:
    """Measure the traceless Ricci tensor, the drift of the Einstein constant, and, on family members, whether the
    sign of the scalar curvature matches that of the radial factor.
    """
    g = model.g
    points = plan.sample(model.chart)
    reference = model.einstein_constant
    if reference is None:
        reference = einstein_residual(g, points[0])[0]

    def function(point: Point) -> float:
        constant, deviation = einstein_residual(g, point)
        magnitude = max(float(np.abs(deviation).max()), abs(constant - reference))
        if model.family:
            magnitude = max(magnitude, scalar_curvature_sign_residual(model.params, point))
        return magnitude

    return evaluate_points(points, function), {'einstein_constant': float(reference)}


def measure_killing(model: Model, plan: SamplePlan) -> Measurement:
    """Measure the Lie derivatives of the model's metric along the Killing fields of its member."""
    catalog = model.catalog
    return evaluate_points(plan.sample(model.chart), lambda p: catalog.killing_residual(p).max_abs), {}


def measure_rotating(model: Model, plan: SamplePlan) -> Measurement:
    """Measure the identities of a rotating Killing field with its Hamiltonian."""
    data = model.data

    def function(point: Point) -> float:
        return max(r.max_abs for r in rotating_residuals(data, point).values())

    return evaluate_points(plan.sample(model.chart), function), {}


def measure_criterion(model: Model, plan: SamplePlan) -> Measurement:
    r"""Measure the integrability criterion :math:`df_H \wedge df_Z = 0`."""
    data = model.data
    return evaluate_points(plan.sample(model.chart), lambda p: integrability_criterion(data, p).max_abs), {}


def measure_prop_ih(model: Model, plan: SamplePlan) -> Measurement:
    r"""Measure the compatibility of :math:`I_H` with :math:`\omega_H` and the complex structures."""
    data = model.data

    def function(point: Point) -> float:
        return max(r.max_abs for r in prop_IH_checks(data, point).values())

    return evaluate_points(plan.sample(model.chart), function), {}


def measure_sigma_tilde(model: Model, plan: SamplePlan) -> Measurement:
    r"""Compare the closed-form :math:`d\tilde\sigma` with the numerical exterior derivative."""
    data = model.data
    return evaluate_points(plan.sample(model.chart), lambda p: sigma_tilde_cross_check(data, p).max_abs), {}


def measure_xi_kahler(model: Model, plan: SamplePlan) -> Measurement:
    r"""Integrate :math:`\phi` from the first sample point and measure the closedness of :math:`e^\phi\tilde\sigma`."""
    data = model.data
    points = plan.sample(model.chart)
    phi = phi_by_quadrature(data, points[0])
    return evaluate_points(points, lambda p: kahler_residual(data, phi, p).max_abs), {'base': float(points[0][0])}


def measure_highdim(model: Model, plan: SamplePlan) -> Measurement:
    r"""Measure the deviation of :math:`\nabla Z` from :math:`-\frac{1}{2}I_1` on :math:`(\mathbb{H}Z)^\perp`, recording
    the largest :math:`\nabla_VZ` along fibre directions as a detail. A fibre derivative above
    :data:`VERTICAL_TOLERANCE` raises an error, which fails the check.
    """
    vertical = []

    def function(point: Point) -> float:
        residuals = highdim_condition(model.cmap, point)
        vertical.append(residuals['vertical'].max_abs)
        return residuals['deviation'].max_abs

    pairs = evaluate_points(plan.sample(model.chart), function)
    if not max(vertical) <= VERTICAL_TOLERANCE:
        raise FibreDerivativeError(max(vertical))
    return pairs, {'vertical': max(vertical)}


def j1_tilde_residual(residual: Callable) -> Callable[[Model, SamplePlan], Measurement]:
    r"""Build a measurement of a residual of :math:`\tilde J_1` on the Przanowski-Tod view of a model."""
    def measure(model: Model, plan: SamplePlan) -> Measurement:
        pt = model.pt
        _, J = hermitian_pair(pt)
        return evaluate_points(plan.sample(model.chart), lambda p: residual(pt, J, p).max_abs), {}

    return measure


def measure_orientation(model: Model, plan: SamplePlan) -> Measurement:
    r"""Measure whether a pair of structures induces opposite orientations. The pair is :math:`(J_1, \tilde J_1)` on
    Przanowski-Tod views and :math:`(I_1, I_2)` on the four-dimensional rigid c-map model, where it should not be.
    """
    if model.kind == 'cmap':
        g, (J, J_other) = model.g, model.cmap.structures[:2]
    else:
        g, (J, J_other) = model.pt.g, hermitian_pair(model.pt)
    return evaluate_points(plan.sample(model.chart), lambda p: opposition_residual(g, J, J_other, p)), {}


def measure_algebra(model: Model, plan: SamplePlan) -> Measurement:
    """Classify the algebra of the Killing fields from brackets at the sample points. The quantity is zero when the
    fields preserve the model's metric within ``options.killing_atol`` and their classification matches the expected
    algebra, and one otherwise.
    """
    catalog = model.catalog
    points = plan.sample(model.chart)
    label = classify_algebra(catalog, points)
    killing = max(catalog.killing_residual(p).max_abs for p in points)
    details = {'algebra': label, 'expected_algebra': catalog.expected_algebra, 'killing': killing}
    matched = label == catalog.expected_algebra and killing <= options.killing_atol
    return [((), 0.0 if matched else 1.0)], details


def measure_case_transform(model: Model, plan: SamplePlan) -> Measurement:
    """Pull back the target metric of each case and compare it with the family member, or with the model's metric on
    negative controls, along with the roundtrip of the coordinate change.
    """
    pairs: List[Tuple[Point, float]] = []
    details: Dict[str, Any] = {}
    for transform in model.transforms:
        g = gabc_metric(transform.params) if model.family else model.g

        def function(point: Point) -> float:
            return max(transform.pullback_residual(point, g).max_abs, transform.roundtrip_residual(point))

        pairs.extend(evaluate_points(plan.sample(transform.params.chart), function))
        details[f'case {transform.case}'] = transform.description
        if transform.k is not None:
            details[f'k {transform.case}'] = transform.k
    return pairs, details


def measure_curvnorm(model: Model, plan: SamplePlan) -> Measurement:
    """Compare the numerical curvature norm with the closed form, relative to the closed form."""
    g = model.g

    def function(point: Point) -> float:
        formula = curvature_norm_formula(model.params, point[0])
        return abs(curvature_norm(g, point) - formula) / abs(formula)

    return evaluate_points(plan.sample(model.chart), function), {}


def measure_symmetric(model: Model, plan: SamplePlan) -> Measurement:
    r"""Measure :math:`\nabla R` in an orthonormal frame."""
    g = model.g

    def function(point: Point) -> float:
        return frame_residual(covariant_derivative_riemann(g, point), g.value(point), 'ullll', point).max_abs

    return evaluate_points(plan.sample(model.chart), function), {}


def measure_singularity_distance(model: Model, plan: SamplePlan) -> Measurement:
    """Integrate the distance from the hypersurface through each sample point to the curvature singularity. The
    quantity is the error bound of the quadrature, or infinity if no singularity can be reached from the point.
    """
    distances = []

    def function(point: Point) -> float:
        try:
            distance, error = singularity_distance(model.params, point[0])
        except NotApplicableError:
            distance = error = np.inf
        distances.append(distance)
        return error if np.isfinite(distance) else np.inf

    pairs = evaluate_points(plan.sample(model.chart), function)
    details = {'root': singularity_root(model.params) if has_singularity(model) else None}
    details.update({'shortest': min(distances), 'longest': max(distances)})
    return pairs, details


def has_singularity(model: Model) -> bool:
    """Decide whether a family target has a curvature singularity adjacent to its domain."""
    if not model.family:
        return False
    try:
        singularity_root(model.params)
    except NotApplicableError:
        return False
    return True


def singularity_expectation(model: Model) -> Expectation:
    """The distance to the curvature singularity is finite exactly on members that have one."""
    return 'pass' if has_singularity(model) else 'fail'


def orientation_expectation(model: Model) -> Expectation:
    """Complex structures of a hyper-Kähler triple induce the same orientation, unlike the Hermitian pair."""
    return 'fail' if model.kind == 'cmap' else 'pass'


def symmetric_expectation(model: Model) -> Expectation:
    r"""Family members are locally symmetric exactly when :math:`bc(b^2 - 4ac) = 0`, and flat models always are."""
    if model.family and not model.params.locally_symmetric:
        return 'fail'
    return 'pass'


def has_solution(model: Model) -> bool:
    return model.kind in {'bf', 'gabc', 'case'}


def has_data(model: Model) -> bool:
    return model.kind in {'bf', 'cmap'}


def has_pt(model: Model) -> bool:
    return model.kind in {'gabc', 'case'}


# registered checks in the order in which they are listed and run
CHECKS: Dict[str, Check] = {c.name: c for c in [
    Check(
        'toda', "continuous Toda equation of the solution", 'bf:0,1,1,-1', 1e-9, 50, has_solution, measure_toda,
        frame='coordinate', control='bf:perturbed'
    ),
    Check(
        'liouville', "Liouville equation of u - ln Q", 'gabc:1,1,1,-1', 1e-9, 50, has_solution, measure_liouville,
        frame='coordinate', control='gabc:perturbed'
    ),
    Check(
        'einstein', "Einstein equation with the expected constant", 'gabc:0,1,1,-1', 1e-7, 20,
        lambda m: True, measure_einstein, control='gabc:perturbed'
    ),
    Check(
        'killing', "Killing equation of the four Killing fields", 'gabc:1,1,1,-1', 1e-9, 20, has_pt, measure_killing,
        control='gabc:perturbed'
    ),
    Check(
        'rotating', "rotating Killing field with its Hamiltonian", 'cmap:2', 1e-9, 20, has_data, measure_rotating,
        control='cmap:perturbed'
    ),
    Check(
        'criterion', "integrability criterion df_H ^ df_Z = 0", 'bf:0,1,1,-1', 1e-9, 20, has_data,
        measure_criterion, control='bf:perturbed'
    ),
    Check(
        'prop_ih', "compatibility of I_H with omega_H and the complex structures", 'cmap:2', 1e-9, 20, has_data,
        measure_prop_ih, control='cmap:perturbed'
    ),
    Check(
        'sigma_tilde', "closed form of the exterior derivative of sigma~", 'cmap:2', 1e-8, 10,
        lambda m: m.kind == 'cmap', measure_sigma_tilde, control='cmap:perturbed'
    ),
    Check(
        'xi_kahler', "closedness of the Kähler form after integrating xi", 'bf:0,1,1,-1', 1e-7, 5,
        lambda m: m.kind == 'bf', measure_xi_kahler, control='bf:perturbed'
    ),
    Check(
        'highdim', "deviation of nabla Z from -I_1/2 off the quaternionic span", 'cmap:2', 1e-8, 10,
        lambda m: m.kind == 'cmap' and m.n >= 2, measure_highdim, expected=0.5
    ),
    Check(
        'nijenhuis', "Nijenhuis tensor of J~_1", 'gabc:0,1,1,-1', 1e-8, 10, has_pt,
        j1_tilde_residual(nijenhuis_residual), control='gabc:perturbed'
    ),
    Check(
        'lee_closed', "exterior derivative of the Lee form of J~_1", 'gabc:0,1,1,-1', 1e-8, 10, has_pt,
        j1_tilde_residual(lee_closed_residual), control='gabc:perturbed'
    ),
    Check(
        'orientation', "opposite orientations of J_1 and J~_1", 'gabc:0,1,1,-1', 0.5, 10,
        lambda m: has_pt(m) or (m.kind == 'cmap' and m.n == 1), measure_orientation,
        expected=orientation_expectation, control='cmap:1'
    ),
    Check(
        'algebra', "classification of the isometry algebra", 'gabc:1,1,1,-1', 0.5, 6,
        lambda m: has_pt(m) and m.params.b != 0, measure_algebra, frame='coordinate', control='gabc:perturbed'
    ),
    Check(
        'case_transform', "pullbacks of the target metrics of the cases", 'case:3', 1e-8, 20,
        lambda m: bool(m.transforms), measure_case_transform, control='case:perturbed'
    ),
    Check(
        'curvnorm', "curvature norm against its closed form, relative", 'gabc:0,1,1,-1', 1e-6, 20, has_pt,
        measure_curvnorm, control='gabc:perturbed'
    ),
    Check(
        'symmetric', "covariant derivative of the curvature tensor", 'gabc:0,0,1,-1', 1e-8, 10,
        lambda m: m.family or m.kind == 'cmap', measure_symmetric, expected=symmetric_expectation,
        control='gabc:0,1,1,-1'
    ),
    Check(
        'singularity_distance', "quadrature error of the distance to the curvature singularity", 'gabc:1,-1,1,-1',
        1e-6, 10, lambda m: m.family, measure_singularity_distance, expected=singularity_expectation,
        frame='coordinate', control='gabc:1,1,1,-1'
    ),
]}


def registered_checks() -> List[Check]:
    """List the registered checks in a stable order."""
    return list(CHECKS.values())


def applicable_checks(model: Model) -> List[str]:
    """List the names of the checks that apply to a model."""
    return [c.name for c in CHECKS.values() if c.applies(model)]


def resolve_checks(names: Union[str, Sequence[str]]) -> List[str]:
    """Validate check names, where ``'all'`` stands for every registered check."""
    if names == 'all' or list(names) == ['all']:
        return list(CHECKS)
    names = [names] if isinstance(names, str) else list(names)
    for name in names:
        if name not in CHECKS:
            raise RegistryError(name, CHECKS)
    return names
