"""Charts and tensor fields that are evaluated through jets."""

import functools
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from . import jets
from .jets import Jet
from .. import options
from ..exceptions import DomainError, FieldNumericalError, JetOrderError
from ..utilities.basics import Array, Point, StringRepresentation, format_number, format_point


class Chart(StringRepresentation):
    r"""A coordinate chart with a domain given by strict inequalities.

    Parameters
    ----------
    name : `str`
        Label used in reports.
    coordinates : `sequence of str`
        Names of the coordinates, which are also the names of the SymPy symbols in which fields on the chart are
        expressed.
    bounds : `sequence of tuple`
        Box from which points are sampled, one ``(lower, upper)`` pair per coordinate.
    constraints : `sequence of str or Expr`, optional
        Expressions in the coordinates that must be positive on the domain. A point is admissible with margin
        :math:`\delta` when every constraint exceeds :math:`\delta`.

    """

    name: str
    coordinates: Tuple[str, ...]
    symbols: Tuple[sp.Symbol, ...]
    bounds: Array
    constraints: List[sp.Expr]
    _constraint_function: Optional[Callable]

    def __init__(
            self, name: str, coordinates: Sequence[str], bounds: Sequence[Tuple[float, float]],
            constraints: Sequence[Any] = ()) -> None:
        """Validate the chart and compile its constraints."""
        if len(coordinates) < 2:
            raise ValueError("Charts must have at least two coordinates.")
        if len(bounds) != len(coordinates):
            raise ValueError("bounds must have one (lower, upper) pair per coordinate.")
        self.name = name
        self.coordinates = tuple(coordinates)
        self.symbols = tuple(sp.Symbol(c, real=True) for c in coordinates)
        self.bounds = np.array(bounds, dtype=options.dtype)
        if (self.bounds[:, 0] >= self.bounds[:, 1]).any():
            raise ValueError("Each lower bound must be less than its upper bound.")
        namespace = dict(zip(self.coordinates, self.symbols))
        self.constraints = [sp.sympify(c, locals=namespace) for c in constraints]
        self._constraint_function = None
        if self.constraints:
            self._constraint_function = sp.lambdify(self.symbols, self.constraints, modules='math')

    def __str__(self) -> str:
        """Format the chart as a string."""
        constraints = ", ".join(f"{c} > 0" for c in self.constraints) or "none"
        return f"Chart {self.name} with coordinates ({', '.join(self.coordinates)}) and constraints {constraints}."

    @property
    def dimensions(self) -> int:
        """Number of coordinates."""
        return len(self.coordinates)

    def constraint_values(self, point: Sequence[float]) -> Array:
        """Evaluate the domain constraints at a point."""
        if self._constraint_function is None:
            return np.zeros(0)
        try:
            return np.array(self._constraint_function(*point), dtype=options.dtype)
        except (ValueError, ZeroDivisionError, OverflowError):
            return np.array([-np.inf])

    def contains(self, point: Sequence[float], margin: Optional[float] = None) -> bool:
        """Decide whether a point satisfies every domain constraint with a margin."""
        if margin is None:
            margin = options.margin
        if len(point) != self.dimensions or not np.isfinite(point).all():
            return False
        return bool((self.constraint_values(point) > margin).all())

    def require(self, point: Sequence[float], margin: Optional[float] = None) -> None:
        """Raise an error if a point is not admissible."""
        if not self.contains(point, margin):
            raise DomainError(point)


class Residual(StringRepresentation):
    """Residual statistics of an identity over a set of points.

    Attributes
    ----------
    max_abs : `float`
        Largest absolute component over all points.
    mean_abs : `float`
        Mean over points of the largest absolute component at each point.
    argmax_point : `tuple`
        Point at which the largest component occurs.
    frame : `str`
        Either ``'coordinate'`` or ``'orthonormal'``.

    """

    max_abs: float
    mean_abs: float
    argmax_point: Point
    frame: str

    def __init__(self, max_abs: float, mean_abs: float, argmax_point: Sequence[float], frame: str) -> None:
        """Validate the statistics."""
        if frame not in {'coordinate', 'orthonormal'}:
            raise ValueError("frame must be 'coordinate' or 'orthonormal'.")
        if not max_abs >= mean_abs >= 0 and not np.isnan(max_abs):
            raise ValueError("Residuals must satisfy max_abs >= mean_abs >= 0.")
        self.max_abs = float(max_abs)
        self.mean_abs = float(mean_abs)
        self.argmax_point = tuple(float(c) for c in argmax_point)
        self.frame = frame

    def __str__(self) -> str:
        """Format the statistics as a string."""
        return (
            f"max {format_number(self.max_abs)} at {format_point(self.argmax_point)}, mean "
            f"{format_number(self.mean_abs)} ({self.frame} frame)"
        )

    @classmethod
    def from_pointwise(cls, magnitudes: Sequence[float], points: Sequence[Sequence[float]], frame: str) -> 'Residual':
        """Aggregate per-point maxima into residual statistics. Non-finite magnitudes dominate the maximum."""
        array = np.asarray(magnitudes, dtype=np.float64)
        if array.size == 0:
            return cls(0.0, 0.0, (), frame)
        bad = ~np.isfinite(array)
        index = int(np.argmax(bad)) if bad.any() else int(np.argmax(array))
        maximum = np.inf if bad.any() else float(array[index])
        mean = np.inf if bad.any() else float(array.mean())
        return cls(maximum, min(mean, maximum), points[index], frame)

    @classmethod
    def of_array(cls, array: Array, point: Sequence[float], frame: str = 'coordinate') -> 'Residual':
        """Summarize the components of a single array at a single point."""
        magnitude = float(np.abs(np.asarray(array, dtype=np.float64)).max()) if np.size(array) > 0 else 0.0
        return cls(magnitude, magnitude, point, frame)


@functools.lru_cache(maxsize=None)
def _compile(symbols: Tuple[sp.Symbol, ...], expressions: Tuple[sp.Expr, ...]) -> Callable:
    """Compile expressions into a function of coordinate jets."""
    return sp.lambdify(symbols, list(expressions), modules=[jets.JET_FUNCTIONS, 'math'])


class Field(StringRepresentation):
    """A tensor field on a chart.

    The components of a field are a pure function of the coordinate jets at a point. Fields declared from SymPy
    expressions compile them once; derived fields wrap a callable that composes other fields, so derivatives propagate
    through every composition.

    """

    kind: str = 'field'
    chart: Chart
    shape: Tuple[int, ...]
    expressions: Optional[Array]
    _function: Callable[[Sequence[Jet]], Any]
    label: str
    depth: int

    def __init__(
            self, chart: Chart, shape: Tuple[int, ...], function: Callable[[Sequence[Jet]], Any],
            expressions: Optional[Array] = None, label: str = '', depth: int = 0) -> None:
        self.chart = chart
        self.shape = tuple(shape)
        self._function = function
        self.expressions = expressions
        self.label = label
        self.depth = depth

    def __str__(self) -> str:
        """Format the field as a string."""
        label = f" {self.label}" if self.label else ""
        return f"{self.kind.capitalize()}{label} of shape {self.shape} on {self.chart.name}"

    @classmethod
    def from_expressions(cls, chart: Chart, expressions: Any, label: str = '', **kwargs: Any) -> 'Field':
        """Declare a field from SymPy expressions in the chart's coordinate symbols."""
        namespace = dict(zip(chart.coordinates, chart.symbols))
        if isinstance(expressions, (sp.MatrixBase, sp.NDimArray)):
            expressions = expressions.tolist()
        array = np.array(expressions, dtype=object)
        array = np.vectorize(lambda e: sp.sympify(e, locals=namespace), otypes=[object])(array)
        compiled = _compile(chart.symbols, tuple(array.flat))
        shape = array.shape

        def function(coordinates: Sequence[Jet]) -> Array:
            return np.array(compiled(*coordinates), dtype=object).reshape(shape)

        return cls(chart, shape, function, expressions=array, label=label, **kwargs)

    @classmethod
    def derived(
            cls, chart: Chart, shape: Tuple[int, ...], function: Callable, label: str = '', depth: int = 0,
            **kwargs: Any) -> 'Field':
        """Declare a field from a callable of the coordinate jets. The depth is the number of derivatives that the
        callable consumes, so that evaluating the field to some order needs coordinate jets of that much higher order.
        """
        return cls(chart, shape, function, label=label, depth=depth, **kwargs)

    def evaluate(self, coordinates: Sequence[Jet]) -> Array:
        """Evaluate the components on coordinate jets, returning an object array of jets."""
        dimensions = len(coordinates)
        order = coordinates[0].order
        try:
            with np.errstate(all='raise'):
                components = self._function(coordinates)
        except (ValueError, ZeroDivisionError, OverflowError, FloatingPointError) as exception:
            raise FieldNumericalError([f"{type(exception).__name__}: {exception}"])
        return jets.as_jets(components, dimensions, order).reshape(self.shape)

    def jets(self, point: Sequence[float], order: int = 1) -> Array:
        """Evaluate the components as jets of an order at a point."""
        required = order + self.depth
        if required > options.jet_order:
            raise JetOrderError(required, options.jet_order)
        return self.evaluate(jets.coordinates(point, required))

    def value(self, point: Sequence[float]) -> Array:
        """Evaluate the numeric components at a point."""
        return jets.values(self.jets(point, 0))

    def stacked(self, point: Sequence[float], order: int) -> List[Array]:
        """Evaluate numeric components and their derivatives up to an order at a point."""
        return jets.stack(self.jets(point, order), order)


class ScalarField(Field):
    """A function on a chart."""

    kind = 'scalar field'

    def jet(self, point: Sequence[float], order: int = 1) -> Jet:
        """Evaluate the function as a jet."""
        return self.jets(point, order)[()]


class VectorField(Field):
    """A vector field with components :math:`V^i`."""

    kind = 'vector field'


class OneForm(Field):
    """A one-form with components :math:`\\alpha_i`."""

    kind = 'one-form'


class PForm(Field):
    """A differential form of some degree with totally antisymmetric components."""

    kind = 'form'
    degree: int

    def __init__(self, *args: Any, degree: Optional[int] = None, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self.degree = len(self.shape) if degree is None else degree
        if self.degree != len(self.shape):
            raise ValueError("The degree of a form must equal the number of its indices.")


class MetricField(Field):
    """A pseudo-Riemannian metric with symmetric components :math:`g_{ij}`."""

    kind = 'metric'


class EndoField(Field):
    """An endomorphism field with components ``E[i, j]`` equal to :math:`E^i_j`."""

    kind = 'endomorphism field'


class TensorField(Field):
    """A general tensor field whose slot kinds are implied by the operation that produced it."""

    kind = 'tensor field'


def scalar(chart: Chart, expression: Any, label: str = '') -> ScalarField:
    """Declare a scalar field from an expression."""
    return ScalarField.from_expressions(chart, expression, label)  # type: ignore


def vector(chart: Chart, expressions: Sequence[Any], label: str = '') -> VectorField:
    """Declare a vector field from its components."""
    return VectorField.from_expressions(chart, list(expressions), label)  # type: ignore


def one_form(chart: Chart, expressions: Sequence[Any], label: str = '') -> OneForm:
    """Declare a one-form from its components."""
    return OneForm.from_expressions(chart, list(expressions), label)  # type: ignore


def metric(chart: Chart, expressions: Any, label: str = '') -> MetricField:
    """Declare a metric from a symmetric matrix of expressions."""
    matrix = sp.Matrix(expressions)
    if matrix.shape != (chart.dimensions, chart.dimensions):
        raise ValueError("Metrics must be square matrices of the chart's dimension.")
    if matrix != matrix.T:
        raise ValueError("Metrics must be symmetric.")
    return MetricField.from_expressions(chart, matrix.tolist(), label)  # type: ignore


def endomorphism(chart: Chart, expressions: Any, label: str = '') -> EndoField:
    """Declare an endomorphism field from a matrix of expressions with rows indexed by the upper index."""
    return EndoField.from_expressions(chart, sp.Matrix(expressions).tolist(), label)  # type: ignore


def two_form(chart: Chart, entries: Dict[Tuple[int, int], Any], label: str = '') -> PForm:
    """Declare a two-form from its components ``{(i, j): expression}`` with ``i < j``."""
    n = chart.dimensions
    matrix = sp.zeros(n, n)
    for (i, j), expression in entries.items():
        matrix[i, j] = expression
        matrix[j, i] = -sp.sympify(expression)
    return PForm.from_expressions(chart, matrix.tolist(), label)  # type: ignore


def symmetric_square(one_forms: Sequence[Sequence[Any]], weights: Sequence[Any]) -> sp.Matrix:
    r"""Assemble :math:`\sum_a w_a \theta^a \otimes \theta^a` from components of one-forms."""
    n = len(one_forms[0])
    matrix = sp.zeros(n, n)
    for theta, weight in zip(one_forms, weights):
        column = sp.Matrix(theta)
        matrix += weight * column * column.T
    return matrix


def check_point(chart: Chart, point: Sequence[float], margin: Optional[float] = None) -> Tuple[float, ...]:
    """Validate a point against a chart's domain and return it as a tuple of floats."""
    chart.require(point, margin)
    return tuple(float(c) for c in point)


def diff(expression: Any, symbol: sp.Symbol) -> sp.Expr:
    """Differentiate an expression symbolically, which keeps jet orders available for downstream derivatives."""
    return sp.diff(sp.sympify(expression), symbol)

