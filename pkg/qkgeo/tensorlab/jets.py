r"""Truncated Taylor arithmetic.

A :class:`Jet` carries the value of a scalar quantity at a chart point together with all of its partial derivatives
with respect to the chart coordinates up to a fixed order (at most three). Arithmetic and elementary functions propagate
derivatives exactly through the Leibniz and chain rules, so any field that is built from coordinate jets by composing
these operations is differentiated to machine precision.

Arrays of jets are plain NumPy object arrays. Helpers in this module stack them into numeric arrays with the derivative
axes last, and invert matrices of jets.
"""

import math
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .. import options
from ..exceptions import JetOrderError
from ..utilities.basics import Array


Scalar = Union['Jet', float]


def _sym3(matrix: Array, vector: Array) -> Array:
    """Symmetrize the outer product of a symmetric matrix and a vector over three indices."""
    return (
        np.einsum('ij,k->ijk', matrix, vector) + np.einsum('ik,j->ijk', matrix, vector) +
        np.einsum('jk,i->ijk', matrix, vector)
    )


class Jet(object):
    r"""Value and partial derivatives of a scalar quantity at a point.

    Attributes
    ----------
    order : `int`
        Highest order of derivatives that are carried, between ``0`` and ``3``.
    value : `float`
        Value of the quantity.
    first : `ndarray`
        Gradient :math:`\partial_i f`, or ``None`` if the order is zero.
    second : `ndarray`
        Symmetric Hessian :math:`\partial_i\partial_j f`, or ``None`` if the order is below two.
    third : `ndarray`
        Symmetric third derivatives :math:`\partial_i\partial_j\partial_k f`, or ``None`` if the order is below three.

    """

    __slots__ = ('order', 'dimensions', 'value', 'first', 'second', 'third')
    __array_priority__ = 1000.0

    order: int
    dimensions: int
    value: float
    first: Optional[Array]
    second: Optional[Array]
    third: Optional[Array]

    def __init__(
            self, value: float, first: Optional[Array] = None, second: Optional[Array] = None,
            third: Optional[Array] = None, dimensions: Optional[int] = None) -> None:
        """Store the derivatives, inferring the order from which of them are present."""
        self.value = float(value)
        self.first = first
        self.second = second if first is not None else None
        self.third = third if self.second is not None else None
        if first is not None:
            dimensions = first.shape[0]
        if dimensions is None:
            raise ValueError("dimensions must be given for jets of order zero.")
        self.dimensions = dimensions
        self.order = 0 if first is None else 1 if self.second is None else 2 if self.third is None else 3

    @classmethod
    def constant(cls, value: float, dimensions: int, order: int) -> 'Jet':
        """Construct the jet of a constant."""
        _check_order(order)
        derivatives = [np.zeros((dimensions,) * (k + 1)) for k in range(order)]
        return cls(value, *derivatives, dimensions=dimensions)  # type: ignore

    @classmethod
    def variable(cls, value: float, index: int, dimensions: int, order: int) -> 'Jet':
        """Construct the jet of the coordinate with the given index."""
        jet = cls.constant(value, dimensions, order)
        if order > 0:
            jet.first[index] = 1.0
        return jet

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, value={self.value!r})"

    def __float__(self) -> float:
        return self.value

    def derivatives(self) -> List[Array]:
        """Collect the derivative arrays that are present, from first to highest order."""
        return [d for d in (self.first, self.second, self.third) if d is not None]

    def partial(self, index: int) -> 'Jet':
        """Differentiate with respect to a coordinate, which lowers the order by one."""
        if self.order == 0:
            raise JetOrderError(1, 0)
        derivatives = [d[index] for d in self.derivatives()]
        return Jet(derivatives[0], *derivatives[1:], dimensions=self.dimensions)  # type: ignore

    def _coerce(self, other: Any) -> Optional['Jet']:
        """Convert a number into a constant jet of matching order."""
        if isinstance(other, Jet):
            return other
        if isinstance(other, (int, float, np.integer, np.floating)):
            return Jet.constant(float(other), self.dimensions, self.order)
        return None

    def compose(self, d0: float, d1: float, d2: float = 0.0, d3: float = 0.0) -> 'Jet':
        r"""Apply a univariate function :math:`\phi` with known derivatives at the value of this jet through the chain
        rule.
        """
        first = second = third = None
        if self.order >= 1:
            first = d1 * self.first
        if self.order >= 2:
            second = d2 * np.outer(self.first, self.first) + d1 * self.second
        if self.order >= 3:
            third = (
                d3 * np.einsum('i,j,k->ijk', self.first, self.first, self.first) +
                d2 * _sym3(self.second, self.first) + d1 * self.third
            )
        return Jet(d0, first, second, third, self.dimensions)

    def _broadcast(self, other: Array, operation: Callable[[Any], Any]) -> Array:
        """Apply a binary operation between this jet and each element of an array."""
        result = np.empty(other.shape, dtype=object)
        for index, element in np.ndenumerate(other):
            result[index] = operation(element)
        return result

    def __add__(self, other: Any) -> Any:
        if isinstance(other, np.ndarray):
            return self._broadcast(other, lambda e: self + e)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        order = min(self.order, other.order)
        derivatives = [a + b for a, b in zip(self.derivatives()[:order], other.derivatives()[:order])]
        return Jet(self.value + other.value, *derivatives, dimensions=self.dimensions)  # type: ignore

    __radd__ = __add__

    def __neg__(self) -> 'Jet':
        return Jet(-self.value, *[-d for d in self.derivatives()], dimensions=self.dimensions)  # type: ignore

    def __pos__(self) -> 'Jet':
        return self

    def __sub__(self, other: Any) -> Any:
        if isinstance(other, np.ndarray):
            return self._broadcast(other, lambda e: self - e)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> Any:
        if isinstance(other, np.ndarray):
            return self._broadcast(other, lambda e: e - self)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Any) -> Any:
        if isinstance(other, np.ndarray):
            return self._broadcast(other, lambda e: self * e)
        if isinstance(other, (int, float, np.integer, np.floating)):
            scale = float(other)
            derivatives = [scale * d for d in self.derivatives()]
            return Jet(self.value * scale, *derivatives, dimensions=self.dimensions)  # type: ignore
        if not isinstance(other, Jet):
            return NotImplemented
        order = min(self.order, other.order)
        f, g = self, other
        first = second = third = None
        if order >= 1:
            first = f.first * g.value + f.value * g.first
        if order >= 2:
            cross = np.outer(f.first, g.first)
            second = f.second * g.value + f.value * g.second + cross + cross.T
        if order >= 3:
            third = f.third * g.value + _sym3(f.second, g.first) + _sym3(g.second, f.first) + f.value * g.third
        return Jet(f.value * g.value, first, second, third, self.dimensions)

    __rmul__ = __mul__

    def reciprocal(self) -> 'Jet':
        """Compute the jet of one over this jet."""
        v = self.value
        if v == 0:
            raise ZeroDivisionError("Division by a jet with zero value.")
        return self.compose(1 / v, -1 / v**2, 2 / v**3, -6 / v**4)

    def __truediv__(self, other: Any) -> Any:
        if isinstance(other, np.ndarray):
            return self._broadcast(other, lambda e: self / e)
        if isinstance(other, (int, float, np.integer, np.floating)):
            return self * (1 / float(other))
        if not isinstance(other, Jet):
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other: Any) -> Any:
        if isinstance(other, np.ndarray):
            return self._broadcast(other, lambda e: e / self)
        if not isinstance(other, (int, float, np.integer, np.floating)):
            return NotImplemented
        return self.reciprocal() * float(other)

    def __pow__(self, exponent: Any) -> 'Jet':
        if isinstance(exponent, Jet):
            return exp(exponent * log(self))
        if isinstance(exponent, np.ndarray):
            return NotImplemented
        p = float(exponent)
        v = self.value
        if p == 0:
            return Jet.constant(1.0, self.dimensions, self.order)
        if p.is_integer() and p > 0:
            n = int(p)
            powers = [v**(n - k) if n - k >= 0 else 0.0 for k in range(4)]
            return self.compose(
                powers[0], n * powers[1], n * (n - 1) * powers[2], n * (n - 1) * (n - 2) * powers[3]
            )
        if p.is_integer():
            return (self ** -p).reciprocal()
        if v <= 0:
            raise ValueError(f"Non-integer power {p} of a non-positive jet value {v}.")
        return self.compose(v**p, p * v**(p - 1), p * (p - 1) * v**(p - 2), p * (p - 1) * (p - 2) * v**(p - 3))

    def __rpow__(self, base: Any) -> 'Jet':
        if not isinstance(base, (int, float, np.integer, np.floating)):
            return NotImplemented
        return exp(self * math.log(float(base)))

    def __abs__(self) -> 'Jet':
        if self.value == 0 and self.order > 0:
            raise ValueError("The absolute value is not differentiable at zero.")
        return -self if self.value < 0 else self

    def __lt__(self, other: Any) -> bool:
        return self.value < float(other)

    def __gt__(self, other: Any) -> bool:
        return self.value > float(other)


def _check_order(order: int) -> None:
    """Validate a jet order."""
    if not isinstance(order, int) or not 0 <= order <= options.jet_order:
        raise ValueError(f"Jet orders must be integers between 0 and {options.jet_order}.")


def _elementary(
        function: Callable[[float], Tuple[float, float, float, float]], name: str) -> Callable[[Scalar], Scalar]:
    """Build a function that applies to numbers and jets alike."""

    def apply(x: Scalar) -> Scalar:
        if isinstance(x, Jet):
            return x.compose(*function(x.value))
        return function(float(x))[0]

    apply.__name__ = name
    return apply


def _exp(v: float) -> Tuple[float, float, float, float]:
    e = math.exp(v)
    return e, e, e, e


def _log(v: float) -> Tuple[float, float, float, float]:
    return math.log(v), 1 / v, -1 / v**2, 2 / v**3


def _sqrt(v: float) -> Tuple[float, float, float, float]:
    s = math.sqrt(v)
    return s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v**2)


def _sin(v: float) -> Tuple[float, float, float, float]:
    s, c = math.sin(v), math.cos(v)
    return s, c, -s, -c


def _cos(v: float) -> Tuple[float, float, float, float]:
    s, c = math.sin(v), math.cos(v)
    return c, -s, -c, s


def _tan(v: float) -> Tuple[float, float, float, float]:
    t = math.tan(v)
    s = 1 + t**2
    return t, s, 2 * t * s, 2 * s * (1 + 3 * t**2)


def _atan(v: float) -> Tuple[float, float, float, float]:
    q = 1 / (1 + v**2)
    return math.atan(v), q, -2 * v * q**2, (6 * v**2 - 2) * q**3


def _sinh(v: float) -> Tuple[float, float, float, float]:
    s, c = math.sinh(v), math.cosh(v)
    return s, c, s, c


def _cosh(v: float) -> Tuple[float, float, float, float]:
    s, c = math.sinh(v), math.cosh(v)
    return c, s, c, s


def _tanh(v: float) -> Tuple[float, float, float, float]:
    t = math.tanh(v)
    s = 1 - t**2
    return t, s, -2 * t * s, s * (6 * t**2 - 2)


exp = _elementary(_exp, 'exp')
log = _elementary(_log, 'log')
sqrt = _elementary(_sqrt, 'sqrt')
sin = _elementary(_sin, 'sin')
cos = _elementary(_cos, 'cos')
tan = _elementary(_tan, 'tan')
atan = _elementary(_atan, 'atan')
sinh = _elementary(_sinh, 'sinh')
cosh = _elementary(_cosh, 'cosh')
tanh = _elementary(_tanh, 'tanh')

# names that sympy.lambdify prints for these functions
JET_FUNCTIONS: Dict[str, Callable] = {
    'exp': exp, 'log': log, 'sqrt': sqrt, 'sin': sin, 'cos': cos, 'tan': tan, 'atan': atan, 'sinh': sinh,
    'cosh': cosh, 'tanh': tanh, 'Abs': abs
}


def coordinates(point: Sequence[float], order: int) -> List[Jet]:
    """Construct the coordinate jets at a point."""
    _check_order(order)
    dimensions = len(point)
    return [Jet.variable(float(c), i, dimensions, order) for i, c in enumerate(point)]


def as_jets(components: Any, dimensions: int, order: int) -> Array:
    """Convert a scalar or an array of numbers and jets into an object array of jets."""
    array = np.array(components, dtype=object)
    converted = np.empty(array.shape, dtype=object)
    for index, component in np.ndenumerate(array):
        if isinstance(component, Jet):
            converted[index] = component
        else:
            converted[index] = Jet.constant(float(component), dimensions, order)
    return converted


def order_of(jets: Array) -> int:
    """Find the lowest order in an array of jets."""
    array = np.asarray(jets, dtype=object)
    return min((j.order for j in array.flat), default=options.jet_order)


def values(jets: Array) -> Array:
    """Extract the values of an array of jets."""
    array = np.asarray(jets, dtype=object)
    extracted = np.empty(array.shape, dtype=options.dtype)
    for index, jet in np.ndenumerate(array):
        extracted[index] = float(jet)
    return extracted


def stack(jets: Array, order: Optional[int] = None) -> List[Array]:
    """Stack an array of jets into numeric arrays of values and derivatives. The derivative axes come last, so the
    array of order k has the shape of the jets followed by k axes of the number of dimensions.
    """
    array = np.asarray(jets, dtype=object)
    first_jet = next(iter(array.flat))
    available = order_of(array)
    if order is None:
        order = available
    if order > available:
        raise JetOrderError(order, available)
    dimensions = first_jet.dimensions
    stacked = [np.empty(array.shape + (dimensions,) * k, dtype=options.dtype) for k in range(order + 1)]
    for index, jet in np.ndenumerate(array):
        stacked[0][index] = jet.value
        for k, derivative in enumerate(jet.derivatives()[:order]):
            stacked[k + 1][index] = derivative
    return stacked


def unstack(stacked: Sequence[Array]) -> Array:
    """Convert numeric arrays of values and derivatives back into an object array of jets."""
    shape = np.shape(stacked[0])
    dimensions = stacked[1].shape[-1] if len(stacked) > 1 else None
    jets = np.empty(shape, dtype=object)
    for index in np.ndindex(*shape):
        derivatives = [np.array(s[index], dtype=np.float64) for s in stacked[1:]]
        jets[index] = Jet(stacked[0][index], *derivatives, dimensions=dimensions if dimensions else 1)  # type: ignore
    return jets


def gradient(jets: Array) -> Array:
    """Differentiate an array of jets, appending a derivative axis and lowering the order by one."""
    array = np.asarray(jets, dtype=object)
    first_jet = next(iter(array.flat))
    dimensions = first_jet.dimensions
    differentiated = np.empty(array.shape + (dimensions,), dtype=object)
    for index, jet in np.ndenumerate(array):
        for i in range(dimensions):
            differentiated[index + (i,)] = jet.partial(i)
    return differentiated


def invert_stacked(stacked: Sequence[Array]) -> List[Array]:
    r"""Invert a matrix given as stacked values and derivatives, differentiating the inverse :math:`A = M^{-1}` with
    :math:`\partial A = -A (\partial M) A` repeatedly.
    """
    from ..utilities.algebra import precisely_invert
    from ..exceptions import DegenerateMetricError
    A, successful = precisely_invert(stacked[0])
    if not successful:
        raise DegenerateMetricError(float(np.linalg.det(stacked[0])))
    inverse = [A]
    order = len(stacked) - 1
    if order >= 1:
        M1 = stacked[1]
        A1 = -np.einsum('ik,kla,lj->ija', A, M1, A)
        inverse.append(A1)
    if order >= 2:
        M2 = stacked[2]
        A2 = (
            -np.einsum('ikb,kla,lj->ijab', A1, M1, A) - np.einsum('ik,klab,lj->ijab', A, M2, A) -
            np.einsum('ik,kla,ljb->ijab', A, M1, A1)
        )
        inverse.append(A2)
    if order >= 3:
        M3 = stacked[3]
        A3 = -(
            np.einsum('ikbc,kla,lj->ijabc', A2, M1, A) + np.einsum('ikb,klac,lj->ijabc', A1, M2, A) +
            np.einsum('ikb,kla,ljc->ijabc', A1, M1, A1) + np.einsum('ikc,klab,lj->ijabc', A1, M2, A) +
            np.einsum('ik,klabc,lj->ijabc', A, M3, A) + np.einsum('ik,klab,ljc->ijabc', A, M2, A1) +
            np.einsum('ikc,kla,ljb->ijabc', A1, M1, A1) + np.einsum('ik,klac,ljb->ijabc', A, M2, A1) +
            np.einsum('ik,kla,ljbc->ijabc', A, M1, A2)
        )
        inverse.append(A3)
    return inverse


def invert(jets: Array) -> Array:
    """Invert a square matrix of jets."""
    return unstack(invert_stacked(stack(jets)))
