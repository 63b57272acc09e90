"""Geometry-specific exceptions."""

import collections
from typing import Any, List, Optional, Sequence

from .utilities.basics import Error, DerivedError, NumericalError, PointError, ResidualError, format_number


class MultipleErrors(Error):
    """Multiple errors that occurred around the same time."""

    _errors: List[Error]

    def __new__(cls, errors: Sequence[Error]) -> Any:
        """Defer to the class of a singular error."""
        if len(errors) == 1:
            return next(iter(errors))
        return super().__new__(cls)

    def __init__(self, errors: Sequence[Error]) -> None:
        """Store distinct errors."""
        self._errors = list(collections.OrderedDict.fromkeys(errors))

    def __str__(self) -> str:
        """Combine all the error messages."""
        return "\n".join(str(e) for e in self._errors)


class DegenerateMetricError(Error):
    """Encountered a metric that is not invertible at an evaluation point."""

    _determinant: float

    def __init__(self, determinant: float) -> None:
        super().__init__()
        self._determinant = determinant

    def __str__(self) -> str:
        """Supplement the error with the determinant."""
        return f"{super().__str__()} Determinant: {format_number(self._determinant)}."


class JetOrderError(Error):
    """A field was evaluated to a lower jet order than an operation requires.

    Evaluate the field with a higher order, or use a field whose expressions can be differentiated that many times.

    """

    _required: int
    _available: int

    def __init__(self, required: int, available: int) -> None:
        super().__init__()
        self._required = required
        self._available = available

    def __str__(self) -> str:
        """Supplement the error with the orders."""
        return f"{super().__str__()} Required order: {self._required}. Available order: {self._available}."


class AlmostComplexError(ResidualError):
    r"""An endomorphism used as an almost complex structure does not satisfy :math:`J^2 = -\mathrm{Id}`."""


class UnsupportedDimensionError(Error):
    """The operation is only defined for four-dimensional charts."""


class DegenerateFormError(Error):
    """A two-form is degenerate at an evaluation point, so wedging with it does not identify one-forms with three-forms.
    """


class DomainError(PointError):
    """A point lies outside of the chart's domain or within the sampling margin of its boundary."""


class InvalidSolutionError(ResidualError):
    """A function does not solve the continuous Toda equation within tolerance."""


class SignatureError(Error):
    r"""A function that must have a definite sign on the chart, such as :math:`P = K(\rho\partial_\rho u - 2)`, changes
    sign or has the wrong sign.
    """


class MomentMapError(PointError):
    r"""The Hamiltonian :math:`f_Z` has a critical point, so the proportionality factor :math:`\psi` is undefined."""


class RankError(PointError):
    r"""The quaternionic span :math:`\mathbb{H}Z` does not have full rank at a point."""


class PoleError(Error):
    """A formula has a pole inside of the requested range."""

    _factor: str
    _location: Optional[float]

    def __init__(self, factor: str, location: Optional[float] = None) -> None:
        super().__init__()
        self._factor = factor
        self._location = location

    def __str__(self) -> str:
        """Supplement the error with the offending factor."""
        location = "" if self._location is None else f" near {format_number(self._location)}"
        return f"{super().__str__()} Vanishing factor: {self._factor}{location}."


class CriterionError(ResidualError):
    r"""The integrability criterion :math:`d f_H \wedge d f_Z = 0` fails, so :math:`\psi` and everything derived from it
    is undefined.
    """


class CasePreconditionError(Error):
    """The parameters do not satisfy the precondition of the requested case transform."""

    _case: str

    def __init__(self, case: str) -> None:
        super().__init__()
        self._case = case

    def __str__(self) -> str:
        """Supplement the error with the case."""
        return f"{super().__str__()} Case: {self._case}."


class NotApplicableError(Error):
    r"""There is no root of :math:`b\rho + 2c` adjacent to the admissible interval that contains the starting point."""


class ClosureError(ResidualError):
    """Lie brackets of the vector fields do not close on their span."""


class FibreDerivativeError(ResidualError):
    r"""The covariant derivative :math:`\nabla_VZ` along the fibre directions of a rigid c-map model does not vanish."""


class RegistryError(Error):
    """A name is not registered."""

    _name: str
    _available: List[str]

    def __init__(self, name: str, available: Sequence[str]) -> None:
        super().__init__()
        self._name = name
        self._available = list(available)

    def __str__(self) -> str:
        """Supplement the error with the registered names."""
        return f"{super().__str__()} Unknown name: '{self._name}'. Available names: {', '.join(self._available)}."


class SamplingError(Error):
    """Failed to collect enough admissible points by rejection sampling.

    The chart's sampling box may barely overlap its domain. Narrow the box or reduce the margin.

    """


class QuadratureError(DerivedError):
    """Adaptive quadrature failed to converge."""


class FieldNumericalError(NumericalError):
    """Encountered a numerical error when evaluating a field."""

    def __init__(self, messages: Sequence[str]) -> None:
        super().__init__()
        self._messages.update(messages)


class InapplicableCheckError(Error):
    """The check does not apply to the requested target."""

    _check: str
    _target: str
    _applicable: List[str]

    def __init__(self, check: str, target: str, applicable: Sequence[str]) -> None:
        super().__init__()
        self._check = check
        self._target = target
        self._applicable = list(applicable)

    def __str__(self) -> str:
        """Supplement the error with the checks that do apply."""
        applicable = ', '.join(self._applicable) or 'none'
        return f"{super().__str__()} Check: '{self._check}'. Target: '{self._target}'. Applicable checks: {applicable}."
