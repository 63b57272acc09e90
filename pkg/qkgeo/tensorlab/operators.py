r"""Tensor operators on object arrays of jets.

Every operator takes arrays of :class:`~qkgeo.tensorlab.jets.Jet` components (numbers are accepted wherever no
derivative is taken) and returns an array of the same kind. Operators that differentiate lower the jet order of their
output by one. Index conventions: vectors ``V[i]`` :math:`= V^i`, endomorphisms ``E[i, j]`` :math:`= E^i_j`, and forms
are totally antisymmetric arrays with :math:`\omega = \frac{1}{p!}\omega_{i_1\dots i_p}dx^{i_1}\wedge\dots\wedge
dx^{i_p}`, so that :math:`(dx \wedge dy)_{01} = 1`.
"""

import itertools
import math
from typing import Any, List, Tuple

import numpy as np

from . import jets
from .. import options
from ..exceptions import AlmostComplexError, DegenerateFormError, UnsupportedDimensionError
from ..utilities.algebra import compute_condition_number
from ..utilities.basics import Array


# component triples of three-forms in four dimensions, which index the rows of the wedge-with-sigma system
TRIPLES: List[Tuple[int, int, int]] = list(itertools.combinations(range(4), 3))


def dimensions_of(array: Any) -> int:
    """Find the number of chart dimensions of an array of jets."""
    return next(iter(np.asarray(array, dtype=object).flat)).dimensions


def parity(permutation: Tuple[int, ...]) -> int:
    """Compute the sign of a permutation by counting inversions."""
    pairs = itertools.combinations(range(len(permutation)), 2)
    inversions = sum(1 for i, j in pairs if permutation[i] > permutation[j])
    return -1 if inversions % 2 else 1


def antisymmetrize(tensor: Any) -> Array:
    """Sum signed transpositions of a tensor over all of its axes without normalizing."""
    array = np.asarray(tensor)
    total = None
    for permutation in itertools.permutations(range(array.ndim)):
        term = np.transpose(array, permutation)
        if parity(permutation) < 0:
            term = -term
        total = term if total is None else total + term
    return array if total is None else total


def zero_form(degree: int, dimensions: int, order: int) -> Array:
    """Construct the zero form of a degree, as jets of an order."""
    return jets.as_jets(np.zeros((dimensions,) * degree), dimensions, max(order, 0))


def exterior_derivative(form: Any) -> Array:
    """Differentiate a form. Forms whose derivative would exceed the number of dimensions have a zero derivative."""
    array = np.asarray(form, dtype=object)
    degree = array.ndim
    dimensions = dimensions_of(array)
    if degree + 1 > dimensions:
        return zero_form(degree + 1, dimensions, jets.order_of(array) - 1)
    derivative = np.moveaxis(jets.gradient(array), -1, 0)
    return antisymmetrize(derivative) / math.factorial(degree)


def wedge(alpha: Any, beta: Any) -> Array:
    """Compute the exterior product of two forms."""
    alpha = np.asarray(alpha)
    beta = np.asarray(beta)
    p, q = alpha.ndim, beta.ndim
    product = np.multiply.outer(alpha, beta)
    dimensions = alpha.shape[0] if p else beta.shape[0] if q else 1
    if p + q > dimensions:
        return np.zeros((dimensions,) * (p + q))
    return antisymmetrize(product) / (math.factorial(p) * math.factorial(q))


def interior_product(vector: Any, form: Any) -> Array:
    r"""Contract a vector into the first slot of a form, :math:`(\iota_V\omega)_{j\dots} = V^i\omega_{ij\dots}`."""
    return np.tensordot(np.asarray(vector), np.asarray(form), axes=([0], [0]))


def lower(metric: Any, vector: Any) -> Array:
    """Lower the index of a vector with a metric."""
    return np.tensordot(np.asarray(metric), np.asarray(vector), axes=([1], [0]))


def apply(endomorphism: Any, vector: Any) -> Array:
    """Apply an endomorphism to a vector."""
    return np.tensordot(np.asarray(endomorphism), np.asarray(vector), axes=([1], [0]))


def compose(first: Any, second: Any) -> Array:
    """Compose two endomorphisms, applying the second one first."""
    return np.tensordot(np.asarray(first), np.asarray(second), axes=([1], [0]))


def pairing(metric: Any, left: Any, right: Any) -> Any:
    """Evaluate a bilinear form on two vectors."""
    return np.tensordot(lower(metric, right), np.asarray(left), axes=([0], [0]))[()]


def lie_bracket(X: Any, Y: Any) -> Array:
    r"""Compute :math:`[X, Y]^i = X^j\partial_jY^i - Y^j\partial_jX^i`."""
    X = np.asarray(X, dtype=object)
    Y = np.asarray(Y, dtype=object)
    return np.einsum('ij,j->i', jets.gradient(Y), X) - np.einsum('ij,j->i', jets.gradient(X), Y)


def jacobi(X: Any, Y: Any, Z: Any) -> Array:
    """Compute the cyclic sum of nested Lie brackets, which needs jets of order two."""
    return lie_bracket(lie_bracket(X, Y), Z) + lie_bracket(lie_bracket(Y, Z), X) + lie_bracket(lie_bracket(Z, X), Y)


def lie_derivative_metric(X: Any, metric: Any) -> Array:
    r"""Compute :math:`(L_Xg)_{ij} = X^k\partial_kg_{ij} + g_{kj}\partial_iX^k + g_{ik}\partial_jX^k`."""
    X = np.asarray(X, dtype=object)
    metric = np.asarray(metric, dtype=object)
    dX = jets.gradient(X)
    return (
        np.einsum('ijk,k->ij', jets.gradient(metric), X) + np.einsum('kj,ki->ij', metric, dX) +
        np.einsum('ik,kj->ij', metric, dX)
    )


def lie_derivative_endo(X: Any, endomorphism: Any) -> Array:
    r"""Compute :math:`(L_XE)^i_j = X^k\partial_kE^i_j - E^k_j\partial_kX^i + E^i_k\partial_jX^k`."""
    X = np.asarray(X, dtype=object)
    endomorphism = np.asarray(endomorphism, dtype=object)
    dX = jets.gradient(X)
    return (
        np.einsum('ijk,k->ij', jets.gradient(endomorphism), X) - np.einsum('ik,kj->ij', dX, endomorphism) +
        np.einsum('ik,kj->ij', endomorphism, dX)
    )


def lie_derivative_form(X: Any, form: Any) -> Array:
    r"""Compute the Lie derivative of a form with Cartan's formula :math:`L_X = \iota_X d + d\iota_X`."""
    form = np.asarray(form, dtype=object)
    differentiated = interior_product(X, exterior_derivative(form))
    if form.ndim == 0:
        return differentiated
    return differentiated + exterior_derivative(interior_product(X, form))


def check_almost_complex(endomorphism: Any) -> None:
    r"""Raise an error if an endomorphism does not satisfy :math:`J^2 = -\mathrm{Id}` within tolerance."""
    J = jets.values(endomorphism) if np.asarray(endomorphism).dtype == object else np.asarray(endomorphism)
    residual = float(np.abs(J @ J + np.eye(J.shape[0])).max())
    if not residual <= options.almost_complex_atol:
        raise AlmostComplexError(residual)


def nijenhuis(J: Any) -> Array:
    r"""Compute the Nijenhuis tensor ``N[i, j, k]`` of :math:`N(\partial_j, \partial_k) = [J\partial_j, J\partial_k] -
    J[J\partial_j, \partial_k] - J[\partial_j, J\partial_k] - [\partial_j, \partial_k]` after checking that the
    endomorphism is an almost complex structure.
    """
    J = np.asarray(J, dtype=object)
    check_almost_complex(J)
    dJ = jets.gradient(J)
    return (
        np.einsum('lj,ikl->ijk', J, dJ) - np.einsum('lk,ijl->ijk', J, dJ) - np.einsum('il,lkj->ijk', J, dJ) +
        np.einsum('il,ljk->ijk', J, dJ)
    )


def fundamental_form(metric: Any, J: Any) -> Array:
    r"""Compute :math:`\sigma(X, Y) = g(JX, Y)`, with components :math:`\sigma_{ij} = J^k_ig_{kj}`."""
    return np.einsum('ki,kj->ij', np.asarray(J), np.asarray(metric))


def endomorphism_of(metric: Any, form: Any) -> Array:
    r"""Recover the endomorphism :math:`J = -g^{-1}\sigma` with :math:`g(J\cdot, \cdot) = \sigma`."""
    inverse = jets.invert(np.asarray(metric, dtype=object))
    return -np.einsum('ik,kj->ij', inverse, np.asarray(form))


def wedge_system(sigma: Any) -> Array:
    r"""Construct the matrix of :math:`\theta \mapsto \theta \wedge \sigma` from one-forms to the independent components
    of three-forms in four dimensions.
    """
    sigma = np.asarray(sigma)
    system = np.empty((4, 4), dtype=sigma.dtype)
    system[...] = 0.0
    for row, (i, j, k) in enumerate(TRIPLES):
        system[row, i] = system[row, i] + sigma[j, k]
        system[row, j] = system[row, j] + sigma[k, i]
        system[row, k] = system[row, k] + sigma[i, j]
    return system


def lee_form(sigma: Any) -> Array:
    r"""Solve :math:`d\sigma = \theta \wedge \sigma` for the one-form :math:`\theta` in four dimensions."""
    sigma = np.asarray(sigma, dtype=object)
    if sigma.shape[0] != 4:
        raise UnsupportedDimensionError
    system = jets.as_jets(wedge_system(sigma), 4, jets.order_of(sigma))
    if not compute_condition_number(jets.values(system)) < 1 / np.finfo(np.float64).eps:
        raise DegenerateFormError
    differential = exterior_derivative(sigma)
    target = np.array([differential[t] for t in TRIPLES], dtype=object)
    return np.einsum('ij,j->i', jets.invert(system), target)


def christoffel(metric: Any) -> Array:
    r"""Compute :math:`\Gamma^k_{ij}` as jets from a metric of jets."""
    metric = np.asarray(metric, dtype=object)
    derivative = jets.gradient(metric)
    lowered = (np.transpose(derivative, (0, 2, 1)) + derivative - np.transpose(derivative, (2, 0, 1))) / 2
    return np.einsum('kl,lij->kij', jets.invert(metric), lowered)


def covariant_derivative_vector(metric: Any, vector: Any) -> Array:
    r"""Compute :math:`\nabla V` as jets, with ``E[i, j]`` :math:`= (\nabla_{\partial_j}V)^i`."""
    vector = np.asarray(vector, dtype=object)
    return jets.gradient(vector) + np.einsum('iam,m->ia', christoffel(metric), vector)


def magnitude(array: Any) -> float:
    """Compute the largest absolute value of the components of an array of numbers or jets."""
    array = np.asarray(array)
    if array.size == 0:
        return 0.0
    if array.dtype == object:
        array = jets.values(array)
    return float(np.abs(array).max())
