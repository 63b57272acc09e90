r"""Flat pseudo-hyper-Kähler manifolds of the rigid c-map.

The model of quaternionic dimension :math:`n` lives on :math:`\mathbb{C}^n \times \mathbb{C}^n` with coordinates
:math:`z_j = x_j + iy_j` and :math:`w_j = p_j + iq_j`. The metric is :math:`g_N = \sum_j \eta_j(|dz_j|^2 + |dw_j|^2)`
with :math:`\eta = (-1, 1, \dots, 1)`, so that it has :math:`4(n - 1)` positive and :math:`4` negative eigenvalues.
The complex structures are :math:`I_1 = \mathrm{diag}(J, -J)`, :math:`I_2`, which maps :math:`\partial_{x_j}` to
:math:`\partial_{p_j}` and :math:`\partial_{y_j}` to :math:`\partial_{q_j}`, and :math:`I_3 = I_1I_2`. The rotating
Killing field :math:`Z = \sum_j (y_j\partial_{x_j} - x_j\partial_{y_j})` has the Hamiltonian
:math:`f_Z = -\frac{1}{2}\sum_j \eta_j|z_j|^2`.
"""

import functools
from typing import Dict, List, Sequence, Tuple

import numpy as np
import sympy as sp

from .rotating import RotatingKillingData, hyperkahler_projector, rotating_data
from ..exceptions import DegenerateMetricError
from ..tensorlab import calculus
from ..tensorlab.curvature import frame_residual
from ..tensorlab.fields import (
    Chart, EndoField, MetricField, PForm, Residual, ScalarField, VectorField, check_point, endomorphism, metric, scalar,
    vector
)
from ..utilities.algebra import gram_schmidt, precisely_solve
from ..utilities.basics import Array, StringRepresentation, format_number


class RigidCmapModel(StringRepresentation):
    r"""Flat rigid c-map model of quaternionic dimension :math:`n`.

    The chart is restricted to :math:`|z_0|^2 > \sum_{j \geq 1}|z_j|^2`, where :math:`g_N(Z, Z) < 0`, and to points at
    which the shifted Hamiltonian :math:`f_Z` and the function :math:`f_H = f_Z + g_N(Z, Z)` do not vanish.

    Parameters
    ----------
    n : `int`
        Quaternionic dimension, at least ``1``.
    c_offset : `float, optional`
        Constant by which the Hamiltonian is shifted. By default, there is no shift, which gives :math:`f_Z > 0` and
        :math:`f_H < 0` on the chart.
    bound : `float, optional`
        Half-width of the sampling box, which is centered at the origin. By default, ``1.0``.

    """

    n: int
    c_offset: float
    chart: Chart
    signs: Tuple[int, ...]
    g: MetricField
    I1: EndoField
    I2: EndoField
    I3: EndoField
    Z: VectorField
    xi_euler: VectorField
    f_Z: ScalarField

    def __init__(self, n: int, c_offset: float = 0.0, bound: float = 1.0) -> None:
        """Declare the chart and the flat structures."""
        if not isinstance(n, int) or n < 1:
            raise ValueError("n must be a positive integer.")
        if not bound > 0:
            raise ValueError("bound must be positive.")
        self.n = n
        self.c_offset = float(c_offset)
        self.signs = (-1,) + (1,) * (n - 1)

        # coordinates are ordered as (x_0, y_0, ..., x_{n-1}, y_{n-1}, p_0, q_0, ..., p_{n-1}, q_{n-1})
        names = [f'{c}{j}' for j in range(n) for c in 'xy'] + [f'{c}{j}' for j in range(n) for c in 'pq']
        symbols = sp.symbols(names, real=True)
        x, y = symbols[0:2 * n:2], symbols[1:2 * n:2]
        moduli = [x[j]**2 + y[j]**2 for j in range(n)]
        q = moduli[0] - sum(moduli[1:])
        f_Z = q / 2 + self.c_offset
        f_H = -q / 2 + self.c_offset
        self.chart = Chart(f'cmap{n}', names, [(-bound, bound)] * 4 * n, [q, f_Z**2, f_H**2])

        # flat metric and complex structures
        signs = np.repeat(self.signs, 2)
        self.g = metric(self.chart, np.diag(np.concatenate([signs, signs])).tolist(), 'g_N')
        matrices = structure_matrices(n)
        self.I1 = endomorphism(self.chart, matrices[0].tolist(), 'I_1')
        self.I2 = endomorphism(self.chart, matrices[1].tolist(), 'I_2')
        self.I3 = endomorphism(self.chart, matrices[2].tolist(), 'I_3')

        # rotating Killing field, Euler field, and Hamiltonian before the shift
        zero = [0] * 2 * n
        self.Z = vector(self.chart, [c for j in range(n) for c in (y[j], -x[j])] + zero, 'Z')
        self.xi_euler = vector(self.chart, [c for j in range(n) for c in (x[j], y[j])] + zero, 'xi')
        self.f_Z = scalar(self.chart, -sum(s * m for s, m in zip(self.signs, moduli)) / 2, 'f_Z')

    def __str__(self) -> str:
        """Format the model as a string."""
        return f"Rigid c-map model with n = {self.n} and offset {format_number(self.c_offset)} on {self.chart.name}."

    @property
    def dimensions(self) -> int:
        """Real dimension :math:`4n`."""
        return 4 * self.n

    @property
    def structures(self) -> Tuple[EndoField, EndoField, EndoField]:
        """The complex structures :math:`(I_1, I_2, I_3)`."""
        return self.I1, self.I2, self.I3

    @property
    def omegas(self) -> List[PForm]:
        r"""The Kähler forms :math:`\omega_k = g_N(I_k\cdot, \cdot)`."""
        return [calculus.fundamental_form(self.g, I) for I in self.structures]

    @property
    def vertical(self) -> List[int]:
        """Indices of the coordinates of the fibre directions :math:`w_j`."""
        return list(range(2 * self.n, 4 * self.n))

    @functools.cached_property
    def data(self) -> RotatingKillingData:
        """Hamiltonian data of the rotating Killing field with the model's offset."""
        omega1 = calculus.fundamental_form(self.g, self.I1)
        return rotating_data(self.g, self.Z, self.f_Z, omega1, self.c_offset, self.structures)

    def quaternion_residuals(self, point: Sequence[float]) -> Dict[str, float]:
        r"""Measure :math:`I_k^2 = -\mathrm{Id}`, the cyclic products :math:`I_1I_2 = I_3`, compatibility with the
        metric, closure of each :math:`\omega_k`, and :math:`Z = -I_1\xi`.
        """
        point = check_point(self.chart, point)
        metric_value = self.g.value(point)
        I = [s.value(point) for s in self.structures]
        identity = np.eye(self.dimensions)
        products = [I[0] @ I[1] - I[2], I[1] @ I[2] - I[0], I[2] @ I[0] - I[1]]
        return {
            'squares': max(float(np.abs(i @ i + identity).max()) for i in I),
            'products': max(float(np.abs(p).max()) for p in products),
            'compatibility': max(float(np.abs(i.T @ metric_value @ i - metric_value).max()) for i in I),
            'closure': max(
                float(np.abs(calculus.exterior_derivative(w).value(point)).max()) for w in self.omegas
            ),
            'euler': float(np.abs(self.Z.value(point) + I[0] @ self.xi_euler.value(point)).max()),
        }

    def block_structure_residual(self, point: Sequence[float]) -> Residual:
        r"""Measure the deviation of :math:`I_H` from :math:`-I_1` on the base directions and :math:`I_1` on the fibre
        directions.
        """
        point = check_point(self.chart, point)
        signs = np.concatenate([-np.ones(2 * self.n), np.ones(2 * self.n)])
        expected = np.diag(signs) @ self.I1.value(point)
        difference = self.data.I_H.value(point) - expected
        return frame_residual(difference, self.g.value(point), 'ul', point)


def structure_matrices(n: int) -> List[Array]:
    r"""Construct the constant matrices of :math:`I_1`, :math:`I_2`, and :math:`I_3` on :math:`\mathbb{R}^{4n}`."""
    J = np.kron(np.eye(n), np.array([[0.0, -1.0], [1.0, 0.0]]))
    identity = np.eye(2 * n)
    zero = np.zeros((2 * n, 2 * n))
    I1 = np.block([[J, zero], [zero, -J]])
    I2 = np.block([[zero, -identity], [identity, zero]])
    return [I1, I2, I1 @ I2]


def highdim_condition(model: RigidCmapModel, point: Sequence[float]) -> Dict[str, Residual]:
    r"""Measure the restriction :math:`\nabla_VZ` to the fibre directions, which vanishes, and the deviation of
    :math:`\nabla Z` from :math:`-\frac{1}{2}I_1` on :math:`(\mathbb{H}Z)^\perp`.

    The deviation is reported as the operator norm of the matrix of :math:`\nabla Z + \frac{1}{2}I_1`, restricted to
    :math:`(\mathbb{H}Z)^\perp`, in a pseudo-orthonormal frame adapted to the splitting :math:`(\mathbb{H}Z)^\perp
    \oplus \mathbb{H}Z`.
    """
    if model.n < 2:
        raise ValueError("The orthogonal complement of the quaternionic span is trivial unless n >= 2.")
    point = check_point(model.chart, point)
    data = model.data
    metric_value = model.g.value(point)
    nabla = data.nabla_Z.value(point)
    vertical = frame_residual(nabla[:, model.vertical], metric_value, 'u', point)

    # adapted frame of the splitting
    projector = hyperkahler_projector(data).value(point)
    complement = np.eye(model.dimensions) - projector
    frame_perpendicular = gram_schmidt(metric_value, list(complement.T))
    Z = model.Z.value(point)
    span = [Z] + [I.value(point) @ Z for I in model.structures]
    frame = np.column_stack([frame_perpendicular, gram_schmidt(metric_value, span)])
    deviation, successful = precisely_solve(frame, (nabla + model.I1.value(point) / 2) @ frame_perpendicular)
    if not successful:
        raise DegenerateMetricError(np.linalg.det(frame))
    norm = float(np.linalg.norm(deviation, 2))
    return {
        'vertical': vertical,
        'deviation': Residual(norm, norm, point, 'orthonormal'),
    }
