r"""Distance to the curvature singularity of a family member.

Where :math:`b\rho + 2c` vanishes at some :math:`\rho_* > 0` with :math:`Q(\rho_*) > 0` and :math:`b(b^2 - 4ac) \neq 0`,
the curvature norm blows up. The hypersurfaces of constant :math:`\rho` are orbits of the isometry group, so the
distance from the hypersurface at :math:`\rho_0` to the singularity is the length of a radial segment,

.. math::

   \frac{\sqrt{|K|}}{2}\int_{\rho_0}^{\rho_*}
   \sqrt{\left|\frac{b\rho + 2c}{a\rho^2 + b\rho + c}\right|}\frac{d\rho}{\rho},

which is finite since the integrand only has a square root singularity at :math:`\rho_*`.
"""

import warnings
from typing import Tuple

import numpy as np
import scipy.integrate

from .family import GabcParams
from ..exceptions import NotApplicableError, QuadratureError


def singularity_root(params: GabcParams) -> float:
    r"""Locate the root :math:`\rho_* = -2c/b` of :math:`b\rho + 2c`, which raises an error if it does not bound an
    admissible interval.
    """
    if params.b == 0:
        raise NotApplicableError
    root = -2 * params.c / params.b
    if not root > 0 or not params.a * root**2 + params.b * root + params.c > 0:
        raise NotApplicableError
    return root


def singularity_distance(params: GabcParams, rho0: float) -> Tuple[float, float]:
    r"""Integrate the radial length element from :math:`\rho_0` to the root of :math:`b\rho + 2c`.

    Returns the distance and the error bound of the adaptive quadrature. Raises a :class:`NotApplicableError` unless
    :math:`\rho_0` is admissible and :math:`Q` stays positive on the segment to the root.
    """
    root = singularity_root(params)
    if not params.admissible_rho(rho0) or rho0 == root:
        raise NotApplicableError
    lower, upper = sorted((rho0, root))
    for zero in np.roots([params.a, params.b, params.c]):
        if np.isreal(zero) and lower <= zero.real <= upper:
            raise NotApplicableError

    def integrand(rho: float) -> float:
        ratio = (params.b * rho + 2 * params.c) / (params.a * rho**2 + params.b * rho + params.c)
        return np.sqrt(abs(params.K)) / 2 * np.sqrt(abs(ratio)) / rho

    try:
        with warnings.catch_warnings():
            warnings.simplefilter('error', scipy.integrate.IntegrationWarning)
            value, error = scipy.integrate.quad(integrand, lower, upper, epsabs=1e-11, epsrel=1e-9, limit=200)
    except scipy.integrate.IntegrationWarning as exception:
        raise QuadratureError(exception)
    return float(value), float(error)
