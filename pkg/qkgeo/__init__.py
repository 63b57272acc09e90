"""Public-facing objects."""

from . import exceptions, options
from .configurations.sampling import SamplePlan
from .hkside.boyer_finley import BoyerFinleyModel, TodaSolution
from .hkside.cmap import RigidCmapModel, highdim_condition
from .hkside.deformation import elementary_deformation
from .hkside.rotating import (
    integrability_criterion, kahler_residual, phi_by_quadrature, prop_IH_checks, rotating_data, rotating_residuals,
    sigma_tilde, xi_formula
)
from .qkside.cases import available_cases, case_transform
from .qkside.family import GabcParams, curvature_norm_formula, gabc_metric, gauge_transform, u_family
from .qkside.hermitian import hermitian_pair
from .qkside.killing import classify_algebra, killing_fields
from .qkside.przanowski_tod import PTChart, pt_metric
from .qkside.singularity import singularity_distance
from .tensorlab.curvature import curvature_norm, einstein_residual, ricci, riemann, scalar_curvature
from .tensorlab.fields import Chart, Residual
from .tensorlab.jets import Jet
from .utilities.basics import parallel
from .verify.checks import CheckSpec, registered_checks
from .verify.models import registered_targets, resolve_target
from .verify.suite import Report, build_suite, default_suite, run_check, run_suite
from .version import __version__

__all__ = [
    'exceptions', 'options', 'SamplePlan', 'BoyerFinleyModel', 'TodaSolution', 'RigidCmapModel', 'highdim_condition',
    'elementary_deformation', 'integrability_criterion', 'kahler_residual', 'phi_by_quadrature', 'prop_IH_checks',
    'rotating_data', 'rotating_residuals', 'sigma_tilde', 'xi_formula', 'available_cases', 'case_transform',
    'GabcParams', 'curvature_norm_formula', 'gabc_metric', 'gauge_transform', 'u_family', 'hermitian_pair',
    'classify_algebra', 'killing_fields', 'PTChart', 'pt_metric', 'singularity_distance', 'curvature_norm',
    'einstein_residual', 'ricci', 'riemann', 'scalar_curvature', 'Chart', 'Residual', 'Jet', 'parallel', 'CheckSpec',
    'registered_checks', 'registered_targets', 'resolve_target', 'Report', 'build_suite', 'default_suite', 'run_check',
    'run_suite', '__version__'
]
