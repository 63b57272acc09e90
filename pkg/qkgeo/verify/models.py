r"""Registry of the models on which checks run.

Targets are named by short identifiers:

- ``'bf:a,b,c,K'`` is the Boyer-Finley metric of the Toda solution :math:`u = \ln Q - 2\ln D` of a family member.
- ``'bf:perturbed'`` is the Boyer-Finley metric of :math:`u + \rho x/10` for :math:`(a, b, c, K) = (0, 1, 1, -1)`,
  which does not solve the Toda equation.
- ``'cmap:n'`` is the flat rigid c-map model of quaternionic dimension ``n``.
- ``'cmap:perturbed'`` is the rigid c-map model of quaternionic dimension ``2`` with the rotating field doubled and
  its Hamiltonian kept, so that the field is still Killing but rotates the complex structures at twice the rate and
  is no longer generated by the Hamiltonian.
- ``'gabc:a,b,c,K'`` is a member of the family :math:`g^{a,b,c}`, also viewed as a Przanowski-Tod metric.
- ``'gabc:perturbed'`` is the Przanowski-Tod metric of :math:`u + \rho x/10` for :math:`(a, b, c, K) = (1, 1, 1, -1)`
  with :math:`\Theta` integrated from the prescribed two-form.
- ``'case:N'`` and ``'case:N:a,b,c,K'`` are the coordinate changes of a case, by default on a representative member.
- ``'case:perturbed'`` is the coordinate change of case ``3`` compared against the metric of ``'gabc:perturbed'``.

"""

import functools
from typing import Dict, List, Optional, Tuple

import sympy as sp

from ..exceptions import RegistryError
from ..hkside.boyer_finley import RHO, X, Y, BoyerFinleyModel, TodaSolution
from ..hkside.cmap import RigidCmapModel
from ..hkside.rotating import RotatingKillingData, rotating_data
from ..qkside.cases import CASES, CaseTransform, available_cases, case_transform
from ..qkside.family import GabcParams, gabc_metric, u_family
from ..qkside.killing import KillingCatalog
from ..qkside.przanowski_tod import PTChart
from ..tensorlab import calculus
from ..tensorlab.fields import Chart, MetricField, VectorField
from ..utilities.basics import StringRepresentation


# forms of target identifiers
TARGET_FORMS = (
    'bf:<a>,<b>,<c>,<K>', 'bf:perturbed', 'cmap:<n>', 'cmap:perturbed', 'gabc:<a>,<b>,<c>,<K>', 'gabc:perturbed',
    'case:<N>', 'case:<N>:<a>,<b>,<c>,<K>', 'case:perturbed'
)

# term added to Toda solutions to build negative controls
PERTURBATION = sp.Rational(1, 10) * RHO * X

# members from which the perturbed targets are built
PERTURBED_PARAMETERS = {
    'bf': (0.0, 1.0, 1.0, -1.0),
    'gabc': (1.0, 1.0, 1.0, -1.0),
}

# quaternionic dimension of the perturbed rigid c-map target and the case whose transform is perturbed
PERTURBED_DIMENSION = 2
PERTURBED_CASE = '3'

# factor by which the rotating field of the perturbed rigid c-map target is scaled
PERTURBED_SCALE = 2

# representative members of each case
CASE_PARAMETERS: Dict[str, Tuple[float, float, float, float]] = {
    '1': (0.0, 0.0, 1.0, -1.0),
    '2': (0.0, 1.0, 1.0, -1.0),
    '3': (1.0, 1.0, 1.0, -1.0),
    '4+': (1.0, 0.0, 1.0, -1.0),
    '4-': (1.0, 0.0, -1.0, 1.0),
    '5': (1.0, -1.0, 1.0, -1.0),
    '6': (1.0, -1.0, 0.0, 1.0),
    '7': (-1.0, -1.0, 1.0, -1.0),
    '8': (-1.0, 0.0, 1.0, -1.0),
    '9': (-1.0, 1.0, 1.0, -1.0),
    '10': (-1.0, 1.0, 1.0, -1.0),
}

# registered targets with descriptions, in the order in which they are listed
REGISTERED_TARGETS: List[Tuple[str, str]] = [
    ('bf:0,1,1,-1', "Boyer-Finley metric of the separable solution behind the deformed universal hypermultiplet"),
    ('bf:perturbed', "Boyer-Finley metric of a perturbed function that does not solve the Toda equation"),
    ('cmap:1', "flat rigid c-map model of quaternionic dimension 1"),
    ('cmap:2', "flat rigid c-map model of quaternionic dimension 2"),
    ('cmap:3', "flat rigid c-map model of quaternionic dimension 3"),
    ('cmap:perturbed', "rigid c-map model with a doubled rotating field and the original Hamiltonian"),
    ('gabc:0,1,1,-1', "one-loop deformed universal hypermultiplet"),
    ('gabc:0,0,1,-1', "real hyperbolic space"),
    ('gabc:0,1,0,-1', "member with c = 0, which is locally symmetric"),
    ('gabc:1,2,1,-1', "member with vanishing discriminant, which is locally symmetric"),
    ('gabc:1,1,1,-1', "Pedersen metric with isometry algebra u(2)"),
    ('gabc:-1,1,1,-1', "member with isometry algebra u(1,1)"),
    ('gabc:1,0,1,-1', "cohomogeneity one member with b = 0"),
    ('gabc:1,-1,1,-1', "member with a curvature singularity at rho = 2"),
    ('gabc:perturbed', "Przanowski-Tod metric of a perturbed function that does not solve the Toda equation"),
] + [(f'case:{c}', f"coordinate change of case {c}") for c in CASES] + [
    ('case:perturbed', "coordinate change of case 3 compared against the perturbed Przanowski-Tod metric"),
]


class Model(StringRepresentation):
    """A resolved target along with lazily constructed views of it.

    Attributes
    ----------
    name : `str`
        Target identifier.
    kind : `str`
        One of ``'bf'``, ``'cmap'``, ``'gabc'``, or ``'case'``.
    params : `GabcParams or None`
        The family member behind the target. For perturbed targets, this is the member that was perturbed.
    perturbed : `bool`
        Whether the target is a negative control.
    n : `int or None`
        Quaternionic dimension of rigid c-map targets.

    """

    name: str
    kind: str
    params: Optional[GabcParams]
    perturbed: bool
    n: Optional[int]
    _transform: Optional[CaseTransform]

    def __init__(
            self, name: str, kind: str, params: Optional[GabcParams] = None, perturbed: bool = False,
            n: Optional[int] = None, transform: Optional[CaseTransform] = None) -> None:
        """Store the resolved identifier."""
        self.name = name
        self.kind = kind
        self.params = params
        self.perturbed = perturbed
        self.n = n
        self._transform = transform

    def __str__(self) -> str:
        """Format the model as a string."""
        return f"Model '{self.name}' of kind {self.kind}."

    @property
    def family(self) -> bool:
        r"""Whether the model's metric is an unperturbed member :math:`g^{a,b,c}`."""
        return self.kind in {'gabc', 'case'} and not self.perturbed

    @functools.cached_property
    def solution(self) -> TodaSolution:
        """The Toda solution behind the model, perturbed for negative controls."""
        if self.params is None:
            raise ValueError("Rigid c-map models have no Toda solution.")
        solution = u_family(self.params)
        if self.perturbed:
            solution = solution.replace(solution.expression + PERTURBATION)
        return solution

    @functools.cached_property
    def bf(self) -> BoyerFinleyModel:
        """The Boyer-Finley model of Boyer-Finley targets."""
        if self.kind != 'bf':
            raise ValueError(f"{self.name} is not a Boyer-Finley target.")
        return BoyerFinleyModel(self.solution, validate=not self.perturbed)

    @functools.cached_property
    def cmap(self) -> RigidCmapModel:
        """The rigid c-map model of rigid c-map targets."""
        if self.kind != 'cmap' or self.n is None:
            raise ValueError(f"{self.name} is not a rigid c-map target.")
        return RigidCmapModel(self.n)

    @functools.cached_property
    def data(self) -> RotatingKillingData:
        """Hamiltonian data of the rotating Killing field of hyper-Kähler targets, with the field doubled on the
        perturbed rigid c-map target.
        """
        if self.kind == 'cmap':
            if not self.perturbed:
                return self.cmap.data
            cmap = self.cmap
            Z = calculus.combine(VectorField, [cmap.Z], lambda z: PERTURBED_SCALE * z, label=f'{PERTURBED_SCALE}Z')
            omega1 = calculus.fundamental_form(cmap.g, cmap.I1)
            return rotating_data(cmap.g, Z, cmap.f_Z, omega1, cmap.c_offset, cmap.structures)
        bf = self.bf
        return rotating_data(bf.g, bf.Z, bf.f_Z, bf.omega1)

    @functools.cached_property
    def pt(self) -> PTChart:
        r"""The Przanowski-Tod view of family targets. The one-form :math:`\Theta` is declared in closed form on
        unperturbed members and integrated otherwise.
        """
        if self.kind not in {'gabc', 'case'} or self.params is None:
            raise ValueError(f"{self.name} is not a family target.")
        if self.perturbed:
            return PTChart(self.solution)
        K, b, D = self.params.K, self.params.b, self.params.D
        return PTChart(self.solution, theta=[0, -K * b * Y / D, K * b * X / D, 0])

    @functools.cached_property
    def catalog(self) -> KillingCatalog:
        """Killing fields of the member behind family targets, measured against the perturbed metric of negative
        controls, which they do not preserve.
        """
        if self.kind not in {'gabc', 'case'} or self.params is None:
            raise ValueError(f"{self.name} is not a family target.")
        return KillingCatalog(self.params, None if self.family else self.pt.g)

    @functools.cached_property
    def transforms(self) -> List[CaseTransform]:
        """Coordinate changes of case targets, or all cases whose preconditions a family target satisfies."""
        if self._transform is not None:
            return [self._transform]
        if not self.family:
            return []
        return [case_transform(c, self.params) for c in available_cases(self.params)]

    @functools.cached_property
    def g(self) -> MetricField:
        """The metric of the model."""
        if self.kind == 'bf':
            return self.bf.g
        if self.kind == 'cmap':
            return self.cmap.g
        return gabc_metric(self.params) if self.family else self.pt.g

    @functools.cached_property
    def chart(self) -> Chart:
        """Chart on which checks sample points."""
        if self.kind == 'bf':
            return self.bf.chart
        if self.kind == 'cmap':
            return self.cmap.chart
        return self.pt.chart

    @property
    def einstein_constant(self) -> Optional[float]:
        r"""The expected Einstein constant, which is :math:`3\nu` on family members and zero on hyper-Kähler models.
        It is unknown for negative controls.
        """
        if self.perturbed:
            return None
        if self.family:
            return 3 * self.params.nu
        return 0.0


def parse_parameters(text: str, name: str) -> Tuple[float, float, float, float]:
    """Parse the four comma-separated parameters of a target, which raises a registry error if they are malformed."""
    try:
        values = tuple(float(v) for v in text.split(','))
    except ValueError:
        raise RegistryError(name, TARGET_FORMS)
    if len(values) != 4:
        raise RegistryError(name, TARGET_FORMS)
    return values  # type: ignore


@functools.lru_cache(maxsize=None)
def resolve_target(name: str) -> Model:
    """Resolve a target identifier into a model.

    Malformed or unknown identifiers raise a :class:`RegistryError` that lists the forms of valid identifiers.
    Parameters whose admissible domain does not meet the sampling box raise a :class:`ValueError`, and members that do
    not satisfy the precondition of a requested case raise a :class:`CasePreconditionError`.
    """
    if not isinstance(name, str):
        raise RegistryError(str(name), TARGET_FORMS)
    kind, _, argument = name.partition(':')
    if kind in {'bf', 'gabc'}:
        if argument == 'perturbed':
            return Model(name, kind, GabcParams(*PERTURBED_PARAMETERS[kind]), perturbed=True)
        return Model(name, kind, GabcParams(*parse_parameters(argument, name)))
    if kind == 'cmap':
        if argument == 'perturbed':
            return Model(name, kind, perturbed=True, n=PERTURBED_DIMENSION)
        if not argument.isdigit() or int(argument) < 1:
            raise RegistryError(name, TARGET_FORMS)
        return Model(name, kind, n=int(argument))
    if kind == 'case':
        if argument == 'perturbed':
            params = GabcParams(*PERTURBED_PARAMETERS['gabc'])
            return Model(name, kind, params, perturbed=True, transform=case_transform(PERTURBED_CASE, params))
        case, _, rest = argument.partition(':')
        if case not in CASE_PARAMETERS:
            raise RegistryError(name, [f'case:{c}' for c in CASES])
        values = parse_parameters(rest, name) if rest else CASE_PARAMETERS[case]
        transform = case_transform(case, GabcParams(*values))
        return Model(name, kind, transform.params, transform=transform)
    raise RegistryError(name, TARGET_FORMS)


def registered_targets() -> List[Tuple[str, str]]:
    """List registered target identifiers and their descriptions in a stable order."""
    return list(REGISTERED_TARGETS)
