"""Fixtures used by tests."""

from typing import Callable, Iterator, Sequence

import numpy as np
import pytest

from qkgeo import BoyerFinleyModel, GabcParams, PTChart, RigidCmapModel, SamplePlan, gabc_metric, options, u_family
from qkgeo.tensorlab.fields import Field, MetricField
from qkgeo.utilities.basics import Array


# oracle that differentiates any pointwise function by central differences
FiniteDifferences = Callable[[Callable[[Sequence[float]], Array], Sequence[float]], Array]


@pytest.fixture(scope='session', autouse=True)
def configure() -> Iterator[None]:
    """Configure NumPy so that it raises all warnings as exceptions and silence status updates while tests run."""
    old_error = np.seterr(all='raise')
    old_verbose = options.verbose
    options.verbose = False
    yield
    options.verbose = old_verbose
    np.seterr(**old_error)


@pytest.fixture(scope='session')
def finite_differences() -> FiniteDifferences:
    """Central finite differences of a function of a point, with the derivative axis appended last."""
    def differentiate(function: Callable[[Sequence[float]], Array], point: Sequence[float]) -> Array:
        step = options.finite_difference_step
        point = np.asarray(point, dtype=np.float64)
        columns = []
        for index in range(point.size):
            offset = np.zeros_like(point)
            offset[index] = step
            columns.append((np.asarray(function(point + offset)) - np.asarray(function(point - offset))) / (2 * step))
        return np.stack(columns, axis=-1)

    return differentiate


@pytest.fixture(scope='session')
def uhm_params() -> GabcParams:
    """The one-loop deformed universal hypermultiplet."""
    return GabcParams(0, 1, 1, -1)


@pytest.fixture(scope='session')
def pedersen_params() -> GabcParams:
    """A Pedersen metric with isometry algebra u(2)."""
    return GabcParams(1, 1, 1, -1)


@pytest.fixture(scope='session')
def hyperbolic_params() -> GabcParams:
    """Real hyperbolic space."""
    return GabcParams(0, 0, 1, -1)


@pytest.fixture(scope='session')
def uhm_metric(uhm_params: GabcParams) -> MetricField:
    """Metric of the one-loop deformed universal hypermultiplet."""
    return gabc_metric(uhm_params)


@pytest.fixture(scope='session')
def bf_model(uhm_params: GabcParams) -> BoyerFinleyModel:
    """Boyer-Finley model of the separable solution behind the one-loop deformed universal hypermultiplet."""
    return BoyerFinleyModel(u_family(uhm_params))


@pytest.fixture(scope='session')
def pt_chart(pedersen_params: GabcParams) -> PTChart:
    """Przanowski-Tod view of the Pedersen metric with an integrated one-form."""
    return PTChart(u_family(pedersen_params))


@pytest.fixture(scope='session')
def cmap_model() -> RigidCmapModel:
    """Flat rigid c-map model of quaternionic dimension 2."""
    return RigidCmapModel(2)


@pytest.fixture(scope='session')
def sample_points() -> Callable[[Field, int], Array]:
    """Draw a few reproducible admissible points on the chart of a field."""
    def sample(field: Field, size: int = 3) -> Array:
        return SamplePlan(size=size, specification_options={'seed': 0}).sample(field.chart)

    return sample
