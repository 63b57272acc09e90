"""Construction of sample points on chart domains."""

import functools
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .. import options
from ..exceptions import SamplingError
from ..tensorlab.fields import Chart
from ..utilities.basics import Array, Options, StringRepresentation, format_options


class SamplePlan(StringRepresentation):
    r"""Configuration for drawing admissible sample points on a chart.

    Draws on the unit cube are mapped affinely onto the chart's sampling box and rejected unless they satisfy every
    domain constraint of the chart with margin :math:`\delta` (see ``margin`` below), until ``size`` points have been
    accepted.

    Parameters
    ----------
    specification : `str`
        How to draw points on the unit cube. One of the following:

            - ``'halton'`` - Generate points according to the Halton sequence. A different prime (starting with 2, 3, 5,
              etc.) is used for each coordinate. To eliminate correlation between coordinates, the first ``100``
              values are by default discarded, and digits are by default scrambled with random permutations. The
              ``discard``, ``scramble``, and ``seed`` fields of ``specification_options`` configure these defaults.

            - ``'monte_carlo'`` - Draw from a pseudo-random uniform distribution. The ``seed`` field of
              ``specification_options`` seeds the random number generator.

        Quasi-random Halton points cover low-dimensional boxes more evenly, which makes worst-case residuals over a
        sample more representative, so they are the default.

    size : `int, optional`
        The number of admissible points to collect. By default, ``options.samples`` is used.
    specification_options : `dict, optional`
        Options for the specification:

            - **seed** : (`int`) - Passed to :class:`numpy.random.RandomState`. By default, ``options.seed`` is used.

            - **discard** : (`int`) - How many values at the beginning of each Halton sequence to discard. By default,
              the first ``100`` values are discarded.

            - **scramble** : (`bool`) - Whether to scramble Halton digits. By default, digits are scrambled.

            - **margin** : (`float`) - Margin :math:`\delta` by which points must satisfy the strict inequalities of
              the domain. By default, ``options.margin`` is used.

            - **rounds** : (`int`) - How many rounds of rejection sampling to attempt before raising an error. Each
              round draws as many candidates as are still missing, scaled up by the observed acceptance rate. By
              default, ``50`` rounds are attempted.

    """

    _specification: str
    _size: int
    _description: str
    _builder: Callable[..., Array]
    _specification_options: Options

    def __init__(self, specification: str = 'halton', size: Optional[int] = None,
                 specification_options: Optional[Options] = None) -> None:
        """Validate the specification and identify the builder."""
        specifications: Dict[str, Tuple[Callable[..., Array], str]] = {
            'halton': (functools.partial(halton), "with scrambled Halton sequences"),
            'monte_carlo': (functools.partial(monte_carlo), "with Monte Carlo simulation"),
        }

        # validate the configuration
        if specification not in specifications:
            raise ValueError(f"specification must be one of {list(specifications.keys())}.")
        if size is None:
            size = options.samples
        if not isinstance(size, int) or size < 0:
            raise ValueError("size must be a nonnegative integer.")
        if specification_options is not None and not isinstance(specification_options, dict):
            raise ValueError("specification_options must be None or a dict.")

        # initialize class attributes
        self._specification = specification
        self._size = size
        self._builder, self._description = specifications[specification]

        # set default options
        self._specification_options = {
            'seed': options.seed,
            'margin': options.margin,
            'rounds': 50,
        }
        if specification == 'halton':
            self._specification_options.update({
                'discard': 100,
                'scramble': True,
            })

        # update and validate options
        self._specification_options.update(specification_options or {})
        if not isinstance(self._specification_options['seed'], int):
            raise ValueError("The specification option seed must be an integer.")
        margin = self._specification_options['margin']
        if not isinstance(margin, (int, float)) or margin < 0:
            raise ValueError("The specification option margin must be a nonnegative float.")
        rounds = self._specification_options['rounds']
        if not isinstance(rounds, int) or rounds < 1:
            raise ValueError("The specification option rounds must be a positive integer.")
        if specification == 'halton':
            discard = self._specification_options['discard']
            if not isinstance(discard, int) or discard < 0:
                raise ValueError("The specification option discard must be a nonnegative integer.")

    def __str__(self) -> str:
        """Format the configuration as a string."""
        return (
            f"Configured to draw {self._size} points {self._description} with options "
            f"{format_options(self._specification_options)}."
        )

    @property
    def size(self) -> int:
        """Number of points to collect."""
        return self._size

    @property
    def seed(self) -> int:
        """Seed of the random number generator."""
        return self._specification_options['seed']

    def replace(self, size: Optional[int] = None, seed: Optional[int] = None) -> 'SamplePlan':
        """Copy the configuration with a different size or seed."""
        specification_options = self._specification_options.copy()
        if seed is not None:
            specification_options['seed'] = seed
        return SamplePlan(self._specification, self._size if size is None else size, specification_options)

    def draw(self, dimensions: int, count: int, start: int, state: np.random.RandomState) -> Array:
        """Draw points on the unit cube."""
        if self._specification == 'halton':
            start += self._specification_options['discard']
            return self._builder(dimensions, count, start, self._specification_options['scramble'], state)
        return self._builder(dimensions, count, state)

    def sample(self, chart: Chart) -> Array:
        """Collect admissible points on a chart. Points are returned in the order in which they were drawn, so the same
        configuration always yields the same points.
        """
        if self._size == 0:
            return np.zeros((0, chart.dimensions), dtype=options.dtype)

        state = np.random.RandomState(self._specification_options['seed'])
        margin = self._specification_options['margin']
        lower = chart.bounds[:, 0]
        width = chart.bounds[:, 1] - chart.bounds[:, 0]

        # draw candidates in rounds until enough of them are admissible
        accepted: List[Array] = []
        drawn = 0
        for _ in range(self._specification_options['rounds']):
            missing = self._size - len(accepted)
            rate = max(len(accepted) / drawn, 0.05) if drawn else 1.0
            count = int(np.ceil(missing / rate))
            candidates = lower + width * self.draw(chart.dimensions, count, drawn, state)
            drawn += count
            accepted.extend(c for c in candidates if chart.contains(c, margin))
            if len(accepted) >= self._size:
                return np.array(accepted[:self._size], dtype=options.dtype)
        raise SamplingError


def monte_carlo(dimensions: int, size: int, state: np.random.RandomState) -> Array:
    """Draw from a pseudo-random uniform distribution on the unit cube."""
    return state.uniform(size=(size, dimensions))


def halton(dimensions: int, size: int, start: int, scramble: bool, state: np.random.RandomState) -> Array:
    """Generate points on the unit cube according to the Halton sequence."""
    sequences = np.zeros((size, dimensions))
    for dimension in range(dimensions):
        base = get_prime(dimension)
        factor = 1 / base
        indices = np.arange(start, start + size)
        permutation = state.permutation(base) if scramble else np.arange(base)
        while 1 - factor < 1:
            indices, remainders = np.divmod(indices, base)
            sequences[:, dimension] += factor * permutation[remainders]
            factor /= base
    return sequences


def get_prime(dimension: int) -> int:
    """Return the prime number corresponding to a dimension when constructing a Halton sequence."""
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53]
    try:
        return primes[dimension]
    except IndexError:
        raise ValueError(f"Halton sequences are only available for {len(primes)} dimensions here.")
