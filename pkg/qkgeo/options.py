r"""Global options.

Attributes
----------
digits : `int`
    Number of digits displayed by status updates and reports. The default number of digits is ``7``. The number of
    digits can be changed to, for example, ``2``, with ``qkgeo.options.digits = 2``.
verbose : `bool`
    Whether to output status updates. By default, verbosity is turned on. Verbosity can be turned off with
    ``qkgeo.options.verbose = False``.
verbose_tracebacks : `bool`
    Whether to include full tracebacks in error messages. By default, full tracebacks are turned off. These can be
    useful when attempting to find the source of an error message. Tracebacks can be turned on with
    ``qkgeo.options.verbose_tracebacks = True``.
verbose_output : `callable`
    Function used to output status updates. The default function is simply ``print``. The function can be changed, for
    example, to include an indicator that statuses are from this package, with
    ``qkgeo.options.verbose_output = lambda x: print(f"qkgeo: {x}")``.
dtype : `dtype`
    The data type used for numeric arrays, which is by default ``numpy.float64``.
seed : `int`
    Default seed for sample plans. The default is ``42``. The command line also honors the ``QKGEO_SEED`` environment
    variable, which overrides both this option and any configuration file.
samples : `int`
    Default number of sample points per check, which is by default ``200``.
margin : `float`
    Margin :math:`\delta` by which sampled points must satisfy every strict inequality of a chart's domain. Points
    closer than this to the boundary are rejected. The default is ``1e-6``.
jet_order : `int`
    Highest supported order of Taylor jets, which is ``3``. Third derivatives are what covariant derivatives of the
    Riemann tensor need.
almost_complex_atol : `float`
    Absolute tolerance for :math:`J^2 = -\mathrm{Id}` before an endomorphism is rejected as an almost complex
    structure. The default is ``1e-8``.
classification_atol : `float`
    Eigenvalues of Killing forms with magnitudes below this threshold count as zero when classifying Lie algebras. The
    default is ``1e-6``.
killing_atol : `float`
    Largest Lie derivative of the metric along catalogued Killing fields, measured in an orthonormal frame, below which
    the fields count as isometries when their algebra is classified. The default is ``1e-8``.
finite_difference_step : `float`
    Step used by central finite difference oracles in tests. The default is ``1e-5``.

"""

import numpy as _np


digits = 7
verbose = True
verbose_tracebacks = False
verbose_output = print
dtype = _np.float64
seed = 42
samples = 200
margin = 1e-6
jet_order = 3
almost_complex_atol = 1e-8
classification_atol = 1e-6
killing_atol = 1e-8
finite_difference_step = 1e-5
