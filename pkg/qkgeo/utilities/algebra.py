"""Algebraic routines."""

import warnings
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .basics import Array


def compute_condition_number(x: Array) -> float:
    """Compute the condition number of a square matrix."""
    if not np.isfinite(x).all():
        return np.nan
    return np.linalg.cond(x.astype(np.float64))


def precisely_compute_eigenvalues(x: Array) -> Tuple[Array, bool]:
    """Compute the eigenvalues of a real symmetric matrix."""
    try:
        with warnings.catch_warnings():
            warnings.filterwarnings('error')
            eigenvalues = scipy.linalg.eigvalsh(x) if x.size > 0 else x.flatten()
            successful = True
    except (ValueError, scipy.linalg.LinAlgError, scipy.linalg.LinAlgWarning):
        eigenvalues = np.full_like(np.diag(x), np.nan)
        successful = False

    return eigenvalues, successful


def precisely_solve(a: Array, b: Array) -> Tuple[Array, bool]:
    """Attempt to precisely solve a system of equations."""
    try:
        with warnings.catch_warnings():
            warnings.filterwarnings('error')
            solved = scipy.linalg.solve(a, b) if b.size > 0 else b
            successful = True
    except (ValueError, scipy.linalg.LinAlgError, scipy.linalg.LinAlgWarning):
        solved = np.full_like(b, np.nan)
        successful = False

    return solved, successful


def precisely_invert(x: Array) -> Tuple[Array, bool]:
    """Attempt to precisely invert a matrix."""
    try:
        with warnings.catch_warnings():
            warnings.filterwarnings('error')
            inverted = scipy.linalg.inv(x) if x.size > 0 else x
            successful = True
    except (ValueError, scipy.linalg.LinAlgError, scipy.linalg.LinAlgWarning):
        inverted = np.full_like(x, np.nan)
        successful = False

    return inverted, successful


def least_squares_residual(basis: Array, target: Array) -> Tuple[Array, float]:
    """Project a target vector onto the column span of a basis by least squares. Return the coefficients along with the
    largest absolute component of the part of the target that the basis does not explain.
    """
    coefficients = scipy.linalg.lstsq(basis, target)[0]
    residual = target - basis @ coefficients
    return coefficients, float(np.abs(residual).max()) if residual.size > 0 else 0.0


def count_signature(eigenvalues: Array, atol: float = 0.0) -> Tuple[int, int, int]:
    """Count positive, negative, and zero eigenvalues with an absolute zero threshold."""
    positive = int((eigenvalues > atol).sum())
    negative = int((eigenvalues < -atol).sum())
    return positive, negative, eigenvalues.size - positive - negative


def gram_schmidt(
        metric: Array, seeds: Optional[Sequence[Array]] = None, complex_structure: Optional[Array] = None,
        atol: float = 1e-10) -> Array:
    r"""Orthonormalize seed vectors with respect to a possibly indefinite metric.

    Each accepted vector :math:`e` is normalized by :math:`\sqrt{|g(e, e)|}`, so the resulting frame is
    pseudo-orthonormal. Seeds default to the coordinate frame. Seeds whose remainder after projection is null or
    vanishes are skipped. If a complex structure :math:`J` compatible with the metric is given, each accepted vector
    :math:`e` is immediately followed by :math:`Je`, which yields a frame adapted to :math:`J`.

    Returns a matrix whose columns are the frame vectors.
    """
    dimensions = metric.shape[0]
    if seeds is None:
        seeds = list(np.eye(dimensions))
    frame: list = []
    norms: list = []

    def accept(vector: Array) -> bool:
        for other, norm in zip(frame, norms):
            vector = vector - norm * (other @ metric @ vector) * other
        length = vector @ metric @ vector
        if abs(length) < atol or np.abs(vector).max() < atol:
            return False
        frame.append(vector / np.sqrt(abs(length)))
        norms.append(np.sign(length))
        return True

    for seed in seeds:
        if len(frame) == dimensions:
            break
        seed = np.asarray(seed, dtype=np.float64)
        if accept(seed) and complex_structure is not None and len(frame) < dimensions:
            accept(complex_structure @ frame[-1])

    return np.column_stack(frame)
