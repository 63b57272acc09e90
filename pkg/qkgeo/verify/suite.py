"""Running checks and structuring their reports."""

import time
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

from .checks import CHECKS, CheckSpec, Expectation, applicable_checks, resolve_checks
from .models import resolve_target
from ..exceptions import CasePreconditionError, InapplicableCheckError, MultipleErrors, RegistryError
from ..tensorlab.fields import Residual
from ..utilities.basics import (
    Error, Point, StringRepresentation, format_number, format_point, format_seconds, format_table, output
)


class Report(StringRepresentation):
    """Report of a single run of a check.

    The verdict of a check that is expected to pass is a pass when the largest residual is at most the tolerance. The
    verdict of a check that is expected to fail is a pass when the largest residual exceeds the tolerance. The verdict
    of a check that is expected to match a value is a pass when the largest deviation from that value is at most the
    tolerance. Checks that raise an error fail.

    Attributes
    ----------
    spec : `CheckSpec`
        Specification of the run.
    expected : `str or float`
        The expectation that the verdict was reached against.
    residual : `Residual`
        Statistics of the residual over the sample points.
    passed : `bool`
        Whether the check passed.
    details : `dict`
        Additional quantities that the check reported.
    artifacts : `list of tuple or None`
        Per-point pairs of points and measured quantities, if they were requested.
    error : `str or None`
        Message of the error that stopped the check, if any.

    """

    spec: CheckSpec
    expected: Expectation
    residual: Residual
    passed: bool
    details: Dict[str, Any]
    artifacts: Optional[List[Any]]
    error: Optional[str]

    def __init__(
            self, spec: CheckSpec, expected: Expectation, residual: Residual, details: Dict[str, Any],
            artifacts: Optional[List[Any]] = None, error: Optional[str] = None) -> None:
        """Reach the verdict."""
        self.spec = spec
        self.expected = expected
        self.residual = residual
        self.details = details
        self.artifacts = artifacts
        self.error = error
        if error is not None:
            self.passed = False
        elif expected == 'fail':
            self.passed = bool(residual.max_abs > spec.tolerance)
        else:
            self.passed = bool(residual.max_abs <= spec.tolerance)

    def __str__(self) -> str:
        """Format the report as a string."""
        return format_reports([self.to_dict()])

    @property
    def verdict(self) -> str:
        """Either ``'pass'`` or ``'fail'``."""
        return 'pass' if self.passed else 'fail'

    def to_dict(self) -> dict:
        """Convert the report into a dictionary of plain values, which can be serialized as JSON."""
        return {
            'name': self.spec.name,
            'target': self.spec.target,
            'verdict': self.verdict,
            'expected': self.expected,
            'tolerance': self.spec.tolerance,
            'samples': self.spec.sample_count,
            'seed': self.spec.seed,
            'max_abs': self.residual.max_abs,
            'mean_abs': self.residual.mean_abs,
            'argmax_point': list(self.residual.argmax_point),
            'frame': self.residual.frame,
            'details': {k: plain(v) for k, v in self.details.items()},
            'artifacts': None if self.artifacts is None else [[list(p), q] for p, q in self.artifacts],
            'error': self.error,
        }


def plain(value: Any) -> Any:
    """Convert numpy scalars into plain Python values."""
    if isinstance(value, np.generic):
        return value.item()
    return value


def format_reports(records: Sequence[Mapping[str, Any]], title: str = "Check Reports") -> str:
    """Format report dictionaries as a table, which depends only on the serialized values so that reports re-read
    from JSON are summarized identically.
    """
    header = [
        "Check", "Target", "Expected", ("Tolerance",), ("Max", "Abs"), ("Mean", "Abs"), ("Argmax", "Point"), "Verdict"
    ]
    rows = []
    for record in records:
        expected = record['expected']
        rows.append([
            record['name'],
            record['target'],
            expected if isinstance(expected, str) else format_number(expected),
            format_number(record['tolerance']),
            format_number(record['max_abs']),
            format_number(record['mean_abs']),
            format_point(record['argmax_point']) if record['argmax_point'] else "",
            record['verdict'] if record['error'] is None else f"{record['verdict']} (error)",
        ])
    return format_table(header, *rows, title=title)


def format_artifacts(record: Mapping[str, Any]) -> str:
    """Format the per-point artifacts of a report dictionary as a table."""
    rows = [[format_point(p) if p else "", format_number(q)] for p, q in record['artifacts'] or []]
    return format_table(["Point", "Quantity"], *rows, title=f"{record['name']} on {record['target']}")


def run_check(spec: Union[CheckSpec, str], table: bool = False) -> Report:
    """Run a single check.

    Parameters
    ----------
    spec : `CheckSpec or str`
        Specification of the run, or the name of a check to run with all of its defaults.
    table : `bool, optional`
        Whether to keep per-point artifacts in the report.

    Returns
    -------
    `Report`
        The report, which is determined by the target, seed, and number of samples of the specification.

    Raises
    ------
    `RegistryError`
        If the target is not registered.
    `InapplicableCheckError`
        If the check does not apply to the target.

    """
    if not isinstance(spec, CheckSpec):
        spec = CheckSpec(spec)
    check = CHECKS[spec.name]
    model = resolve_target(spec.target)
    if not check.applies(model):
        raise InapplicableCheckError(spec.name, spec.target, applicable_checks(model))
    expected = check.expected(model) if spec.expected is None else spec.expected

    try:
        pairs, details = check.measure(model, spec.plan())
    except (Error, ArithmeticError, ValueError, np.linalg.LinAlgError) as exception:
        residual = Residual(np.inf, np.inf, (), check.frame)
        return Report(spec, expected, residual, {}, [] if table else None, str(exception))

    points: List[Point] = [p for p, _ in pairs]
    quantities = np.array([q for _, q in pairs], dtype=np.float64)
    if isinstance(expected, str):
        magnitudes = np.abs(quantities)
    else:
        magnitudes = np.abs(quantities - expected)
    residual = Residual.from_pointwise(magnitudes, points, check.frame)
    return Report(spec, expected, residual, details, pairs if table else None)


def run_suite(specs: Sequence[Union[CheckSpec, str]], table: bool = False) -> List[Report]:
    """Run checks in order and return their reports in the same order.

    Checks run one after another. Within each check, sample points are distributed among the workers of a pool
    created by :func:`parallel`, if there is one.
    """
    specs = [s if isinstance(s, CheckSpec) else CheckSpec(s) for s in specs]
    if not specs:
        return []
    output(f"Running {len(specs)} checks ...")
    start_time = time.time()
    reports = []
    for spec in specs:
        check_start_time = time.time()
        report = run_check(spec, table)
        reports.append(report)
        elapsed = format_seconds(time.time() - check_start_time)
        output(f"Check {spec.name} on {spec.target}: {report.verdict} after {elapsed}.")
        if report.error is not None:
            output(report.error)
    passed = sum(r.passed for r in reports)
    output(f"Finished {len(reports)} checks after {format_seconds(time.time() - start_time)}: {passed} passed.")
    return reports


def build_suite(
        targets: Sequence[str], checks: Union[str, Sequence[str]] = 'all',
        tolerances: Optional[Mapping[str, float]] = None, sample_count: Optional[int] = None,
        seed: Optional[int] = None) -> List[CheckSpec]:
    """Build specifications for checks on targets.

    With ``checks='all'``, every check that applies to a target is included. Explicitly named checks must apply to
    every target. Tolerances can be overridden by check name. Specifications are ordered by target and then by the
    order in which checks are registered. Unknown targets, failed preconditions, and inapplicable checks are collected
    over all targets before they are raised.
    """
    names = resolve_checks(checks)
    tolerances = dict(tolerances or {})
    resolve_checks(list(tolerances))
    explicit = not (checks == 'all' or list(checks) == ['all'])
    specs: List[CheckSpec] = []
    errors: List[Error] = []
    for target in targets:
        try:
            model = resolve_target(target)
        except (RegistryError, CasePreconditionError) as exception:
            errors.append(exception)
            continue
        applicable = applicable_checks(model)
        for name in names:
            if name not in applicable:
                if explicit:
                    errors.append(InapplicableCheckError(name, target, applicable))
                continue
            specs.append(CheckSpec(name, target, tolerances.get(name), sample_count, seed))
    if errors:
        raise MultipleErrors(errors)
    return specs


def default_suite(seed: Optional[int] = None) -> List[CheckSpec]:
    """Build specifications for every check on its default target and on its negative control."""
    specs = []
    for check in CHECKS.values():
        specs.append(CheckSpec(check.name, seed=seed))
        if check.control is not None:
            specs.append(CheckSpec(check.name, check.control, seed=seed, expected='fail'))
    return specs
