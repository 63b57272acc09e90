"""Tests of targets, checks, and suites."""

import json
from typing import Any, Dict, Sequence

import numpy as np
import pytest

from qkgeo import (
    CheckSpec, Report, RigidCmapModel, build_suite, default_suite, highdim_condition, registered_targets,
    resolve_target, run_check, run_suite
)
from qkgeo.configurations.sampling import SamplePlan
from qkgeo.exceptions import (
    CasePreconditionError, InapplicableCheckError, MultipleErrors, RegistryError
)
from qkgeo.qkside.hermitian import opposition_residual
from qkgeo.tensorlab.fields import Residual
from qkgeo.verify import checks
from qkgeo.verify.checks import CHECKS, applicable_checks, resolve_checks
from qkgeo.verify.models import Model
from qkgeo.verify.suite import format_reports


def test_registered_targets_resolve() -> None:
    """Test that every registered target resolves into a model of the expected kind."""
    for name, description in registered_targets():
        model = resolve_target(name)
        assert model.name == name and description
        assert model.kind == name.partition(':')[0]
    assert resolve_target('gabc:perturbed').perturbed
    assert resolve_target('case:3:2,1,1,-1').params.a == 2


@pytest.mark.parametrize('name', [
    pytest.param('sphere:1', id="unknown kind"),
    pytest.param('gabc:1,2', id="too few parameters"),
    pytest.param('gabc:a,b,c,d', id="malformed parameters"),
    pytest.param('cmap:0', id="nonpositive dimension"),
    pytest.param('case:11', id="unknown case"),
])
def test_unknown_targets(name: str) -> None:
    """Test that malformed or unknown identifiers raise registry errors."""
    with pytest.raises(RegistryError):
        resolve_target(name)


def test_target_preconditions() -> None:
    """Test that members outside of the precondition of a case or with empty domains are rejected."""
    with pytest.raises(CasePreconditionError):
        resolve_target('case:3:0,1,1,-1')
    with pytest.raises(ValueError):
        resolve_target('gabc:0,1,1,1')


def test_applicable_checks() -> None:
    """Test that checks only apply to the models that they can be measured on."""
    hyperkahler = applicable_checks(resolve_target('cmap:1'))
    assert 'rotating' in hyperkahler and 'prop_ih' in hyperkahler and 'orientation' in hyperkahler
    assert 'highdim' not in hyperkahler and 'killing' not in hyperkahler
    assert 'highdim' in applicable_checks(resolve_target('cmap:2'))
    assert 'orientation' not in applicable_checks(resolve_target('cmap:2'))
    family = applicable_checks(resolve_target('gabc:0,1,1,-1'))
    assert {'singularity_distance', 'killing', 'algebra'} <= set(family)
    assert 'algebra' not in applicable_checks(resolve_target('gabc:1,0,1,-1'))
    perturbed = applicable_checks(resolve_target('gabc:perturbed'))
    assert {'killing', 'algebra', 'curvnorm'} <= set(perturbed) and 'singularity_distance' not in perturbed
    assert 'xi_kahler' in applicable_checks(resolve_target('bf:perturbed'))
    assert 'case_transform' in applicable_checks(resolve_target('case:perturbed'))


def test_check_specifications() -> None:
    """Test that specifications fill in defaults and reject invalid values."""
    spec = CheckSpec('toda')
    assert spec.target == CHECKS['toda'].target and spec.tolerance == CHECKS['toda'].tolerance
    assert str(spec) and str(spec.check)
    assert spec.replace(seed=3).seed == 3
    with pytest.raises(RegistryError):
        CheckSpec('curvature')
    with pytest.raises(ValueError):
        CheckSpec('toda', tolerance=-1.0)
    with pytest.raises(ValueError):
        CheckSpec('toda', sample_count=0)
    with pytest.raises(ValueError):
        CheckSpec('toda', seed=1.5)
    with pytest.raises(ValueError):
        CheckSpec('toda', expected='maybe')
    assert resolve_checks('all') == list(CHECKS)
    with pytest.raises(RegistryError):
        resolve_checks(['toda', 'curvature'])


def test_expectations() -> None:
    """Test that expectations that depend on the target follow the geometry of the target."""
    check = CHECKS['symmetric']
    assert check.expected(resolve_target('gabc:0,1,1,-1')) == 'fail'
    assert check.expected(resolve_target('gabc:0,0,1,-1')) == 'pass'
    assert check.expected(resolve_target('gabc:0,1,0,-1')) == 'pass'
    assert check.expected(resolve_target('cmap:2')) == 'pass'
    assert check.expectation == "depends on target"
    assert CHECKS['singularity_distance'].expected(resolve_target('gabc:1,-1,1,-1')) == 'pass'
    assert CHECKS['singularity_distance'].expected(resolve_target('gabc:1,1,1,-1')) == 'fail'
    assert CHECKS['orientation'].expected(resolve_target('gabc:0,1,1,-1')) == 'pass'
    assert CHECKS['orientation'].expected(resolve_target('cmap:1')) == 'fail'
    assert CHECKS['highdim'].expected(resolve_target('cmap:2')) == 0.5
    assert CHECKS['highdim'].tolerance == 1e-8


def test_reports_are_deterministic() -> None:
    """Test that runs with the same target, seed, and number of samples give identical reports."""
    spec = CheckSpec('toda', sample_count=4, seed=11)
    first = run_check(spec, table=True)
    second = run_check(spec, table=True)
    assert first.passed and first.verdict == 'pass'
    assert first.to_dict() == second.to_dict()
    assert len(first.artifacts) == 4
    assert str(first)


def test_every_check_has_a_control() -> None:
    """Test that every check that is expected to pass has a registered negative control that it applies to."""
    assert [c.name for c in CHECKS.values() if c.control is None] == ['highdim']
    for check in CHECKS.values():
        if check.control is not None:
            assert check.control in dict(registered_targets())
            assert check.applies(resolve_target(check.control))


@pytest.mark.parametrize('name', [c.name for c in CHECKS.values() if c.control is not None])
def test_negative_controls(name: str) -> None:
    """Test that a check fails on its negative control, which passes when the failure is expected."""
    control = CHECKS[name].control
    failing = run_check(CheckSpec(name, control, sample_count=3, expected='pass'))
    assert failing.error is None
    assert not failing.passed and failing.residual.max_abs > failing.spec.tolerance
    assert run_check(CheckSpec(name, control, sample_count=3, expected='fail')).passed


def test_expected_values() -> None:
    """Test that the off-span deviation matches its value of a half by default while fibre derivatives vanish."""
    matched = run_check(CheckSpec('highdim', sample_count=2))
    assert matched.expected == 0.5 and matched.passed
    assert matched.residual.max_abs < 1e-8
    assert matched.details['vertical'] < 1e-14
    assert not run_check(CheckSpec('highdim', sample_count=2, expected=0.25)).passed


def test_fibre_derivatives_fail_reports(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test that a fibre derivative above its tolerance fails the off-span deviation even when the value matches."""
    def tilted(model: RigidCmapModel, point: Sequence[float]) -> Dict[str, Residual]:
        residuals = highdim_condition(model, point)
        residuals['vertical'] = Residual(1e-6, 1e-6, tuple(point), 'orthonormal')
        return residuals

    monkeypatch.setattr(checks, 'highdim_condition', tilted)
    report = run_check(CheckSpec('highdim', sample_count=2))
    assert not report.passed and report.error is not None
    assert report.residual.max_abs == np.inf


@pytest.mark.parametrize('exception', [
    pytest.param(ValueError("singular input"), id="value error"),
    pytest.param(np.linalg.LinAlgError("singular matrix"), id="linear algebra error"),
])
def test_measurement_errors_fail_reports(exception: Exception, monkeypatch: pytest.MonkeyPatch) -> None:
    """Test that errors raised while measuring fail the report and keep the message."""
    def measure(model: Model, plan: SamplePlan) -> Any:
        raise exception

    monkeypatch.setattr(CHECKS['toda'], '_measure', measure)
    report = run_check(CheckSpec('toda', sample_count=2))
    assert not report.passed and report.residual.max_abs == np.inf
    assert str(exception) in report.error


def test_control_geometry() -> None:
    """Test that catalogued fields stop preserving the perturbed metric and that hyperkähler structures share an
    orientation.
    """
    perturbed = resolve_target('gabc:perturbed')
    points = SamplePlan(size=3, specification_options={'seed': 2}).sample(perturbed.chart)
    assert perturbed.catalog.g is perturbed.pt.g
    assert max(perturbed.catalog.killing_residual(p).max_abs for p in points) > 1e-8
    with pytest.raises(ValueError):
        resolve_target('cmap:1').catalog
    cmap = resolve_target('cmap:1').cmap
    I1, I2, _ = cmap.structures
    assert opposition_residual(cmap.g, I1, I2, (0.3, 0.2, 0.1, 0.4)) == 2


def test_errors_fail_reports() -> None:
    """Test that a report of a check that raised an error fails with an infinite residual."""
    spec = CheckSpec('toda')
    report = Report(spec, 'pass', Residual(np.inf, np.inf, (), 'coordinate'), {}, error="failed")
    assert not report.passed
    assert "(error)" in format_reports([report.to_dict()])


def test_inapplicable_checks() -> None:
    """Test that explicitly requested checks that do not apply raise errors."""
    with pytest.raises(InapplicableCheckError):
        run_check(CheckSpec('killing', 'cmap:2'))
    with pytest.raises(InapplicableCheckError):
        build_suite(['cmap:2'], ['killing'])
    with pytest.raises(RegistryError):
        run_check(CheckSpec('toda', 'sphere:1'))


def test_build_suite() -> None:
    """Test that suites include applicable checks in registration order with overrides applied."""
    specs = build_suite(['gabc:0,1,1,-1', 'cmap:2'], tolerances={'toda': 1e-6}, sample_count=2, seed=5)
    names = [s.name for s in specs if s.target == 'gabc:0,1,1,-1']
    assert names == applicable_checks(resolve_target('gabc:0,1,1,-1'))
    assert all(s.sample_count == 2 and s.seed == 5 for s in specs)
    assert [s.tolerance for s in specs if s.name == 'toda'] == [1e-6]
    assert specs[-1].target == 'cmap:2'
    with pytest.raises(RegistryError):
        build_suite(['cmap:2'], tolerances={'curvature': 1e-3})


def test_default_suite() -> None:
    """Test that the default suite runs every check once and every negative control once more."""
    specs = default_suite(seed=2)
    controls = [c for c in CHECKS.values() if c.control is not None]
    assert len(specs) == len(CHECKS) + len(controls)
    assert {s.name for s in specs} == set(CHECKS)
    assert all(s.expected == 'fail' for s in specs if s.target == CHECKS[s.name].control)


def test_run_suite_and_serialization() -> None:
    """Test that suites keep their order, that empty suites give no reports, and that reports survive JSON."""
    assert run_suite([]) == []
    reports = run_suite([
        CheckSpec('curvnorm', 'gabc:0,0,1,-1', sample_count=2), CheckSpec('toda', 'gabc:0,0,1,-1', sample_count=2)
    ])
    assert [r.spec.name for r in reports] == ['curvnorm', 'toda']
    records = [r.to_dict() for r in reports]
    restored = json.loads(json.dumps(records))
    assert format_reports(restored) == format_reports(records)


def test_errors_are_collected() -> None:
    """Test that problems with several targets are raised together while a single problem keeps its class."""
    with pytest.raises(MultipleErrors) as raised:
        build_suite(['sphere:1', 'case:3:0,1,1,-1', 'cmap:2'], ['killing'])
    message = str(raised.value)
    assert 'sphere:1' in message and 'cmap:2' in message
    with pytest.raises(CasePreconditionError):
        build_suite(['case:3:0,1,1,-1', 'gabc:0,1,1,-1'])
