"""Tests of the command-line front end."""

import csv
import json
from pathlib import Path
from typing import Any, List

import pytest

from qkgeo.cli import (
    SWEEP_HEADER, ConfigError, SweepSpec, build_parser, main, merge_config, split_targets, summarize_json
)
from qkgeo.verify.checks import CHECKS


def read_rows(path: Path) -> List[dict]:
    """Read the rows of a sweep table."""
    with open(path, encoding='utf-8', newline='') as handle:
        reader = csv.DictReader(handle)
        assert tuple(reader.fieldnames) == SWEEP_HEADER
        return list(reader)


def test_list(capsys: pytest.CaptureFixture) -> None:
    """Test that listing prints every registered target and check."""
    assert main(['list']) == 0
    printed = capsys.readouterr().out
    assert 'gabc:0,1,1,-1' in printed and 'case:10' in printed
    assert 'singularity_distance' in printed and 'depends on target' in printed


def test_verify_passes(capsys: pytest.CaptureFixture) -> None:
    """Test that passing checks exit with zero and print a summary."""
    argv = ['verify', '--target', 'gabc:0,0,1,-1', '--checks', 'toda,curvnorm', '--samples', '2', '--processes', '2']
    assert main(argv, environ={}) == 0
    printed = capsys.readouterr().out
    assert 'curvnorm' in printed and 'pass' in printed


def test_verify_fails(capsys: pytest.CaptureFixture) -> None:
    """Test that a failing check exits with one."""
    assert main(['verify', '--target', 'bf:perturbed', '--checks', 'toda', '--samples', '2'], environ={}) == 1
    assert 'fail' in capsys.readouterr().out


@pytest.mark.parametrize('argv', [
    pytest.param(['verify', '--target', 'sphere:1'], id="unknown target"),
    pytest.param(['verify', '--target', 'gabc:0,1,1,-1', '--checks', 'curvature'], id="unknown check"),
    pytest.param(['verify', '--target', 'cmap:2', '--checks', 'killing'], id="inapplicable check"),
    pytest.param(['verify', '--target', 'case:3:0,1,1,-1'], id="case precondition"),
    pytest.param(['verify', '--checks', 'toda', '--tol', 'toda'], id="malformed tolerance"),
    pytest.param(['verify', '--checks', 'toda', '--tol', 'curvature=1e-3'], id="unknown tolerance"),
    pytest.param(['sweep', '--sweep', 'curvnorm:x:0:1:2'], id="sweep parameter"),
    pytest.param(['sweep', '--sweep', 'volume:rho:0:1:2'], id="sweep quantity"),
    pytest.param(['sweep', '--sweep', 'curvnorm:rho:0.5:2:-1'], id="sweep steps"),
    pytest.param(['sweep'], id="missing sweep"),
    pytest.param(['sweep', '--sweep', 'curvnorm:rho:0.5:2:3', '--target', 'cmap:2'], id="sweep target"),
])
def test_invalid_configurations(argv: List[str], capsys: pytest.CaptureFixture) -> None:
    """Test that invalid configurations exit with two and explain themselves on standard error."""
    assert main(argv, environ={}) == 2
    assert capsys.readouterr().err.startswith("[error]")


def test_measurement_errors_exit_with_one(monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture) -> None:
    """Test that an error raised while measuring fails the report instead of aborting the run."""
    def measure(model: Any, plan: Any) -> Any:
        raise ValueError("singular input")

    monkeypatch.setattr(CHECKS['toda'], '_measure', measure)
    assert main(['verify', '--target', 'gabc:0,0,1,-1', '--checks', 'toda', '--samples', '2'], environ={}) == 1
    captured = capsys.readouterr()
    assert 'fail' in captured.out and not captured.err.startswith("[error]")


def test_sweep_help(capsys: pytest.CaptureFixture) -> None:
    """Test that the help of the sweep subcommand says which parameter can be swept."""
    with pytest.raises(SystemExit) as raised:
        main(['sweep', '--help'])
    assert raised.value.code == 0
    assert 'param must be rho' in ' '.join(capsys.readouterr().out.split())


def test_invalid_flags() -> None:
    """Test that flags that the parser rejects exit with two."""
    with pytest.raises(SystemExit) as raised:
        main(['verify', '--format', 'xml'])
    assert raised.value.code == 2


def test_json_output(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    """Test that JSON output records the configuration and reports, and that it summarizes like the text output."""
    path = tmp_path / 'report.json'
    argv = [
        'verify', '--target', 'cmap:2', '--checks', 'rotating,highdim', '--samples', '2', '--format', 'json',
        '--out', str(path)
    ]
    assert main(argv, environ={}) == 0
    text = path.read_text(encoding='utf-8')
    document = json.loads(text)
    assert [r['name'] for r in document['reports']] == ['rotating', 'highdim']
    assert document['config']['samples'] == 2 and document['version']
    assert capsys.readouterr().out == summarize_json(text) + '\n'


def test_seed_precedence(tmp_path: Path) -> None:
    """Test that flags override the configuration file and that the environment overrides both."""
    path = tmp_path / 'qkgeo.ini'
    path.write_text("[qkgeo]\nseed = 5\nsamples = 3\ntargets = gabc:0,0,1,-1\ntable = yes\n", encoding='utf-8')
    parser = build_parser()
    from_file = merge_config(parser.parse_args(['verify', '--config', str(path)]), {})
    assert (from_file.seed, from_file.samples, from_file.targets, from_file.table) == (5, 3, ['gabc:0,0,1,-1'], True)
    from_flag = merge_config(parser.parse_args(['verify', '--config', str(path), '--seed', '3']), {})
    assert from_flag.seed == 3
    from_environment = merge_config(
        parser.parse_args(['verify', '--config', str(path), '--seed', '3']), {'QKGEO_SEED': '7'}
    )
    assert from_environment.seed == 7
    assert str(from_environment)


def test_seed_from_environment(tmp_path: Path) -> None:
    """Test that reports carry the seed from the environment."""
    path = tmp_path / 'report.json'
    argv = [
        'verify', '--target', 'gabc:0,0,1,-1', '--checks', 'toda', '--samples', '2', '--seed', '3', '--format', 'json',
        '--out', str(path)
    ]
    assert main(argv, environ={'QKGEO_SEED': '7'}) == 0
    assert json.loads(path.read_text(encoding='utf-8'))['reports'][0]['seed'] == 7


def test_invalid_configuration_files(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    """Test that configuration files with unknown keys or without the section are rejected."""
    unknown = tmp_path / 'unknown.ini'
    unknown.write_text("[qkgeo]\ncolour = blue\n", encoding='utf-8')
    assert main(['verify', '--config', str(unknown)], environ={}) == 2
    assert 'colour' in capsys.readouterr().err
    missing = tmp_path / 'missing.ini'
    missing.write_text("[other]\nseed = 1\n", encoding='utf-8')
    assert main(['verify', '--config', str(missing)], environ={}) == 2
    assert main(['verify', '--config', str(tmp_path / 'absent.ini')], environ={}) == 2


def test_sweep_spec() -> None:
    """Test that sweep specifications are parsed and validated."""
    spec = SweepSpec('curvnorm:rho:0.5:2:4')
    assert (spec.quantity, spec.param, spec.lower, spec.upper, spec.steps) == ('curvnorm', 'rho', 0.5, 2.0, 4)
    assert SweepSpec(str(spec)).steps == 4
    with pytest.raises(ConfigError):
        SweepSpec('curvnorm:rho:0.5:2')
    with pytest.raises(ConfigError):
        SweepSpec('curvnorm:rho:low:2:4')


def test_curvature_norm_sweep(tmp_path: Path) -> None:
    """Test that a sweep writes one row per step with the closed form matching the numerical value."""
    path = tmp_path / 'sweep.csv'
    assert main(['sweep', '--sweep', 'curvnorm:rho:0.5:2:4', '--out', str(path)], environ={}) == 0
    rows = read_rows(path)
    assert [float(r['value']) for r in rows] == [0.5, 1.0, 1.5, 2.0]
    for row in rows:
        assert row['param'] == 'rho' and row['quantity'] == 'curvnorm'
        assert float(row['abs_diff']) <= 1e-8 * float(row['formula'])


def test_scalar_and_distance_sweeps(tmp_path: Path) -> None:
    """Test sweeps of the scalar curvature and of the distance to the curvature singularity."""
    scalar_path = tmp_path / 'scalar.csv'
    assert main(['sweep', '--sweep', 'scalar:rho:0.5:1.5:3', '--out', str(scalar_path)], environ={}) == 0
    for row in read_rows(scalar_path):
        assert float(row['formula']) == -24 and float(row['abs_diff']) < 1e-8
    distance_path = tmp_path / 'distance.csv'
    argv = ['sweep', '--sweep', 'distance:rho:0.5:1.5:3', '--target', 'gabc:1,-1,1,-1', '--out', str(distance_path)]
    assert main(argv, environ={}) == 0
    distances = [float(r['numeric']) for r in read_rows(distance_path)]
    assert distances[0] > distances[1] > distances[2] > 0


def test_empty_and_flagged_sweeps(tmp_path: Path) -> None:
    """Test that sweeps without steps write the header alone and that inadmissible steps are flagged."""
    empty = tmp_path / 'empty.csv'
    assert main(['sweep', '--sweep', 'curvnorm:rho:0.5:2:0', '--out', str(empty)], environ={}) == 0
    assert empty.read_text(encoding='utf-8') == ','.join(SWEEP_HEADER) + '\n'
    flagged = tmp_path / 'flagged.csv'
    assert main(['sweep', '--sweep', 'curvnorm:rho:-1:1:3', '--out', str(flagged)], environ={}) == 1
    rows = read_rows(flagged)
    assert [r['formula'] for r in rows[:2]] == ['nan', 'nan']
    assert rows[2]['formula'] != 'nan'


def test_target_lists() -> None:
    """Test that lists of targets split between identifiers but not between their parameters."""
    assert split_targets('gabc:0,1,1,-1, cmap:2,case:3:2,1,1,-1') == ['gabc:0,1,1,-1', 'cmap:2', 'case:3:2,1,1,-1']
    assert split_targets(['bf:perturbed', 'gabc:1,1,1,-1']) == ['bf:perturbed', 'gabc:1,1,1,-1']
    assert split_targets(None) == []
