"""Command-line front end.

Three subcommands are available:

- ``qkgeo verify`` runs checks on targets and exits with ``0`` if every check passed, ``1`` if some check failed, and
  ``2`` if the configuration was invalid.
- ``qkgeo sweep`` compares closed forms with numerical values along a range of the radial coordinate and writes a CSV
  table with the header ``param,value,quantity,formula,numeric,abs_diff``.
- ``qkgeo list`` prints the registered targets and checks.

Options can also be read from an INI file with a single ``[qkgeo]`` section whose keys mirror the flags: ``targets``,
``checks``, ``tol``, ``samples``, ``seed``, ``out``, ``format``, ``sweep``, ``processes``, and ``table``. Flags override
values from the file, and the ``QKGEO_SEED`` environment variable overrides both.
"""

import argparse
import configparser
import contextlib
import csv
import io
import json
import os
import re
import sys
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import options
from .exceptions import (
    CasePreconditionError, InapplicableCheckError, MultipleErrors, NotApplicableError, RegistryError
)
from .qkside.family import curvature_norm_formula, scalar_curvature_formula
from .qkside.singularity import singularity_distance
from .tensorlab.curvature import curvature_norm, scalar_curvature
from .utilities.basics import Error, StringRepresentation, format_number, format_table, parallel
from .verify.checks import CHECKS, CheckSpec, resolve_checks
from .verify.models import Model, registered_targets, resolve_target
from .verify.suite import Report, build_suite, default_suite, format_artifacts, format_reports, run_suite
from .version import __version__


# keys of the configuration file section
CONFIG_KEYS = ('targets', 'checks', 'tol', 'samples', 'seed', 'out', 'format', 'sweep', 'processes', 'table')

# quantities that can be swept
SWEEP_QUANTITIES = ('curvnorm', 'scalar', 'distance')

# header of sweep tables
SWEEP_HEADER = ('param', 'value', 'quantity', 'formula', 'numeric', 'abs_diff')

# commas that separate target identifiers rather than their parameters
TARGET_SEPARATOR = re.compile(r',(?=\s*[A-Za-z]\w*:)')

# environment variable that overrides the seed
SEED_VARIABLE = 'QKGEO_SEED'


class ConfigError(Exception):
    """Invalid command-line configuration."""


class SweepSpec(StringRepresentation):
    r"""Parsed specification ``quantity:param:lo:hi:steps`` of a sweep.

    The only supported ``param`` is ``rho``. Curvature norms, scalar curvatures, and distances to the singularity depend
    on :math:`\rho` alone, so sweeps along :math:`x`, :math:`y`, or :math:`t` would be constant. Steps are evaluated at
    :math:`(\rho, 0, 0, 0)`.

    """

    quantity: str
    param: str
    lower: float
    upper: float
    steps: int

    def __init__(self, text: str) -> None:
        """Parse and validate the specification."""
        parts = text.split(':')
        if len(parts) != 5:
            raise ConfigError(f"sweep must have the form quantity:param:lo:hi:steps, not '{text}'.")
        quantity, param, lower, upper, steps = parts
        if quantity not in SWEEP_QUANTITIES:
            raise ConfigError(f"sweep quantity must be one of {list(SWEEP_QUANTITIES)}.")
        if param != 'rho':
            raise ConfigError("sweeps run along the radial coordinate, so param must be 'rho'.")
        try:
            self.lower = float(lower)
            self.upper = float(upper)
            self.steps = int(steps)
        except ValueError:
            raise ConfigError(f"sweep bounds must be floats and steps an integer, not '{text}'.")
        if self.steps < 0:
            raise ConfigError("sweep steps must be nonnegative.")
        self.quantity = quantity
        self.param = param

    def __str__(self) -> str:
        """Format the specification as it was given."""
        return f'{self.quantity}:{self.param}:{self.lower!r}:{self.upper!r}:{self.steps}'


class RunConfig(StringRepresentation):
    """Configuration of a command-line run, merged from defaults, a configuration file, flags, and the environment.

    Attributes
    ----------
    targets : `list of str`
        Target identifiers. If empty, checks run on their default targets.
    checks : `list of str`
        Check names, or ``['all']``.
    tolerances : `dict`
        Tolerance overrides by check name.
    seed : `int`
        Seed of every sample plan.
    samples : `int or None`
        Number of sample points of every check. By default, each check uses its own default.
    out : `str or None`
        Output path.
    format : `str`
        Either ``'text'`` or ``'json'``.
    sweep : `SweepSpec or None`
        Sweep specification.
    processes : `int`
        Number of workers. Values below ``2`` evaluate serially.
    table : `bool`
        Whether to include per-point artifacts.

    """

    targets: List[str]
    checks: List[str]
    tolerances: Dict[str, float]
    seed: int
    samples: Optional[int]
    out: Optional[str]
    format: str
    sweep: Optional[SweepSpec]
    processes: int
    table: bool

    def __init__(self, values: Mapping[str, Any]) -> None:
        """Validate merged raw values."""
        self.targets = split_targets(values.get('targets'))
        self.checks = split_list(values.get('checks')) or ['all']
        self.tolerances = parse_tolerances(values.get('tol'))
        self.seed = parse_integer('seed', values.get('seed', options.seed))
        samples = values.get('samples')
        self.samples = None if samples in {None, ''} else parse_integer('samples', samples)
        if self.samples is not None and self.samples < 1:
            raise ConfigError("samples must be a positive integer.")
        self.out = values.get('out') or None
        self.format = values.get('format') or 'text'
        if self.format not in {'text', 'json'}:
            raise ConfigError("format must be 'text' or 'json'.")
        sweep = values.get('sweep')
        self.sweep = SweepSpec(sweep) if sweep else None
        self.processes = parse_integer('processes', values.get('processes', 1))
        self.table = parse_boolean(values.get('table', False))

    def __str__(self) -> str:
        """Format the configuration as a table."""
        rows = [[k, json.dumps(v)] for k, v in self.to_dict().items()]
        return format_table(["Key", "Value"], *rows, title="Configuration")

    def to_dict(self) -> dict:
        """Convert the configuration into a dictionary of plain values."""
        return {
            'targets': self.targets,
            'checks': self.checks,
            'tol': self.tolerances,
            'seed': self.seed,
            'samples': self.samples,
            'out': self.out,
            'format': self.format,
            'sweep': None if self.sweep is None else str(self.sweep),
            'processes': self.processes,
            'table': self.table,
        }


def split_list(value: Any) -> List[str]:
    """Split comma-separated values, accepting lists of such values."""
    if value is None:
        return []
    items = [value] if isinstance(value, str) else list(value)
    return [p.strip() for i in items for p in i.split(',') if p.strip()]


def split_targets(value: Any) -> List[str]:
    """Split comma-separated target identifiers, whose parameters are themselves separated by commas, before each
    new kind prefix such as ``cmap:``.
    """
    if value is None:
        return []
    items = [value] if isinstance(value, str) else list(value)
    return [p.strip() for i in items for p in TARGET_SEPARATOR.split(i) if p.strip()]


def parse_tolerances(value: Any) -> Dict[str, float]:
    """Parse comma-separated ``name=value`` tolerance overrides."""
    tolerances: Dict[str, float] = {}
    for item in split_list(value):
        name, separator, number = item.partition('=')
        if not separator:
            raise ConfigError(f"tolerance overrides must have the form name=value, not '{item}'.")
        try:
            tolerances[name.strip()] = float(number)
        except ValueError:
            raise ConfigError(f"tolerance of {name.strip()} must be a float, not '{number}'.")
    return tolerances


def parse_integer(name: str, value: Any) -> int:
    """Parse an integer option."""
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer, not '{value}'.")


def parse_boolean(value: Any) -> bool:
    """Parse a boolean option the way configuration files spell them."""
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in {'1', 'yes', 'true', 'on'}:
        return True
    if text in {'0', 'no', 'false', 'off', ''}:
        return False
    raise ConfigError(f"'{value}' is not a boolean.")


def read_config_file(path: str) -> Dict[str, str]:
    """Read the ``[qkgeo]`` section of an INI configuration file."""
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding='utf-8') as handle:
            parser.read_file(handle)
    except (OSError, configparser.Error) as exception:
        raise ConfigError(f"failed to read configuration file {path}: {exception}")
    if not parser.has_section('qkgeo'):
        raise ConfigError(f"configuration file {path} has no [qkgeo] section.")
    values = dict(parser.items('qkgeo'))
    unknown = sorted(set(values) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"unknown configuration keys {unknown}; valid keys are {list(CONFIG_KEYS)}.")
    return values


def merge_config(args: argparse.Namespace, environ: Mapping[str, str]) -> RunConfig:
    """Merge a configuration file, flags, and the environment, in increasing order of precedence."""
    values: Dict[str, Any] = {}
    if getattr(args, 'config', None):
        values.update(read_config_file(args.config))
    flags = {
        'targets': getattr(args, 'target', None),
        'checks': getattr(args, 'checks', None),
        'tol': getattr(args, 'tol', None),
        'samples': getattr(args, 'samples', None),
        'seed': getattr(args, 'seed', None),
        'out': getattr(args, 'out', None),
        'format': getattr(args, 'format', None),
        'sweep': getattr(args, 'sweep', None),
        'processes': getattr(args, 'processes', None),
        'table': getattr(args, 'table', None),
    }
    values.update({k: v for k, v in flags.items() if v is not None})
    if environ.get(SEED_VARIABLE):
        values['seed'] = environ[SEED_VARIABLE]
    return RunConfig(values)


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with its three subcommands."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help="INI file with a [qkgeo] section of default options.")
    common.add_argument(
        '--target', action='append', help="Target identifier, such as gabc:0,1,1,-1. Repeatable or comma separated."
    )
    common.add_argument('--seed', type=int, help=f"Seed of sample plans (default: {options.seed}).")
    common.add_argument('--out', help="Output path. By default, output goes to standard output.")
    common.add_argument('--processes', type=int, help="Number of worker threads.")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument(
        '--verbose', dest='verbose', action='store_true', default=None, help="Output status updates."
    )
    verbosity.add_argument('--quiet', dest='verbose', action='store_false', help="Suppress status updates.")

    parser = argparse.ArgumentParser(prog='qkgeo', description="Verify identities of quaternionic Kähler metrics.")
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', required=True)

    verify = subparsers.add_parser('verify', parents=[common], help="Run checks on targets.")
    verify.add_argument('--checks', help="Comma-separated check names, or all (default).")
    verify.add_argument('--tol', help="Comma-separated tolerance overrides such as toda=1e-8.")
    verify.add_argument('--samples', type=int, help="Number of sample points of every check.")
    verify.add_argument('--format', choices=['text', 'json'], help="Output format (default: text).")
    verify.add_argument('--table', action='store_true', default=None, help="Include per-point artifacts.")

    sweep = subparsers.add_parser('sweep', parents=[common], help="Compare closed forms with numerical values.")
    sweep.add_argument(
        '--sweep', help=(
            "Sweep specification quantity:param:lo:hi:steps, for example curvnorm:rho:0.5:5:50. The param must be rho: "
            "the swept quantities are constant on hypersurfaces of constant rho, so steps are taken at (rho, 0, 0, 0)."
        )
    )

    subparsers.add_parser('list', help="List registered targets and checks.")
    return parser


@contextlib.contextmanager
def status_output(verbose: Optional[bool]) -> Iterator[None]:
    """Route status updates to standard error, turning them on only when requested."""
    saved = (options.verbose, options.verbose_output)
    options.verbose = bool(verbose)
    options.verbose_output = lambda message: print(message, file=sys.stderr)
    try:
        yield
    finally:
        options.verbose, options.verbose_output = saved


@contextlib.contextmanager
def maybe_parallel(processes: int) -> Iterator[None]:
    """Distribute work among workers if more than one was requested."""
    if processes >= 2:
        with parallel(processes):
            yield
    else:
        yield


def write_output(text: str, path: Optional[str]) -> None:
    """Write text to a path or to standard output."""
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, 'w', encoding='utf-8', newline='') as handle:
        handle.write(text)


def verify_specs(config: RunConfig) -> List[CheckSpec]:
    """Build the specifications of a verification run."""
    if config.targets:
        return build_suite(config.targets, config.checks, config.tolerances, config.samples, config.seed)
    if config.checks == ['all']:
        specs = default_suite(config.seed)
    else:
        specs = [CheckSpec(n, seed=config.seed) for n in resolve_checks(config.checks)]
    resolve_checks(list(config.tolerances))
    return [
        s.replace(tolerance=config.tolerances.get(s.name, s.tolerance), sample_count=config.samples or s.sample_count)
        for s in specs
    ]


def render_reports(config: RunConfig, reports: Sequence[Report]) -> str:
    """Serialize reports in the configured format."""
    records = [r.to_dict() for r in reports]
    if config.format == 'json':
        document = {'version': __version__, 'config': config.to_dict(), 'reports': records}
        return json.dumps(document, indent=2) + '\n'
    sections = [format_reports(records)]
    if config.table:
        sections.extend(format_artifacts(r) for r in records)
    return '\n\n'.join(sections) + '\n'


def summarize_json(text: str) -> str:
    """Summarize a JSON document written by ``qkgeo verify`` the same way the text output summarizes reports."""
    return format_reports(json.loads(text)['reports'])


def cmd_verify(config: RunConfig) -> int:
    """Run checks and report them. Returns ``0`` if every check passed and ``1`` otherwise."""
    with maybe_parallel(config.processes):
        reports = run_suite(verify_specs(config), config.table)
    rendered = render_reports(config, reports)
    if config.out is None:
        sys.stdout.write(rendered)
    else:
        print(format_reports([r.to_dict() for r in reports]))
        write_output(rendered, config.out)
    return 0 if all(r.passed for r in reports) else 1


def sweep_row(model: Model, quantity: str, rho: float) -> Tuple[float, float]:
    """Evaluate the closed form and the numerical value of a quantity on the hypersurface at some radius."""
    point = (rho, 0.0, 0.0, 0.0)
    if not model.chart.contains(point):
        raise NotApplicableError
    if quantity == 'curvnorm':
        return curvature_norm_formula(model.params, rho), curvature_norm(model.g, point)
    if quantity == 'scalar':
        return scalar_curvature_formula(model.params), scalar_curvature(model.g, point)
    distance, _ = singularity_distance(model.params, rho)
    return distance, distance


def cmd_sweep(config: RunConfig) -> int:
    """Write a sweep table. Returns ``1`` if some step was outside of the admissible domain and ``0`` otherwise."""
    if config.sweep is None:
        raise ConfigError("sweep needs a specification quantity:param:lo:hi:steps.")
    if len(config.targets) > 1:
        raise ConfigError("sweep runs on a single target.")
    model = resolve_target(config.targets[0] if config.targets else 'gabc:0,1,1,-1')
    if not model.family:
        raise ConfigError(f"sweeps need an unperturbed family target, not '{model.name}'.")
    sweep = config.sweep
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=SWEEP_HEADER, lineterminator='\n')
    writer.writeheader()
    flagged = 0
    for rho in np.linspace(sweep.lower, sweep.upper, sweep.steps):
        row = {'param': sweep.param, 'value': repr(float(rho)), 'quantity': sweep.quantity}
        try:
            formula, numeric = sweep_row(model, sweep.quantity, float(rho))
        except (Error, ArithmeticError):
            flagged += 1
            row.update({'formula': 'nan', 'numeric': 'nan', 'abs_diff': 'nan'})
        else:
            row.update({'formula': repr(formula), 'numeric': repr(numeric), 'abs_diff': repr(abs(formula - numeric))})
        writer.writerow(row)
    write_output(buffer.getvalue(), config.out)
    return 1 if flagged else 0


def cmd_list() -> int:
    """Print registered targets and checks in a stable order."""
    targets = format_table(["Target", "Description"], *registered_targets(), title="Targets")
    rows = []
    for check in CHECKS.values():
        rows.append([check.name, check.target, format_number(check.tolerance), check.expectation, check.description])
    checks = format_table(["Check", "Default Target", "Tolerance", "Expected", "Description"], *rows, title="Checks")
    print(f"{targets}\n\n{checks}")
    return 0


def main(argv: Optional[Sequence[str]] = None, environ: Optional[Mapping[str, str]] = None) -> int:
    """Parse arguments and run a subcommand. Returns the exit code."""
    args = build_parser().parse_args(argv)
    if args.command == 'list':
        return cmd_list()
    try:
        config = merge_config(args, os.environ if environ is None else environ)
        with status_output(args.verbose):
            if args.command == 'verify':
                return cmd_verify(config)
            return cmd_sweep(config)
    except (
            ConfigError, RegistryError, InapplicableCheckError, CasePreconditionError, MultipleErrors, ValueError,
            OSError) as error:
        print(f"[error] {error}", file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
