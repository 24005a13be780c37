import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError

from spectral_green.cli.commands import cmd_figure, cmd_poles, cmd_sweep, cmd_verify
from spectral_green.cli.presets import FIGURE_IDS
from spectral_green.cli.verify import SUITES
from spectral_green.custom_logging import logger
from spectral_green.models.exceptions.known_exceptions import (
    InvalidGridException,
    InvalidRunConfigException,
    SizeGuardException,
    SpectralGreenException,
    UnsupportedRepresentationException,
    VerificationFailedException,
)
from spectral_green.models.run_config import GridSpec, RunConfig, load_model_params, parse_overrides

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# values may start with "-" (grids below zero)
GRID_OPTIONS = ('--zeta-span', '--grid')


def _int_list(text: str) -> List[int]:
    values = []
    for item in text.split(','):
        number = float(item)
        if not number.is_integer() or number < 1:
            raise argparse.ArgumentTypeError(f"'{item}' is not a positive integer")
        values.append(int(number))
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='spectral_green',
        description='Spectral Green functions of driven Lindblad systems',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s sweep --model fig1a.json --method analytic --zeta-span -3e6:3e6:601
  %(prog)s poles --model fig1a.json --method pencil
  %(prog)s figure --id 1c --n 1e3,1e4,1e5
  %(prog)s verify --suite green --n 2
        """
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    sweep = subparsers.add_parser('sweep', help='Observables over a detuning grid')
    sweep.add_argument('--model', type=Path, required=True, help='Model parameter JSON')
    sweep.add_argument('--method', default='analytic', help='analytic, reduced or full (default: analytic)')
    sweep.add_argument('--zeta-span', help='Detuning grid min:max:count in rad/s (default: the model zeta)')

    poles = subparsers.add_parser('poles', help='Poles of the driven Green function')
    poles.add_argument('--model', type=Path, required=True, help='Model parameter JSON')
    poles.add_argument('--method', default='analytic', help='analytic or pencil (default: analytic)')

    figure = subparsers.add_parser('figure', help='Data of one figure panel')
    figure.add_argument('--id', dest='figure_id', required=True, choices=FIGURE_IDS)
    figure.add_argument('--model', type=Path, help='Override the preset parameters')
    figure.add_argument('--grid', help='Override the preset grid, min:max:count[:log]')
    figure.add_argument('--n', type=_int_list, help='Comma-separated N values (panel 1c)')

    verify = subparsers.add_parser('verify', help='Run the oracle-gated verification suites')
    verify.add_argument('--suite', default='all', choices=SUITES)
    verify.add_argument('--n', type=_int_list, help='Passive spin count')
    verify.add_argument('--tolerance', action='append', default=[], metavar='NAME=VALUE',
                        help='Override a verification tolerance, repeatable')

    for sub in (sweep, poles, figure, verify):
        sub.add_argument('--output', '-o', type=Path, help='Output file (default: stdout)')
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    """Validated RunConfig from parsed arguments"""
    params = load_model_params(args.model) if getattr(args, 'model', None) else None
    span = getattr(args, 'zeta_span', None) or getattr(args, 'grid', None)
    try:
        return RunConfig(
            command=args.command,
            params=params,
            method=getattr(args, 'method', None),
            grid=GridSpec.parse(span) if span else None,
            figure_id=getattr(args, 'figure_id', None),
            n_values=getattr(args, 'n', None) or [],
            suite=getattr(args, 'suite', None),
            output=args.output,
            tolerances=parse_overrides(getattr(args, 'tolerance', [])),
        )
    except ValidationError as e:
        raise InvalidRunConfigException("Invalid run configuration", original_exception=e)


def run(config: RunConfig) -> int:
    if config.command == 'verify':
        failed = [report for report in cmd_verify(config) if not report.passed]
        if failed:
            raise VerificationFailedException(
                '; '.join(f"{report.suite}: {', '.join(report.failures)}" for report in failed))
        return EXIT_OK
    commands = {'sweep': cmd_sweep, 'poles': cmd_poles, 'figure': cmd_figure}
    commands[config.command](config)
    return EXIT_OK


def join_grid_values(argv: Sequence[str]) -> List[str]:
    """`--zeta-span -3e6:3e6:601` → `--zeta-span=-3e6:3e6:601`, so a leading minus is not read as a flag"""
    joined: List[str] = []
    items = iter(argv)
    for item in items:
        if item in GRID_OPTIONS:
            value = next(items, None)
            joined.append(item if value is None else f"{item}={value}")
        else:
            joined.append(item)
    return joined


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(join_grid_values(sys.argv[1:] if argv is None else argv))
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    try:
        return run(build_config(args))
    except (InvalidRunConfigException, InvalidGridException, SizeGuardException,
            UnsupportedRepresentationException) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, json.JSONDecodeError) as e:
        print(f"Error: invalid configuration: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SpectralGreenException as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except KeyboardInterrupt:
        print("\nOperation cancelled by user", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
