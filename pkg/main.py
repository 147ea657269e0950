"""Main entry point for the lens-space verification suite."""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from src.cli.commands import COMMANDS
from src.cli.report import EXIT_USAGE
from src.cli.run_config import RunConfig
from src.config.loader import ConfigLoader
from src.errors import UsageError
from src.logging.setup import setup_logging

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per pipeline."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-k', type=int, help='weight k (coprime to l)')
    common.add_argument('-l', type=int, help='weight l')
    common.add_argument('-d', type=int, help='lens level d >= 1')
    common.add_argument('--q', type=float, help='deformation parameter in (0, 1)')
    common.add_argument('--dim', type=int, help='truncation dimension N >= 32')
    common.add_argument('--seed', type=int, help='seed for random word suites')
    common.add_argument('--format', choices=['text', 'json'], help='report format')
    common.add_argument('--out', help='write the report to this file instead of stdout')
    common.add_argument('--closed-form', action='store_true',
                        help='kgroups: use the closed-form pairing matrix')
    common.add_argument('--config', default='config.yaml', help='YAML configuration file')
    common.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
                        help='override logging.level')

    parser = argparse.ArgumentParser(
        prog='qnc-lens',
        description='Symbolic and certified-numeric checks for quantum weighted lens spaces')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, command in COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=command.__doc__.splitlines()[0])
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    args = build_parser().parse_args(argv)

    try:
        config = ConfigLoader(args.config).load()
    except ValueError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE

    setup_logging(config, args.log_level)

    try:
        run = RunConfig.from_sources(config, vars(args))
    except UsageError as e:
        logger.error(str(e))
        print(f"Usage error: {e}", file=sys.stderr)
        return EXIT_USAGE

    logger.info(f"Running {args.command} for (k, l, d) = ({run.k}, {run.l}, {run.d}), q={run.q}, N={run.N}")
    report = COMMANDS[args.command](run)
    output = report.render(run.format)

    if run.out:
        Path(run.out).parent.mkdir(parents=True, exist_ok=True)
        with open(run.out, 'w', encoding='utf-8', newline='\n') as f:
            f.write(output)
        logger.info(f"Report written to {run.out}")
    else:
        sys.stdout.write(output)

    logger.info(f"{args.command} finished with exit code {report.exit_code}")
    return report.exit_code


if __name__ == '__main__':
    sys.exit(main())
