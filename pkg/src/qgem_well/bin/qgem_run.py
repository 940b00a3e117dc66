# Standard Library
import logging
import sys
from argparse import ArgumentParser, Namespace

# First Party
from qgem_well.cli.commands import run
from qgem_well.cli.configuration import QGEM_DEBUG_MODE, QGEM_ENV_VARS, QGEM_LOG_FILE, load_config
from qgem_well.common import initialise_logs
from qgem_well.constants import EXIT_CONFIG_ERROR
from qgem_well.helpers.environment_wrapper import validate_environment
from qgem_well.helpers.exception_handler import exit_code_for
from qgem_well.schema.sub_command import SubCommand

logger = logging.getLogger(__name__)


def create_cli_argparser() -> ArgumentParser:
    parser: ArgumentParser = ArgumentParser(
        prog="qgem",
        description="Gravitationally induced entanglement of two particles in adjacent square wells",
    )
    parser.add_argument(
        "subcommand",
        type=str,
        nargs="?",
        choices=[subcommand.value for subcommand in SubCommand],
        help="What to compute; may be omitted when --config points at a result file that records it",
    )
    parser.add_argument("--config", type=str, default=None, help="TOML config file or a previously written result CSV")
    parser.add_argument("--out", type=str, default=None, help="Output directory for result CSV files")
    parser.add_argument("--cache", type=str, default=None, help="J table cache directory")
    parser.add_argument("--workers", type=int, default=None, help="Worker threads for tables and sweeps")
    parser.add_argument(
        "--paper-scale",
        action="store_true",
        default=False,
        help="nmax=100, 1000 spectrum levels and the 20..100 convergence ladder",
    )
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="Override one configuration value, may be repeated",
    )
    return parser


def validate_cli_arguments(args: Namespace):
    valid_arguments = True
    if args.workers is not None and args.workers < 1:
        logger.error("--workers must be at least 1")
        valid_arguments = False
    if not args.subcommand and not args.config:
        logger.error("A subcommand is required unless --config names a result file that records one")
        valid_arguments = False
    if not valid_arguments:
        return False
    return args


def main(argv: list[str] | None = None):
    """
        Console entry point: parse arguments, resolve the configuration and run one subcommand.
        Exits with 0 on success, 1 on configuration errors and 2 on numeric failures.
    """
    env_variables = validate_environment(QGEM_ENV_VARS)
    debug = env_variables[QGEM_DEBUG_MODE].lower() in ["1", "true"]
    initialise_logs(env_variables[QGEM_LOG_FILE], debug=debug)

    parser: ArgumentParser = create_cli_argparser()
    args = validate_cli_arguments(parser.parse_args(argv))
    if not args:
        logger.error("CLI arguments validation failed")
        sys.exit(EXIT_CONFIG_ERROR)

    flags = {
        "output.out_dir": args.out,
        "output.cache_dir": args.cache,
        "output.workers": args.workers,
        "output.paper_scale": True if args.paper_scale else None,
    }
    try:
        config, recorded = load_config(args.config, args.overrides, flags)
    except Exception as error:
        sys.exit(exit_code_for(error))

    subcommand = SubCommand(args.subcommand) if args.subcommand else recorded
    if subcommand is None:
        logger.error(f"{args.config} does not record a subcommand, name one on the command line")
        sys.exit(EXIT_CONFIG_ERROR)
    sys.exit(run(subcommand, config))
