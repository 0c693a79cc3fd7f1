import asyncio
import logging
from argparse import ArgumentError
from sys import exit
from typing import List, Optional

from pydantic.error_wrappers import ValidationError

from fuselab import argparse, config, defaults, errors, models, operations

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def run(invocation: models.CliInvocation, settings: Optional[config.Settings] = None) -> defaults.ExitCode:
    """Run the operation of an invocation and map its outcome to an exit code

    Parameters
    ----------
    invocation: models.CliInvocation
        The resolved invocation
    settings: Optional[config.Settings]
        The ambient settings (read from the configuration files and the environment if not provided)

    Returns
    -------
    defaults.ExitCode
        defaults.ExitCode.SUCCESS, defaults.ExitCode.CONFIG_ERROR for unreadable or invalid configurations and
        defaults.ExitCode.NUMERICAL_ERROR for numerical failures and failed checks
    """

    try:
        settings = settings or config.Settings()
        return asyncio.run(operations.OPERATIONS[invocation.subcommand](invocation, settings))
    except (errors.FuselabFileError, errors.FuselabValidationError, ValidationError) as e:
        print(e)
        return defaults.ExitCode.CONFIG_ERROR
    except (errors.FuselabDomainError, errors.FuselabNumericalError) as e:
        print(e)
        return defaults.ExitCode.NUMERICAL_ERROR


def fuselab(argv: Optional[List[str]] = None) -> None:
    """The entry point for the fuselab script

    The arguments are parsed into a models.CliInvocation, which is handed to run(). An unknown subcommand prints the
    usage text and exits with defaults.ExitCode.USAGE.

    Parameters
    ----------
    argv: Optional[List[str]]
        The arguments to parse (defaults to sys.argv)
    """

    parser = argparse.ArgParseFactory.fuselab()
    try:
        args = parser.parse_args(argv)
    except ArgumentError as e:
        print(e)
        if e.argument_name == "subcommand":
            parser.print_usage()
            exit(defaults.ExitCode.USAGE)
        exit(defaults.ExitCode.CONFIG_ERROR)

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format=LOG_FORMAT)
    try:
        invocation = models.CliInvocation(
            subcommand=defaults.Subcommand(args.subcommand),
            config_path=args.config,
            output_dir=args.out,
            seed_override=args.seed,
            trials_override=args.trials,
            workers=args.workers,
            pe_values=args.pe,
            trace=args.trace,
        )
    except ValidationError as e:
        print(e)
        exit(defaults.ExitCode.CONFIG_ERROR)

    exit(run(invocation))
