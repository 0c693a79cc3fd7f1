import argparse
import os
from pathlib import Path

from fuselab import defaults


class ArgParseFactory:
    """A factory class to create different types of argparse.ArgumentParser instances

    Attributes
    ----------
    parser: argparse.ArgumentParser
        The instance's ArgumentParser instance, which is created with a default verbose argument

    """

    def __init__(self, description: str = "default") -> None:
        self.parser = argparse.ArgumentParser(description=description, exit_on_error=False)
        self.parser.add_argument(
            "-v",
            "--verbose",
            action="store_true",
            help="verbose output",
        )

    @classmethod
    def fuselab(self) -> argparse.ArgumentParser:
        """A class method to create an ArgumentParser for the fuselab script

        Returns
        -------
        argparse.ArgumentParser
            An ArgumentParser instance specific for the fuselab script
        """

        instance = self(description="Design one-bit sensor networks and simulate the detection performance of fusion.")
        instance.parser.add_argument(
            "subcommand",
            choices=[subcommand.value for subcommand in defaults.Subcommand],
            help="the action to run",
        )
        instance.parser.add_argument(
            "-c",
            "--config",
            type=self.string_to_file_path,
            required=True,
            help="the JSON experiment configuration to read",
        )
        instance.parser.add_argument(
            "-o",
            "--out",
            type=self.string_to_writable_dir_path,
            default=Path("."),
            help="the directory into which to write the output files (defaults to current directory)",
        )
        instance.parser.add_argument(
            "--seed",
            type=self.string_to_seed,
            default=None,
            help="an unsigned 64-bit seed replacing the one of the configuration",
        )
        instance.parser.add_argument(
            "--trials",
            type=self.string_to_positive_int,
            default=None,
            help="a number of Monte Carlo trials replacing the one of the configuration",
        )
        instance.parser.add_argument(
            "--workers",
            type=self.string_to_positive_int,
            default=None,
            help="the number of worker threads",
        )
        instance.parser.add_argument(
            "--pe",
            type=float,
            action="append",
            default=None,
            help="a bit error probability to trace (may be given several times)",
        )
        instance.parser.add_argument(
            "--trace",
            action="store_true",
            help="also write the threshold objective traces when designing",
        )

        return instance.parser

    @classmethod
    def string_to_seed(self, input_: str) -> int:
        """Convert an input string into an unsigned 64-bit seed

        Raises
        ------
        argparse.ArgumentTypeError:
            If input_ is not an integer in [0, 2^64)
        """

        try:
            seed = int(input_)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: '{input_}'")
        if not 0 <= seed < 2**64:
            raise argparse.ArgumentTypeError(f"the seed '{input_}' is not an unsigned 64-bit integer")
        return seed

    @classmethod
    def string_to_positive_int(self, input_: str) -> int:
        """Convert an input string into an integer greater than zero

        Raises
        ------
        argparse.ArgumentTypeError:
            If input_ is not an integer greater than zero
        """

        try:
            value = int(input_)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: '{input_}'")
        if value < 1:
            raise argparse.ArgumentTypeError(f"the value '{input_}' is not greater than zero")
        return value

    @classmethod
    def string_to_file_path(self, input_: str) -> Path:
        """Convert an input string into a Path to a file

        Parameters
        ----------
        input_: str
            A string that is used to create a Path

        Raises
        ------
        argparse.ArgumentTypeError:
            If a Path created from input_ does not exist or is not a file

        Returns
        -------
        Path
            A Path instance created from input_
        """

        path = Path(input_)
        if not path.exists():
            raise argparse.ArgumentTypeError(f"the file '{input_}' does not exist")
        if not path.is_file():
            raise argparse.ArgumentTypeError(f"not a file: {input_}")
        return path

    @classmethod
    def string_to_writable_dir_path(self, input_: str) -> Path:
        """Convert an input string into a Path to a writable directory

        Parameters
        ----------
        input_: str
            A string that is used to create a Path

        Raises
        ------
        argparse.ArgumentTypeError:
            If a Path created from input_ does not exist, is not a directory or is not writable

        Returns
        -------
        Path
            A Path instance created from input_
        """

        path = Path(input_)
        if not path.exists():
            raise argparse.ArgumentTypeError(f"the directory '{input_}' does not exist")
        if not path.is_dir():
            raise argparse.ArgumentTypeError(f"not a directory: {input_}")
        if not os.access(path, os.W_OK):
            raise argparse.ArgumentTypeError(f"the directory '{input_}' is not writable")
        return path
