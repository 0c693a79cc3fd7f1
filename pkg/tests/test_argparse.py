import argparse
from pathlib import Path

import py
from mock import Mock, patch
from pytest import mark, raises

from fuselab import argparse as fuselab_argparse
from fuselab import defaults


def test_argparsefactory__init__() -> None:
    assert isinstance(fuselab_argparse.ArgParseFactory().parser, argparse.ArgumentParser)


def test_argparsefactory__fuselab() -> None:
    assert isinstance(fuselab_argparse.ArgParseFactory.fuselab(), argparse.ArgumentParser)


def test_argparsefactory__fuselab_parse(tmpdir: py.path.local) -> None:
    config_path = Path(tmpdir) / "experiment.json"
    config_path.write_text("{}")
    args = fuselab_argparse.ArgParseFactory.fuselab().parse_args(
        [
            "pdk",
            "-c",
            str(config_path),
            "-o",
            str(tmpdir),
            "--seed",
            "18446744073709551615",
            "--trials",
            "100",
            "--workers",
            "2",
            "--pe",
            "0.1",
            "--pe",
            "0.2",
            "-v",
        ]
    )
    assert args.subcommand == defaults.Subcommand.PDK.value
    assert args.config == config_path
    assert args.out == Path(tmpdir)
    assert args.seed == 2**64 - 1
    assert (args.trials, args.workers) == (100, 2)
    assert args.pe == [0.1, 0.2]
    assert args.verbose
    assert not args.trace


def test_argparsefactory__fuselab_defaults(tmpdir: py.path.local) -> None:
    config_path = Path(tmpdir) / "experiment.json"
    config_path.write_text("{}")
    args = fuselab_argparse.ArgParseFactory.fuselab().parse_args(["design", "--config", str(config_path), "--trace"])
    assert args.out == Path(".")
    assert (args.seed, args.trials, args.workers, args.pe) == (None, None, None, None)
    assert args.trace


@mark.parametrize(
    "argv, argument_name",
    [
        (["simulate", "-c", "foo"], "subcommand"),
        (["roc", "-c", "/nonexistent/experiment.json"], "-c/--config"),
    ],
)
def test_argparsefactory__fuselab_argument_errors(argv: list, argument_name: str) -> None:
    with raises(argparse.ArgumentError) as e:
        fuselab_argparse.ArgParseFactory.fuselab().parse_args(argv)
    assert e.value.argument_name == argument_name


@mark.parametrize(
    "input_, result",
    [
        ("0", 0),
        ("42", 42),
        (str(2**64 - 1), 2**64 - 1),
        ("-1", None),
        (str(2**64), None),
        ("foo", None),
        ("1.5", None),
    ],
)
def test_argparsefactory_string_to_seed(input_: str, result: int) -> None:
    if result is None:
        with raises(argparse.ArgumentTypeError):
            fuselab_argparse.ArgParseFactory.string_to_seed(input_)
    else:
        assert fuselab_argparse.ArgParseFactory.string_to_seed(input_) == result


@mark.parametrize(
    "input_, result",
    [
        ("1", 1),
        ("10000", 10000),
        ("0", None),
        ("-3", None),
        ("many", None),
    ],
)
def test_argparsefactory_string_to_positive_int(input_: str, result: int) -> None:
    if result is None:
        with raises(argparse.ArgumentTypeError):
            fuselab_argparse.ArgParseFactory.string_to_positive_int(input_)
    else:
        assert fuselab_argparse.ArgParseFactory.string_to_positive_int(input_) == result


@patch(
    "fuselab.argparse.Path",
    Mock(return_value=Mock(exists=Mock(side_effect=[False, True, True]), is_file=Mock(side_effect=[False, True]))),
)
def test_argparsefactory_string_to_file_path() -> None:
    with raises(argparse.ArgumentTypeError):
        fuselab_argparse.ArgParseFactory.string_to_file_path("foo")
    with raises(argparse.ArgumentTypeError):
        fuselab_argparse.ArgParseFactory.string_to_file_path("foo")
    assert fuselab_argparse.ArgParseFactory.string_to_file_path("foo")


@patch("os.access", Mock(side_effect=[False, True]))
@patch(
    "fuselab.argparse.Path",
    Mock(
        return_value=Mock(
            exists=Mock(side_effect=[False, True, True, True]),
            is_dir=Mock(side_effect=[False, True, True]),
        )
    ),
)
def test_argparsefactory_string_to_writable_dir_path() -> None:
    with raises(argparse.ArgumentTypeError):
        fuselab_argparse.ArgParseFactory.string_to_writable_dir_path("foo")
    with raises(argparse.ArgumentTypeError):
        fuselab_argparse.ArgParseFactory.string_to_writable_dir_path("foo")
    with raises(argparse.ArgumentTypeError):
        fuselab_argparse.ArgParseFactory.string_to_writable_dir_path("foo")
    assert fuselab_argparse.ArgParseFactory.string_to_writable_dir_path("foo")
