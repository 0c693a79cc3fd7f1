import shutil
import tempfile
from contextlib import nullcontext as does_not_raise
from pathlib import Path
from typing import Any, ContextManager, Dict, Iterator, Optional, Tuple
from unittest.mock import Mock, patch

from pydantic.error_wrappers import ValidationError
from pytest import MonkeyPatch, fixture, mark, raises

from fuselab import config, defaults


@fixture(scope="function")
def empty_dir() -> Iterator[Path]:
    directory = tempfile.mkdtemp()
    yield Path(directory)
    shutil.rmtree(directory)


@fixture(scope="function")
def empty_toml_files_in_dir(empty_dir: Path) -> Iterator[Path]:
    for i in range(5):
        tempfile.NamedTemporaryFile(suffix=".toml", dir=empty_dir, delete=False)
    yield empty_dir


@fixture(scope="function")
def empty_toml_file() -> Iterator[Path]:
    _, toml_file = tempfile.mkstemp(suffix=".toml")
    yield Path(toml_file)
    Path(toml_file).unlink()


@fixture(scope="function")
def no_configuration_files(empty_dir: Path) -> Iterator[None]:
    with patch("fuselab.defaults.SETTINGS_LOCATION", empty_dir / "missing.toml"):
        with patch("fuselab.defaults.SETTINGS_OVERRIDE_LOCATION", empty_dir / "missing.d"):
            yield


@patch("toml.load", return_value={})
def test_read_toml_configuration_settings(
    toml_load_mock: Mock,
    empty_toml_file: Path,
    empty_toml_files_in_dir: Path,
) -> None:
    with patch("fuselab.defaults.SETTINGS_LOCATION", empty_toml_file):
        config.read_toml_configuration_settings(Mock())
        toml_load_mock.assert_called_with([empty_toml_file])
        with patch("fuselab.defaults.SETTINGS_OVERRIDE_LOCATION", empty_toml_files_in_dir):
            config.read_toml_configuration_settings(Mock())
            toml_load_mock.assert_called_with([empty_toml_file] + sorted(empty_toml_files_in_dir.glob("*.toml")))


@patch("toml.load")
def test_read_toml_configuration_settings_without_files(toml_load_mock: Mock, no_configuration_files: None) -> None:
    assert config.read_toml_configuration_settings(Mock()) == {}
    toml_load_mock.assert_not_called()


def test_settings_from_toml_files(empty_dir: Path, monkeypatch: MonkeyPatch) -> None:
    monkeypatch.delenv("FUSELAB_SEED", raising=False)
    monkeypatch.delenv("FUSELAB_WORKERS", raising=False)
    main = empty_dir / "config.toml"
    main.write_text("seed = 3\nworkers = 2\n")
    override_dir = empty_dir / "fuselab.d"
    override_dir.mkdir()
    (override_dir / "10-workers.toml").write_text("workers = 8\n")
    with patch("fuselab.defaults.SETTINGS_LOCATION", main):
        with patch("fuselab.defaults.SETTINGS_OVERRIDE_LOCATION", override_dir):
            settings = config.Settings()
            assert (settings.seed, settings.workers, settings.block_size) == (3, 8, defaults.DEFAULT_BLOCK_SIZE)
            # keyword arguments take precedence over files
            assert config.Settings(workers=4).workers == 4


def test_settings_from_environment(no_configuration_files: None, monkeypatch: MonkeyPatch) -> None:
    monkeypatch.setenv("FUSELAB_SEED", "42")
    monkeypatch.setenv("FUSELAB_BLOCK_SIZE", "128")
    settings = config.Settings()
    assert settings.seed == 42
    assert settings.block_size == 128
    assert settings.workers == defaults.DEFAULT_WORKERS


@mark.parametrize(
    "settings_data, expectation",
    [
        ({}, does_not_raise()),
        ({"seed": 2**64 - 1, "workers": 16, "block_size": 1}, does_not_raise()),
        ({"seed": -1}, raises(ValidationError)),
        ({"seed": 2**64}, raises(ValidationError)),
        ({"workers": 0}, raises(ValidationError)),
        ({"block_size": 0}, raises(ValidationError)),
    ],
)
def test_settings_validation(
    settings_data: Dict[str, Any],
    expectation: ContextManager[str],
    no_configuration_files: None,
    monkeypatch: MonkeyPatch,
) -> None:
    for name in ("FUSELAB_SEED", "FUSELAB_WORKERS", "FUSELAB_BLOCK_SIZE"):
        monkeypatch.delenv(name, raising=False)
    with expectation:
        config.Settings(**settings_data)


@mark.parametrize(
    "seed, candidates, result",
    [
        (None, (), defaults.DEFAULT_SEED),
        (5, (), 5),
        (5, (None, None), 5),
        (5, (None, 7), 7),
        (5, (1, 7), 1),
        (None, (0, 7), 0),
    ],
)
def test_resolve_seed(
    seed: Optional[int], candidates: Tuple[Optional[int], ...], result: int, no_configuration_files: None
) -> None:
    assert config.Settings(seed=seed).resolve_seed(*candidates) == result
