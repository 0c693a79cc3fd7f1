from pathlib import Path
from typing import Any, Dict

import aiofiles
import orjson
from pydantic.error_wrappers import ValidationError

from fuselab import errors, models

JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY


async def read_experiment_config(path: Path) -> models.ExperimentConfig:
    """Read a JSON file that describes an experiment and return it as models.ExperimentConfig

    Parameters
    ----------
    path: Path
        A Path to a JSON file

    Raises
    ------
    errors.FuselabFileNotFoundError
        If the file does not exist
    errors.FuselabFileError
        If the file can not be read or decoded
    errors.FuselabValidationError
        If the JSON file can not be validated using models.ExperimentConfig

    Returns
    -------
    models.ExperimentConfig
        A pydantic model representing the experiment
    """

    try:
        async with aiofiles.open(path, "rb") as input_file:
            data = await input_file.read()
    except FileNotFoundError as e:
        raise errors.FuselabFileNotFoundError(f"The JSON file '{path}' does not exist!\n{e}")
    except OSError as e:
        raise errors.FuselabFileError(f"The JSON file '{path}' could not be read!\n{e}")

    try:
        content = orjson.loads(data)
    except orjson.JSONDecodeError as e:
        raise errors.FuselabFileError(f"The JSON file '{path}' could not be decoded!\n{e}")
    if not isinstance(content, dict):
        raise errors.FuselabValidationError(f"The JSON file '{path}' does not contain an object!")

    try:
        return models.ExperimentConfig(**content)
    except ValidationError as e:
        raise errors.FuselabValidationError(f"The JSON file '{path}' could not be validated!\n{e}")


async def write_json_file(path: Path, data: Dict[str, Any]) -> None:
    """Write data to a JSON file with sorted keys and an indentation of two

    Parameters
    ----------
    path: Path
        The file to write to
    data: Dict[str, Any]
        The data to serialize (Path instances are written as strings)

    Raises
    ------
    errors.FuselabFileError
        If the file can not be written
    """

    try:
        async with aiofiles.open(path, "wb") as output_file:
            await output_file.write(orjson.dumps(data, default=str, option=JSON_OPTIONS))
    except OSError as e:
        raise errors.FuselabFileError(f"The JSON file '{path}' could not be written!\n{e}")


async def write_text_file(path: Path, content: str) -> None:
    """Write a string to a file

    Raises
    ------
    errors.FuselabFileError
        If the file can not be written
    """

    try:
        async with aiofiles.open(path, "w") as output_file:
            await output_file.write(content)
    except OSError as e:
        raise errors.FuselabFileError(f"The file '{path}' could not be written!\n{e}")
