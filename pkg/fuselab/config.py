from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import toml
from pydantic import BaseSettings, validator
from pydantic.env_settings import SettingsSourceCallable

from fuselab import defaults


def read_toml_configuration_settings(settings: BaseSettings) -> Dict[str, Any]:
    """Read the configuration file(s)

    The main configuration file is read first, the files of the override directory follow in sorted order.

    Parameters
    ----------
    settings: BaseSettings
        A BaseSettings instance

    Returns
    -------
    Dict[str, Any]
        A dict containing the data from the read out configuration file(s)
    """

    output_dict: Dict[str, Any] = {}
    config_files: List[Path] = []
    if defaults.SETTINGS_LOCATION.exists():
        config_files += [defaults.SETTINGS_LOCATION]
    if defaults.SETTINGS_OVERRIDE_LOCATION.exists():
        config_files += sorted(defaults.SETTINGS_OVERRIDE_LOCATION.glob("*.toml"))

    if config_files:
        output_dict = toml.load(config_files)  # type: ignore
    return output_dict


class Settings(BaseSettings):
    """The ambient settings of fuselab

    Values are taken from keyword arguments, then from the TOML configuration file(s), then from environment variables
    prefixed with defaults.ENV_PREFIX (e.g. FUSELAB_SEED).

    Attributes
    ----------
    seed: Optional[int]
        The seed used when neither the command line nor the experiment provides one
    workers: int
        The number of worker threads of the Monte Carlo harness (defaults to defaults.DEFAULT_WORKERS)
    block_size: int
        The number of trials per random stream (defaults to defaults.DEFAULT_BLOCK_SIZE)
    """

    seed: Optional[int]
    workers: int = defaults.DEFAULT_WORKERS
    block_size: int = defaults.DEFAULT_BLOCK_SIZE

    class Config:
        env_prefix = defaults.ENV_PREFIX
        env_file_encoding = "utf-8"

        @classmethod
        def customise_sources(
            cls,
            init_settings: SettingsSourceCallable,
            env_settings: SettingsSourceCallable,
            file_secret_settings: SettingsSourceCallable,
        ) -> Tuple[SettingsSourceCallable, ...]:
            return (
                init_settings,
                read_toml_configuration_settings,
                env_settings,
                file_secret_settings,
            )

    @validator("seed")
    def seed_is_u64(cls, seed: Optional[int]) -> Optional[int]:
        if seed is not None and not 0 <= seed < 2**64:
            raise ValueError(f"The seed must be an unsigned 64-bit integer, but '{seed}' was provided.")

        return seed

    @validator("workers", "block_size")
    def greater_zero(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"The value must be at least 1, but '{value}' was provided.")

        return value

    def resolve_seed(self, *candidates: Optional[int]) -> int:
        """Return the first seed that is set, falling back to this instance's seed and finally defaults.DEFAULT_SEED

        Parameters
        ----------
        candidates: Optional[int]
            Seeds in order of precedence

        Returns
        -------
        int
            The seed to use
        """

        for candidate in (*candidates, self.seed):
            if candidate is not None:
                return candidate
        return defaults.DEFAULT_SEED
