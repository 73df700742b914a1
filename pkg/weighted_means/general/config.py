from functools import lru_cache
from pathlib import Path
from typing import Callable, Optional, Union

from configobj import ConfigObj

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent / "defaults.conf"


def get_config_obj(config_path):
    config_path = str(config_path)
    config_obj = ConfigObj(
        config_path,
        encoding="UTF8",
        indent_type="    ",
        file_error=True,
    )
    return config_obj


def load_config(
    override_path: Optional[Union[str, Path]] = None,
) -> ConfigObj:
    """
    Read the packaged defaults, optionally merged with a user config file.

    Parameters
    ----------
    override_path : str or pathlib.Path, optional
        INI file with any subset of the sections in ``defaults.conf``.
        Values in this file replace the packaged ones.

    Returns
    -------
    configobj.ConfigObj
        Merged configuration. Values are strings, as read from disk.
    """
    config = get_config_obj(DEFAULT_CONFIG_PATH)
    if override_path is not None:
        config.merge(get_config_obj(override_path))
    return config


@lru_cache(maxsize=1)
def _packaged_config() -> ConfigObj:
    return load_config()


def packaged_default(section: str, key: str, cast: Callable = float):
    """A single value from the packaged ``defaults.conf``, cast."""
    return cast(_packaged_config()[section][key])
