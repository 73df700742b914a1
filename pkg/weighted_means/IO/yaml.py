"""
YAML reading and writing for domain spec files. JSON is a subset of YAML,
so spec files written as JSON go through the same loader.
"""

from pathlib import Path
from typing import Any, Dict, Union

import yaml

PathLike = Union[str, Path]


def open_yaml(path: PathLike) -> Any:
    """Parse a whole YAML or JSON document."""
    with open(path) as stream:
        return yaml.load(stream, Loader=yaml.FullLoader)


def read_yaml_section(path: PathLike, section: str) -> Any:
    """
    One top-level entry of a mapping document, e.g. the ``domain`` key of
    a run file that also holds notes.

    Raises
    ------
    KeyError
        If the document is not a mapping or has no such key.
    """
    contents = open_yaml(path)
    if not isinstance(contents, dict) or section not in contents:
        raise KeyError(f"No section {section!r} in {path}")
    return contents[section]


def save_yaml(contents: Dict[str, Any], path: PathLike):
    """Write a mapping in block style with sorted keys."""
    with open(path, "w") as stream:
        yaml.dump(contents, stream, default_flow_style=False, sort_keys=True)
