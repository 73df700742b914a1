"""
Report output: one JSON object per line, or CSV for tabular results.

Floats are written with the shortest representation that reads back as
the same double (``repr``), never fewer digits than needed: this is
lossless like a fixed 17 significant digits, without the trailing noise
(0.1 stays "0.1"). Keys are sorted so that identical runs give
byte-identical output.
"""

import json
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, TextIO, Union

import numpy as np
import pandas as pd


def _to_builtin(value: Any) -> Any:
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (tuple, set)):
        return list(value)
    raise TypeError(f"Cannot write {type(value).__name__} to a report")


def report_to_json(report: Dict[str, Any]) -> str:
    """Serialise one report as a single line of JSON."""
    return json.dumps(report, sort_keys=True, default=_to_builtin)


def write_json_lines(
    reports: Iterable[Dict[str, Any]],
    output: Optional[Union[str, Path, TextIO]] = None,
):
    """
    Write reports as JSON lines.

    Parameters
    ----------
    reports : iterable of dict
        Reports, e.g. from ``IdentityReport.to_dict``.
    output : str, pathlib.Path or file-like, optional
        Destination; stdout if None. Paths are overwritten.
    """
    if output is None:
        output = sys.stdout
    if isinstance(output, (str, Path)):
        with open(output, "w") as stream:
            write_json_lines(reports, stream)
        return
    for report in reports:
        output.write(report_to_json(report) + "\n")


def write_table(
    table: pd.DataFrame,
    output: Optional[Union[str, Path, TextIO]] = None,
    provenance: Optional[Dict[str, Any]] = None,
):
    """
    Write a result table (identity suite, sweep, decomposition) as CSV.

    Parameters
    ----------
    table : pd.DataFrame
        The table.
    output : str, pathlib.Path or file-like, optional
        Destination; stdout if None.
    provenance : dict, optional
        Written as a leading "# provenance: {...}" comment line, so that
        ``pd.read_csv(path, comment="#")`` reads the table back.
    """
    if output is None:
        output = sys.stdout
    if isinstance(output, (str, Path)):
        with open(output, "w", newline="") as stream:
            write_table(table, stream, provenance)
        return
    if provenance is not None:
        output.write(f"# provenance: {report_to_json(provenance)}\n")
    table.to_csv(output, index=False)
