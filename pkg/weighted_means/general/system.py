import logging
import os
import platform
from pathlib import Path
from typing import Optional, Union

import psutil
from slurmio import slurmio

from weighted_means.general.exceptions import CommandLineInputError

# On Windows, max_workers must be less than or equal to 61
# https://docs.python.org/3/library/concurrent.futures.html#processpoolexecutor
MAX_WORKERS_WINDOWS = 61


def ensure_directory_exists(directory: Union[str, os.PathLike]) -> None:
    """
    If a directory doesn't exist, make it (including parents).

    Parameters
    ----------
    directory : str or pathlib.Path
        Directory to be created if it doesn't exist.
    """
    Path(directory).mkdir(parents=True, exist_ok=True)


def catch_input_file_error(path: Union[str, os.PathLike]) -> None:
    """
    Catches if an input path doesn't exist, and returns an informative error.

    Parameters
    ----------
    path : str or pathlib.Path
        Input file path (e.g. a domain spec file).

    Raises
    ------
    CommandLineInputError
        If the file doesn't exist.
    """
    if not Path(path).exists():
        message = (
            "File path: '{}' cannot be found. Please check your input "
            "arguments.".format(path)
        )
        raise CommandLineInputError(message)


def get_num_workers(
    min_free_cpu_cores: int = 1,
    n_max_workers: Optional[int] = None,
) -> int:
    """
    Determine how many worker threads to use for chunked integration, based
    on a minimum number of CPU cores to leave free, and an optional maximum.

    Cluster computing aware for the SLURM job scheduler. The result only
    affects wall time: chunked reductions are merged in a fixed order.

    Parameters
    ----------
    min_free_cpu_cores : int, optional
        How many CPU cores to leave free.

    n_max_workers : int, optional
        Maximum number of workers.

    Returns
    -------
    int
        Number of workers to use, at least 1.
    """
    logging.debug("Determining the number of worker threads to use")

    n_workers = get_cores_available() - min_free_cpu_cores
    logging.debug(f"Number of CPU cores available is: {n_workers}")

    n_max_workers = limit_cpus_windows(n_max_workers)
    if n_max_workers is not None:
        if n_max_workers < n_workers:
            logging.debug(
                f"Limiting the number of workers to {n_max_workers} based"
                f" on other considerations."
            )
        n_workers = min(n_workers, n_max_workers)

    if n_workers < 1:
        logging.debug("Forcing number of workers to be 1")
        n_workers = 1

    logging.debug(f"Setting number of workers to: {n_workers}")
    return int(n_workers)


def limit_cpus_windows(n_max_workers):
    if platform.system() == "Windows":
        if n_max_workers is not None:
            n_max_workers = min(n_max_workers, MAX_WORKERS_WINDOWS)
        else:
            n_max_workers = MAX_WORKERS_WINDOWS
    return n_max_workers


def get_cores_available():
    try:
        os.environ["SLURM_JOB_ID"]
        n_cpu_cores = slurmio.SlurmJobParameters().allocated_cores
    except KeyError:
        n_cpu_cores = psutil.cpu_count()

    return n_cpu_cores or 1
