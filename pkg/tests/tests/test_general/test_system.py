import os
from pathlib import Path
from unittest.mock import Mock, patch

import pytest

from weighted_means.general import system
from weighted_means.general.exceptions import CommandLineInputError


def test_ensure_directory_exists(tmpdir):
    # string
    exist_dir = os.path.join(tmpdir, "test_dir")
    system.ensure_directory_exists(exist_dir)
    assert os.path.exists(exist_dir)
    os.rmdir(exist_dir)

    # pathlib, nested
    exist_dir_pathlib = Path(tmpdir) / "test_dir2" / "reports"
    system.ensure_directory_exists(exist_dir_pathlib)
    assert exist_dir_pathlib.exists()


def test_get_num_workers():
    cpu_count = 10
    with patch(
        "weighted_means.general.system.psutil.cpu_count",
        return_value=cpu_count,
    ):
        assert system.get_num_workers(min_free_cpu_cores=0) == cpu_count
        assert system.get_num_workers() == cpu_count - 1


def test_max_workers():
    max_workers = 5
    correct_n = min(system.get_cores_available(), max_workers)
    assert correct_n == system.get_num_workers(
        n_max_workers=max_workers, min_free_cpu_cores=0
    )


def test_at_least_one_worker():
    with patch(
        "weighted_means.general.system.psutil.cpu_count", return_value=1
    ):
        assert system.get_num_workers(min_free_cpu_cores=4) == 1


def test_unknown_cpu_count():
    with patch(
        "weighted_means.general.system.psutil.cpu_count", return_value=None
    ):
        assert system.get_cores_available() == 1


def test_max_workers_windows_low():
    cpu_count = 10
    with patch(
        "weighted_means.general.system.platform.system",
        return_value="Windows",
    ):
        assert system.limit_cpus_windows(cpu_count) == cpu_count


def test_max_workers_windows_high():
    mock_cpu_count = 128
    with patch(
        "weighted_means.general.system.platform.system",
        return_value="Windows",
    ):
        # 61 is max on Windows
        assert system.limit_cpus_windows(mock_cpu_count) == 61
        assert system.limit_cpus_windows(None) == 61


@pytest.mark.parametrize("cores_available", [1, 100, 1000])
def test_cores_available_in_slurm_environment(cores_available):
    mock_slurm_parameters = Mock()
    mock_slurm_parameters.allocated_cores = cores_available

    with (
        patch.dict(
            "weighted_means.general.system.os.environ", {"SLURM_JOB_ID": "1"}
        ),
        patch(
            "weighted_means.general.system.slurmio.SlurmJobParameters",
            return_value=mock_slurm_parameters,
        ),
    ):
        assert system.get_cores_available() == cores_available


@pytest.mark.parametrize("cores_available", [1, 100, 1000])
def test_cores_available(cores_available):
    with (
        patch.dict("weighted_means.general.system.os.environ", clear=True),
        patch(
            "weighted_means.general.system.psutil.cpu_count",
            return_value=cores_available,
        ),
    ):
        assert system.get_cores_available() == cores_available


def test_catch_input_file_error(tmpdir):
    tmpdir = str(tmpdir)
    # check no error is raised:
    system.catch_input_file_error(tmpdir)

    no_exist_file = os.path.join(tmpdir, "domain.json")
    with pytest.raises(CommandLineInputError, match="domain.json"):
        system.catch_input_file_error(no_exist_file)
