import logging

import pytest

from weighted_means.general.logging import (
    configure_logging,
    suppress_logs_below,
)


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield root
    for handler in list(root.handlers):
        root.removeHandler(handler)
    for handler in handlers:
        root.addHandler(handler)
    root.setLevel(level)


@pytest.mark.parametrize(
    "verbose, level",
    [
        pytest.param(True, logging.DEBUG, id="verbose"),
        pytest.param(False, logging.WARNING, id="quiet"),
    ],
)
def test_configure_logging(verbose, level, restore_root_logger):
    configure_logging(verbose=verbose)
    assert restore_root_logger.level == level


def test_numba_debug_records_are_dropped(restore_root_logger):
    configure_logging(verbose=True)
    handler = restore_root_logger.handlers[0]

    def record(name, level):
        return logging.LogRecord(name, level, __file__, 1, "msg", None, None)

    assert not handler.filter(record("numba.core.ssa", logging.DEBUG))
    assert handler.filter(record("numba", logging.WARNING))
    assert handler.filter(record("numbat", logging.DEBUG))
    assert handler.filter(record("root", logging.DEBUG))


def test_suppress_logs_below(restore_root_logger):
    handler = logging.NullHandler()
    restore_root_logger.addHandler(handler)
    suppress_logs_below("slurmio", logging.ERROR)
    record = logging.LogRecord(
        "slurmio", logging.WARNING, __file__, 1, "msg", None, None
    )
    assert not handler.filter(record)
