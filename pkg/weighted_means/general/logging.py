import logging

LOG_FORMAT = "%(levelname)s [%(module)s] %(message)s"


def suppress_logs_below(logger_name, level):
    """
    Drop records from a third-party logger (and its children) below
    ``level`` at every root handler.
    """

    class BelowLevelFilter(logging.Filter):
        def filter(self, record):
            from_logger = record.name == logger_name or record.name.startswith(
                logger_name + "."
            )
            return not (from_logger and record.levelno < level)

    for handler in logging.getLogger().handlers:
        handler.addFilter(BelowLevelFilter())


def configure_logging(verbose=False):
    """
    Set up root logging for command line use.

    Parameters
    ----------
    verbose : bool, optional
        If True, log at DEBUG level, otherwise only warnings and errors.
    """
    level = logging.DEBUG if verbose else logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
    # the JIT compiler logs every pass at DEBUG
    suppress_logs_below("numba", logging.WARNING)
