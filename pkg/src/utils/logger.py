import logging
import sys
from typing import Union


def setup_logger(name: str = "moo-bfgs", level: Union[int, str] = logging.INFO) -> logging.Logger:
    """
    Sets up the package logger with consistent formatting.

    Child loggers created with ``logging.getLogger(__name__)`` under ``src``
    propagate here through the ``src`` logger alias below.
    """
    logger = logging.getLogger(name)

    # Only configure if handlers haven't been added yet to avoid duplicate logs
    if not logger.handlers:
        console_handler = logging.StreamHandler(sys.stdout)

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        console_handler.setFormatter(formatter)

        logger.addHandler(console_handler)

    logger.setLevel(level)
    return logger


def set_level(level: Union[int, str]) -> None:
    """Adjust the level of the package loggers (CLI ``--log-level``)."""
    for name in ("moo-bfgs", "src"):
        logging.getLogger(name).setLevel(level)


# Create the default logger instance
logger = setup_logger()

# Module loggers are named after their import path (src.optimization.solver, ...)
_package_logger = logging.getLogger("src")
if not _package_logger.handlers:
    _package_logger.handlers = list(logger.handlers)
    _package_logger.setLevel(logger.level)
    _package_logger.propagate = False
