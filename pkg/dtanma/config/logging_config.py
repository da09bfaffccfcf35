"""
Logging Configuration: Console Handlers and Per-Run Log Files
"""

import logging
from contextlib import contextmanager
from os import getenv
from pathlib import Path
from typing import Iterator, Optional, Union

from rich.logging import RichHandler

from dtanma.config.file_config import FileConfig

LOG_HANDLER = getenv("DTANMA_LOG_HANDLER", "rich").lower()
RUN_LOG_FORMAT = "%(asctime)s [%(levelname)8s] %(name)s: %(message)s"
QUIET_LOGGERS = ("jax", "absl")


def resolve_log_level(log_level: Optional[Union[int, str]] = None) -> int:
    """
    Numeric log level from an argument or the LOG_LEVEL environment variable

    Unknown level names fall back to INFO.
    """
    if log_level is None:
        log_level = getenv("LOG_LEVEL", "INFO")
    if isinstance(log_level, int):
        return log_level
    level = logging.getLevelName(log_level.strip().upper())
    return level if isinstance(level, int) else logging.INFO


def console_handler(log_level: int) -> logging.Handler:
    """
    Rich console handler, or a plain stream handler under pytest and
    when DTANMA_LOG_HANDLER=python
    """
    if LOG_HANDLER == "python" or getenv("PYTEST_CURRENT_TEST") is not None:
        handler: logging.Handler = logging.StreamHandler()
        handler.setFormatter(
            logging.Formatter("%(asctime)s [%(levelname)8s]: %(message)s")
        )
    else:
        handler = RichHandler(
            rich_tracebacks=True,
            omit_repeated_times=False,
            show_path=False,
        )
        handler.setFormatter(
            logging.Formatter(datefmt="[%Y-%m-%d %H:%M:%S]", fmt="%(message)s")
        )
    handler.setLevel(log_level)
    return handler


def set_up_logging(log_level: Optional[Union[int, str]] = None) -> None:
    """
    Replace the root handlers with one console handler

    Run log handlers attached by `run_log` are kept.

    Parameters
    ----------
    log_level: Optional[Union[int, str]]
        Console level; defaults to LOG_LEVEL, then INFO
    """
    level = resolve_log_level(log_level)
    run_handlers = [
        handler
        for handler in logging.root.handlers
        if isinstance(handler, logging.FileHandler)
    ]
    logging.root.handlers = [console_handler(level), *run_handlers]
    logging.root.setLevel(min([level, *(handler.level for handler in run_handlers)]))
    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)


@contextmanager
def run_log(
    directory: Union[str, Path], log_level: int = logging.INFO
) -> Iterator[Path]:
    """
    Mirror log records into a log file inside a run directory

    The file is rewritten on every run and detached on exit.

    Parameters
    ----------
    directory: Union[str, Path]
    log_level: int

    Yields
    ------
    Path
        The log file
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / FileConfig.RUN_LOG_FILE
    handler = logging.FileHandler(path, mode="w", encoding="utf-8")
    handler.setFormatter(logging.Formatter(RUN_LOG_FORMAT))
    handler.setLevel(log_level)
    previous_level = logging.root.level
    logging.root.addHandler(handler)
    if previous_level > log_level:
        logging.root.setLevel(log_level)
    try:
        yield path
    finally:
        logging.root.removeHandler(handler)
        logging.root.setLevel(previous_level)
        handler.close()
