"""
Logging Utilities for dtanma
"""

import logging
from typing import Sequence

logger = logging.getLogger(__name__)

DTANMA_LEVEL: int = logging.INFO + 1


def log_dtanma(self: logging.Logger, message: str, *args, **kwargs) -> None:
    """
    Custom Logging Level for Headline Messages

    Just above logging.INFO (21)

    Parameters
    ----------
    self: logging.Logger
    message: str
        Message String
    args
    kwargs

    Returns
    -------
    None
    """
    logging.addLevelName(level=DTANMA_LEVEL, levelName="DTANMA")
    if self.isEnabledFor(level=DTANMA_LEVEL):
        self._log(level=DTANMA_LEVEL, msg=message, args=args, **kwargs)


def describe_labels(labels: Sequence[object], limit: int = 10) -> str:
    """
    Comma separated labels, truncated for long lists
    """
    shown = ", ".join(str(label) for label in labels[:limit])
    if len(labels) > limit:
        shown += f", ... ({len(labels) - limit} more)"
    return shown
