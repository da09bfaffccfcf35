"""
Trace Plots of Sampled Parameters
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from dtanma.exceptions import DomainError
from dtanma.report.svg import SvgDocument
from dtanma.sampler.draws import Draws

logger = logging.getLogger(__name__)

CHAIN_COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"]
PANEL_WIDTH = 520.0
PANEL_HEIGHT = 90.0
PANEL_GAP = 30.0
MARGIN_LEFT = 130.0
MARGIN = 20.0
DEFAULT_BLOCKS = ("mu", "sigma", "rho", "m", "s")


def default_trace_names(draws: Draws, limit: int = 12) -> List[str]:
    """
    Hyperparameters first, capped at `limit` panels
    """
    names: List[str] = []
    for block in DEFAULT_BLOCKS:
        if block in draws.layout:
            names.extend(draws.layout.block_names(block))
    return (names or draws.names)[:limit]


def trace_plot(
    draws: Draws, names: Optional[Sequence[str]], outpath: Union[str, Path]
) -> Path:
    """
    One panel per parameter with one polyline per chain

    Parameters
    ----------
    draws: Draws
    names: Optional[Sequence[str]]
        Parameter names to draw (default a selection of hyperparameters)
    outpath: Union[str, Path]

    Returns
    -------
    Path
    """
    names = list(names) if names else default_trace_names(draws)
    unknown = [name for name in names if name not in draws.layout.names]
    if unknown:
        raise DomainError(f"unknown parameter(s): {', '.join(unknown)}")
    height = MARGIN + len(names) * (PANEL_HEIGHT + PANEL_GAP)
    document = SvgDocument(MARGIN_LEFT + PANEL_WIDTH + MARGIN, height, title="Trace plots")
    n_draws = draws.n_draws
    x_scale = PANEL_WIDTH / max(1, n_draws - 1)
    for panel, name in enumerate(names):
        top = MARGIN + panel * (PANEL_HEIGHT + PANEL_GAP)
        values = draws.column(name)
        low, high = float(np.min(values)), float(np.max(values))
        span = high - low if high > low else 1.0
        group = document.group("trace-panel")
        document.text(
            (MARGIN_LEFT - 10, top + PANEL_HEIGHT / 2), name, "parameter-label",
            anchor="end", parent=group,
        )
        document.line(
            (MARGIN_LEFT, top + PANEL_HEIGHT),
            (MARGIN_LEFT + PANEL_WIDTH, top + PANEL_HEIGHT),
            "axis",
            parent=group,
        )
        for chain in range(draws.n_chains):
            points = [
                (
                    MARGIN_LEFT + index * x_scale,
                    top + PANEL_HEIGHT * (1.0 - (value - low) / span),
                )
                for index, value in enumerate(values[chain])
            ]
            document.polyline(
                points,
                "trace-line",
                stroke=CHAIN_COLORS[chain % len(CHAIN_COLORS)],
                width=0.8,
                parent=group,
            )
    logger.debug("Trace plot: %d parameters, %d chains", len(names), draws.n_chains)
    return document.write(outpath)
