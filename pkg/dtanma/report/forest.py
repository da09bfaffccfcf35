"""
Forest Plot of Study-Level and Pooled Accuracies
"""

import logging
from functools import partial
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import pandas as pd

from dtanma.config import Outcomes
from dtanma.containers import AccuracySummary
from dtanma.exceptions import DomainError
from dtanma.report.svg import SvgDocument

logger = logging.getLogger(__name__)

OVERLAY_COLORS = ["#000000", "#d62728", "#1f77b4"]
STUDY_COLOR = "#9e9e9e"

PANEL_HEIGHT = 240.0
PANEL_GAP = 50.0
MARGIN_LEFT = 60.0
MARGIN_RIGHT = 140.0
MARGIN_TOP = 30.0
MARGIN_BOTTOM = 40.0
SLOT_WIDTH = 70.0
JITTER_WIDTH = 24.0
DIAMOND_HALF_WIDTH = 6.0
DIAMOND_HALF_HEIGHT = 5.0
OVERLAY_OFFSET = 12.0


def _sort_key(label: str):
    return (0, int(label), label) if label.lstrip("-").isdigit() else (1, 0, label)


def _panel_y(top: float, value: float) -> float:
    return top + (1.0 - value) * PANEL_HEIGHT


def _test_order(summaries: Sequence[AccuracySummary]) -> List[str]:
    labels = {test for summary in summaries for test in summary.tests}
    return sorted(labels, key=_sort_key)


def forest_plot(
    summaries: Union[AccuracySummary, Sequence[AccuracySummary]],
    studywise: Optional[pd.DataFrame],
    outpath: Union[str, Path],
    labels: Optional[Sequence[str]] = None,
) -> Path:
    """
    Sensitivity (top) and specificity (bottom) by test

    Grey points are raw study proportions, jittered within each test;
    diamonds mark pooled means and vertical lines their 95% credible
    intervals. Up to three summaries are overlaid in black, red and blue.

    Parameters
    ----------
    summaries: Union[AccuracySummary, Sequence[AccuracySummary]]
    studywise: Optional[pd.DataFrame]
        Columns test_id, sensitivity, specificity (see
        `dtanma.dataset.studywise_proportions`)
    outpath: Union[str, Path]
    labels: Optional[Sequence[str]]
        Legend entries, one per summary

    Returns
    -------
    Path
    """
    if isinstance(summaries, AccuracySummary):
        summaries = [summaries]
    summaries = list(summaries)
    if not 1 <= len(summaries) <= len(OVERLAY_COLORS):
        raise DomainError(
            f"a forest plot overlays 1 to {len(OVERLAY_COLORS)} summaries, "
            f"got {len(summaries)}"
        )
    tests = _test_order(summaries)
    if not tests:
        raise DomainError("no summarised tests to plot")
    labels = list(labels) if labels is not None else [summary.kind for summary in summaries]
    width = MARGIN_LEFT + SLOT_WIDTH * len(tests) + MARGIN_RIGHT
    height = MARGIN_TOP + 2 * PANEL_HEIGHT + PANEL_GAP + MARGIN_BOTTOM
    document = SvgDocument(width, height, title="Accuracy by test")
    slot_center: Dict[str, float] = {
        test: MARGIN_LEFT + SLOT_WIDTH * (index + 0.5) for index, test in enumerate(tests)
    }
    points = studywise if studywise is not None else pd.DataFrame()
    for panel, outcome in enumerate(Outcomes.ORDERED):
        top = MARGIN_TOP + panel * (PANEL_HEIGHT + PANEL_GAP)
        y_position = partial(_panel_y, top)
        axes = document.group(f"panel-{outcome}")
        document.line(
            (MARGIN_LEFT, top), (MARGIN_LEFT, top + PANEL_HEIGHT), "axis", parent=axes
        )
        document.line(
            (MARGIN_LEFT, top + PANEL_HEIGHT),
            (width - MARGIN_RIGHT, top + PANEL_HEIGHT),
            "axis",
            parent=axes,
        )
        for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
            document.line(
                (MARGIN_LEFT - 4, y_position(tick)),
                (MARGIN_LEFT, y_position(tick)),
                "axis-tick",
                parent=axes,
            )
            document.text(
                (MARGIN_LEFT - 8, y_position(tick) + 4),
                f"{tick:.2f}",
                "tick-label",
                anchor="end",
                parent=axes,
            )
        document.text(
            (MARGIN_LEFT / 2 - 10, top - 10), outcome.capitalize(), "panel-title",
            anchor="start", parent=axes,
        )
        for test in tests:
            document.text(
                (slot_center[test], top + PANEL_HEIGHT + 16),
                test,
                "test-label",
                parent=axes,
            )
        if not points.empty:
            for test_id, group in points.groupby("test_id", sort=False):
                test = str(test_id)
                if test not in slot_center:
                    continue
                values = group[outcome].dropna().tolist()
                for index, value in enumerate(values):
                    offset = (
                        0.0
                        if len(values) == 1
                        else (index / (len(values) - 1) - 0.5) * JITTER_WIDTH
                    )
                    document.circle(
                        (slot_center[test] + offset, y_position(value)),
                        2.5,
                        "study-point",
                        fill=STUDY_COLOR,
                        parent=axes,
                        fill_opacity="0.7",
                    )
        for order, summary in enumerate(summaries):
            color = OVERLAY_COLORS[order]
            shift = (order - (len(summaries) - 1) / 2.0) * OVERLAY_OFFSET
            for test in summary.tests:
                row = summary.lookup(test, outcome)
                x = slot_center[test] + shift
                document.line(
                    (x, y_position(row.lower)),
                    (x, y_position(row.upper)),
                    "credible-interval",
                    stroke=color,
                    width=1.5,
                    parent=axes,
                )
                y = y_position(row.mean)
                document.polygon(
                    [
                        (x, y - DIAMOND_HALF_HEIGHT),
                        (x + DIAMOND_HALF_WIDTH, y),
                        (x, y + DIAMOND_HALF_HEIGHT),
                        (x - DIAMOND_HALF_WIDTH, y),
                    ],
                    "pooled-diamond",
                    fill=color,
                    parent=axes,
                )
    legend = document.group("legend")
    for order, label in enumerate(labels[: len(summaries)]):
        y = MARGIN_TOP + 14 * order
        document.line(
            (width - MARGIN_RIGHT + 15, y),
            (width - MARGIN_RIGHT + 35, y),
            "legend-swatch",
            stroke=OVERLAY_COLORS[order],
            width=3.0,
            parent=legend,
        )
        document.text(
            (width - MARGIN_RIGHT + 40, y + 4), label, "legend-label", anchor="start",
            parent=legend,
        )
    logger.debug("Forest plot: %d tests, %d summaries", len(tests), len(summaries))
    return document.write(outpath)
