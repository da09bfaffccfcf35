"""
Accuracy Summary Tables
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from dtanma.config import Outcomes, PosteriorConfig
from dtanma.containers import AccuracySummary, SummaryRow
from dtanma.exceptions import DomainError
from dtanma.posterior.ranking import dor, relative_measures, superiority_index
from dtanma.posterior.summary import summarize

logger = logging.getLogger(__name__)

DOR = "dor"


def relative_measure_name(outcome: str) -> str:
    return f"relative_{outcome}"


def difference_measure_name(outcome: str) -> str:
    return f"difference_{outcome}"


def _row(stratum: Optional[str], test: object, measure: str, values: np.ndarray) -> SummaryRow:
    summary = summarize(values)
    return SummaryRow(
        stratum=stratum,
        test=str(test),
        measure=measure,
        mean=summary.mean,
        lower=summary.lower,
        upper=summary.upper,
    )


def build_accuracy_summary(
    accuracy: np.ndarray,
    test_labels: Sequence[object],
    kind: str,
    reference: Optional[object] = None,
    stratum: Optional[str] = None,
    tie_tol: float = PosteriorConfig.TIE_TOLERANCE,
) -> AccuracySummary:
    """
    Summarise per-draw accuracies of every test

    Parameters
    ----------
    accuracy: np.ndarray
        Shape (n, 2, K): sensitivity then specificity per draw
    test_labels: Sequence[object]
        Original labels of the K tests
    kind: str
        `marginal` or `conditional`, carried into the report
    reference: Optional[object]
        Reference test of the relative measures (default the first test)
    stratum: Optional[str]
    tie_tol: float
        Tie tolerance of the superiority index

    Returns
    -------
    AccuracySummary
    """
    accuracy = np.asarray(accuracy, dtype=float)
    if accuracy.ndim != 3 or accuracy.shape[1] != 2:
        raise DomainError(f"expected per-draw accuracies (n, 2, K), got {accuracy.shape}")
    if accuracy.shape[2] != len(test_labels):
        raise DomainError(
            f"{accuracy.shape[2]} test columns but {len(test_labels)} labels"
        )
    reference = test_labels[0] if reference is None else reference
    relative = relative_measures(accuracy, test_labels, reference)
    accuracy_rows: List[SummaryRow] = []
    relative_rows: List[SummaryRow] = []
    dor_rows: List[SummaryRow] = []
    for k, label in enumerate(test_labels):
        for j, outcome in enumerate(Outcomes.ORDERED):
            accuracy_rows.append(_row(stratum, label, outcome, accuracy[:, j, k]))
        for j, outcome in enumerate(Outcomes.ORDERED):
            relative_rows.append(
                _row(stratum, label, relative_measure_name(outcome), relative.ratio[:, j, k])
            )
            relative_rows.append(
                _row(
                    stratum,
                    label,
                    difference_measure_name(outcome),
                    relative.difference[:, j, k],
                )
            )
        dor_rows.append(_row(stratum, label, DOR, dor(accuracy[:, 0, k], accuracy[:, 1, k])))
    superiority = (
        superiority_index(accuracy, test_labels, tie_tol) if len(test_labels) > 1 else []
    )
    logger.debug("Summarised %d tests from %d draws", len(test_labels), accuracy.shape[0])
    return AccuracySummary(
        kind=kind,
        stratum=stratum,
        reference=str(reference),
        accuracy=accuracy_rows,
        relative=relative_rows,
        dor=dor_rows,
        superiority=superiority,
    )
