"""
Variance Partition of the Arm-Based Random Effects
"""

import logging
from itertools import combinations
from typing import List, Optional

import numpy as np

from dtanma.config import Outcomes
from dtanma.containers import SummaryRow, VarianceReport
from dtanma.exceptions import DomainError
from dtanma.models.covariance import intra_study_correlation
from dtanma.posterior.accuracy import labels_from_layout
from dtanma.posterior.summary import summarize
from dtanma.sampler.draws import Draws

logger = logging.getLogger(__name__)

TOTAL = "total_variance"
TOTAL_AVERAGE_TAU = "total_variance_mean_tau"
BETWEEN_PERCENT = "between_study_percent"
INTRA_STUDY = "intra_study_correlation"
RHO = "rho"


def _row(
    measure: str, outcome: str, values: np.ndarray, stratum: Optional[str], test=None
) -> SummaryRow:
    summary = summarize(values)
    return SummaryRow(
        stratum=stratum,
        test=None if test is None else str(test),
        measure=f"{measure}_{outcome}",
        mean=summary.mean,
        lower=summary.lower,
        upper=summary.upper,
    )


def variance_partition(draws: Draws, stratum: Optional[str] = None) -> VarianceReport:
    """
    Total logit-scale variability, its between-study share and the
    intra-study correlations, per outcome

    Under compound symmetry every quantity has one row per outcome. Under
    an unstructured covariance totals and percentages are reported per
    test, intra-study correlations per test pair, and a total using the
    mean within-study variance across tests is added with its own
    measure name.

    Parameters
    ----------
    draws: Draws
        Arm-based draws
    stratum: Optional[str]

    Returns
    -------
    VarianceReport
    """
    if "sigma" not in draws.layout or "tau" not in draws.layout:
        raise DomainError("the variance partition needs arm-based draws")
    sigma_squared = np.square(draws.pooled("sigma"))
    tau = draws.pooled("tau")
    rows: List[SummaryRow] = []
    for j, outcome in enumerate(Outcomes.ORDERED):
        between = sigma_squared[:, j]
        if tau.ndim == 2:
            within = np.square(tau[:, j])
            total = between + within
            rows.append(_row(TOTAL, outcome, total, stratum))
            rows.append(_row(BETWEEN_PERCENT, outcome, 100.0 * between / total, stratum))
            rows.append(
                _row(
                    INTRA_STUDY,
                    outcome,
                    intra_study_correlation(np.sqrt(between), tau[:, j], tau[:, j]),
                    stratum,
                )
            )
            continue
        labels = labels_from_layout(draws.layout, "tau")
        for k, label in enumerate(labels):
            total = between + np.square(tau[:, j, k])
            rows.append(_row(TOTAL, outcome, total, stratum, test=label))
            rows.append(
                _row(BETWEEN_PERCENT, outcome, 100.0 * between / total, stratum, test=label)
            )
        average_total = between + np.mean(np.square(tau[:, j, :]), axis=-1)
        rows.append(_row(TOTAL_AVERAGE_TAU, outcome, average_total, stratum))
        for first, second in combinations(range(len(labels)), 2):
            rows.append(
                _row(
                    INTRA_STUDY,
                    outcome,
                    intra_study_correlation(
                        np.sqrt(between), tau[:, j, first], tau[:, j, second]
                    ),
                    stratum,
                    test=f"{labels[first]}-{labels[second]}",
                )
            )
    rho = summarize(draws.pooled("rho"))
    rows.append(
        SummaryRow(
            stratum=stratum, measure=RHO, mean=rho.mean, lower=rho.lower, upper=rho.upper
        )
    )
    return VarianceReport(stratum=stratum, rows=rows, rho=rho)
