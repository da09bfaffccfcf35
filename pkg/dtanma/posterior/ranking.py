"""
Relative Measures, Diagnostic Odds Ratio and Superiority Index
"""

import logging
from typing import List, NamedTuple, Sequence, Tuple, Union

import numpy as np

from dtanma.config import PosteriorConfig
from dtanma.containers import SuperioritySummary
from dtanma.exceptions import DomainError
from dtanma.posterior.summary import percentile

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]


class RelativeMeasures(NamedTuple):
    """
    Per-draw ratio and difference of every test against a reference

    Both have shape (n, 2, K); the reference column is exactly 1 and 0.
    """

    ratio: np.ndarray
    difference: np.ndarray


def relative_measures(
    marginals: np.ndarray, test_labels: Sequence[object], reference: object
) -> RelativeMeasures:
    """
    Relative sensitivity and specificity against a reference test

    Parameters
    ----------
    marginals: np.ndarray
        Per-draw accuracies, shape (n, 2, K)
    test_labels: Sequence[object]
        Labels of the K tests
    reference: object
        Label of the reference test

    Returns
    -------
    RelativeMeasures
    """
    labels = [str(label) for label in test_labels]
    if str(reference) not in labels:
        raise DomainError(f"reference test {reference} is not among {labels}")
    marginals = np.asarray(marginals, dtype=float)
    reference_values = marginals[:, :, [labels.index(str(reference))]]
    return RelativeMeasures(
        ratio=marginals / reference_values,
        difference=marginals - reference_values,
    )


def dor(sens: ArrayLike, spec: ArrayLike) -> Union[float, np.ndarray]:
    """
    Diagnostic odds ratio sens * spec / ((1 - sens)(1 - spec))

    Parameters
    ----------
    sens: ArrayLike
        Sensitivities in (0, 1)
    spec: ArrayLike
        Specificities in (0, 1)

    Returns
    -------
    Union[float, np.ndarray]
        A float for scalar inputs

    Raises
    ------
    DomainError
        When any input lies outside the open unit interval
    """
    sens_array = np.asarray(sens, dtype=float)
    spec_array = np.asarray(spec, dtype=float)
    for name, values in (("sensitivity", sens_array), ("specificity", spec_array)):
        if not np.all((values > 0.0) & (values < 1.0)):
            raise DomainError(f"{name} must lie strictly between 0 and 1")
    ratio = (sens_array * spec_array) / ((1.0 - sens_array) * (1.0 - spec_array))
    return float(ratio) if ratio.ndim == 0 else ratio


def dominance_counts(
    sens: ArrayLike, spec: ArrayLike, tie_tol: float = PosteriorConfig.TIE_TOLERANCE
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Count the tests each test dominates, is dominated by and ties with

    Test k dominates k' when it is higher on both sensitivity and
    specificity by more than `tie_tol`; they tie when both differ by at
    most `tie_tol`. Other pairs are incomparable.

    Parameters
    ----------
    sens: ArrayLike
        Shape (..., K)
    spec: ArrayLike
        Shape (..., K)
    tie_tol: float

    Returns
    -------
    Tuple[np.ndarray, np.ndarray, np.ndarray]
        (a, b, c) integer counts, each of shape (..., K)
    """
    if tie_tol < 0:
        raise DomainError(f"tie tolerance must be nonnegative, got {tie_tol}")
    sens = np.asarray(sens, dtype=float)
    spec = np.asarray(spec, dtype=float)
    # [..., k, k'] compares test k with test k'
    sens_gap = sens[..., :, None] - sens[..., None, :]
    spec_gap = spec[..., :, None] - spec[..., None, :]
    n_tests = sens.shape[-1]
    others = ~np.eye(n_tests, dtype=bool)
    dominates = (sens_gap > tie_tol) & (spec_gap > tie_tol)
    dominated = (sens_gap < -tie_tol) & (spec_gap < -tie_tol)
    tied = (np.abs(sens_gap) <= tie_tol) & (np.abs(spec_gap) <= tie_tol) & others
    return (
        dominates.sum(axis=-1),
        dominated.sum(axis=-1),
        tied.sum(axis=-1),
    )


def superiority_values(
    sens: ArrayLike, spec: ArrayLike, tie_tol: float = PosteriorConfig.TIE_TOLERANCE
) -> np.ndarray:
    """
    Superiority index S = (2a + c) / (2b + c) of every test

    A zero denominator gives +inf, and NaN when the numerator is zero
    too (the test is comparable to no other test).

    Returns
    -------
    np.ndarray
        Shape (..., K)
    """
    a, b, c = dominance_counts(sens, spec, tie_tol)
    numerator = (2 * a + c).astype(float)
    denominator = (2 * b + c).astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = numerator / denominator
    values[(denominator == 0) & (numerator > 0)] = np.inf
    values[(denominator == 0) & (numerator == 0)] = np.nan
    return values


def superiority_index(
    marginals: np.ndarray,
    test_labels: Sequence[object],
    tie_tol: float = PosteriorConfig.TIE_TOLERANCE,
) -> List[SuperioritySummary]:
    """
    Per-draw superiority index of every test, summarised by its median

    Parameters
    ----------
    marginals: np.ndarray
        Per-draw accuracies, shape (n, 2, K)
    test_labels: Sequence[object]
    tie_tol: float
        Accuracy differences at most this large count as ties

    Returns
    -------
    List[SuperioritySummary]
        Undefined draws are left out of the median and percentiles; a
        test undefined in every draw has NaN summaries
    """
    marginals = np.asarray(marginals, dtype=float)
    n_tests = marginals.shape[-1]
    if n_tests < 2:
        raise DomainError("the superiority index needs at least two tests")
    values = superiority_values(marginals[:, 0, :], marginals[:, 1, :], tie_tol)
    summaries: List[SuperioritySummary] = []
    for k, label in enumerate(test_labels):
        column = values[:, k]
        defined = column[~np.isnan(column)]
        if defined.size:
            median = percentile(defined, 50.0)
            lower = percentile(defined, PosteriorConfig.INTERVAL_LOWER)
            upper = percentile(defined, PosteriorConfig.INTERVAL_UPPER)
        else:
            median = lower = upper = float("nan")
        summaries.append(
            SuperioritySummary(
                test=str(label),
                median=median,
                lower=lower,
                upper=upper,
                n_infinite=int(np.isinf(column).sum()),
                n_undefined=int(np.isnan(column).sum()),
                n_draws=int(column.size),
            )
        )
    return summaries
