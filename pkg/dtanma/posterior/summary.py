"""
Posterior Mean and Equal-Tailed Interval of a Scalar Series
"""

import logging
import math
from typing import Sequence, Union

import numpy as np

from dtanma.config import PosteriorConfig
from dtanma.containers import IntervalSummary
from dtanma.exceptions import DomainError

logger = logging.getLogger(__name__)


def percentile(values: Union[Sequence[float], np.ndarray], q: float) -> float:
    """
    Linear-interpolation percentile that tolerates +inf

    Interpolating toward an infinite order statistic gives +inf instead
    of NaN.

    Parameters
    ----------
    values: Union[Sequence[float], np.ndarray]
        Finite values or +inf, no NaN
    q: float
        Percentile in [0, 100]

    Returns
    -------
    float
    """
    ordered = np.sort(np.asarray(values, dtype=float).ravel())
    if ordered.size == 0:
        raise DomainError("percentile of an empty series")
    position = (ordered.size - 1) * q / 100.0
    low, high = math.floor(position), math.ceil(position)
    if low == high:
        return float(ordered[low])
    if np.isinf(ordered[high]):
        return math.inf
    fraction = position - low
    return float(ordered[low] + (ordered[high] - ordered[low]) * fraction)


def summarize(values: Union[Sequence[float], np.ndarray]) -> IntervalSummary:
    """
    Mean with the 2.5% and 97.5% percentiles

    Percentiles interpolate linearly between order statistics, so the
    series 1..100 gives (50.5, 3.475, 97.525).

    Parameters
    ----------
    values: Union[Sequence[float], np.ndarray]

    Returns
    -------
    IntervalSummary

    Raises
    ------
    DomainError
        For an empty series
    """
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise DomainError("cannot summarize an empty series")
    lower, upper = np.percentile(
        values, [PosteriorConfig.INTERVAL_LOWER, PosteriorConfig.INTERVAL_UPPER]
    )
    mean = float(np.mean(values))
    # a constant series must give a zero-width interval around its value
    if lower == upper:
        mean = float(lower)
    return IntervalSummary(mean=mean, lower=float(lower), upper=float(upper))
