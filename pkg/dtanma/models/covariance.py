"""
Between-Study Covariance Helpers
"""

import logging
from typing import Sequence, Union

import numpy as np

from dtanma.exceptions import DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]


def assemble_covariance(sigma: ArrayLike, rho: float) -> np.ndarray:
    """
    Sigma = diag(sigma) @ Omega @ diag(sigma), Omega = [[1, rho], [rho, 1]]

    Parameters
    ----------
    sigma: ArrayLike
        The two between-study standard deviations
    rho: float
        Between-study correlation

    Returns
    -------
    np.ndarray
        2x2 symmetric positive definite matrix
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (2,):
        raise DomainError(f"sigma must hold two values, got shape {sigma.shape}")
    if not np.all(np.isfinite(sigma)) or np.any(sigma <= 0):
        raise DomainError(f"sigma must be positive, got {sigma}")
    if not np.isfinite(rho) or abs(rho) >= 1:
        raise DomainError(f"rho must lie in (-1, 1), got {rho}")
    omega = np.array([[1.0, rho], [rho, 1.0]])
    scale = np.diag(sigma)
    return scale @ omega @ scale


def intra_study_correlation(
    sigma_j: ArrayLike, tau_jk: ArrayLike, tau_jk2: ArrayLike
) -> np.ndarray:
    """
    Correlation of two arms of the same study on one outcome

    sigma^2 / sqrt((sigma^2 + tau_k^2)(sigma^2 + tau_k'^2)), which is
    sigma^2 / (sigma^2 + tau^2) under compound symmetry. A zero study
    standard deviation gives zero correlation.

    Parameters
    ----------
    sigma_j: ArrayLike
        Between-study standard deviation (>= 0)
    tau_jk: ArrayLike
        Within-study standard deviation of the first test (> 0)
    tau_jk2: ArrayLike
        Within-study standard deviation of the second test (> 0)

    Returns
    -------
    np.ndarray
        Values in [0, 1); a 0-d array for scalar inputs
    """
    sigma_j, tau_jk, tau_jk2 = (
        np.asarray(value, dtype=float) for value in (sigma_j, tau_jk, tau_jk2)
    )
    if np.any(sigma_j < 0) or not np.all(np.isfinite(sigma_j)):
        raise DomainError(f"sigma must be nonnegative, got {sigma_j}")
    if np.any(tau_jk <= 0) or np.any(tau_jk2 <= 0):
        raise DomainError("within-study standard deviations must be positive")
    variance = np.square(sigma_j)
    return variance / np.sqrt(
        (variance + np.square(tau_jk)) * (variance + np.square(tau_jk2))
    )
