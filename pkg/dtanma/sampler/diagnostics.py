"""
Convergence Diagnostics: Split R-hat, Effective Sample Size, MCSE
"""

import logging
from typing import Optional

import numpy as np
from scipy import fft

from dtanma.config import DiagnosticsConfig
from dtanma.containers import Diagnostics, ParameterDiagnostics
from dtanma.exceptions import DiagnosticError
from dtanma.sampler.draws import Draws

logger = logging.getLogger(__name__)


def split_chains(values: np.ndarray, segments: int = 2) -> np.ndarray:
    """
    Cut every chain into equal consecutive segments

    Trailing draws that do not fill a segment are dropped.

    Parameters
    ----------
    values: np.ndarray
        Shape (chains, draws)
    segments: int
        Segments per chain

    Returns
    -------
    np.ndarray
        Shape (chains * segments, draws // segments)
    """
    values = np.asarray(values, dtype=float)
    n_chains, n_draws = values.shape
    length = n_draws // segments
    trimmed = values[:, : length * segments]
    return trimmed.reshape(n_chains * segments, length)


def _segments_per_chain(n_chains: int) -> int:
    return 2 if n_chains >= DiagnosticsConfig.MIN_CHAINS else 4


def _check_shape(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise DiagnosticError(f"expected (chains, draws) values, got shape {values.shape}")
    n_chains, n_draws = values.shape
    minimum = max(
        DiagnosticsConfig.MIN_DRAWS_PER_CHAIN, 2 * _segments_per_chain(n_chains)
    )
    if n_chains < 1 or n_draws < minimum:
        raise DiagnosticError(
            f"diagnostics need at least {minimum} draws per chain, got {n_draws}"
        )
    return values


def _potential_scale_reduction(segments: np.ndarray) -> float:
    length = segments.shape[1]
    within = float(np.mean(np.var(segments, axis=1, ddof=1)))
    between = float(length * np.var(np.mean(segments, axis=1), ddof=1))
    if within <= 0.0:
        return 1.0 if between <= 0.0 else DiagnosticsConfig.RHAT_CEILING
    pooled = (length - 1) / length * within + between / length
    rhat = float(np.sqrt(pooled / within))
    return float(min(max(rhat, 1.0), DiagnosticsConfig.RHAT_CEILING))


def split_rhat(values: np.ndarray) -> float:
    """
    Split-chain potential scale reduction factor

    Parameters
    ----------
    values: np.ndarray
        Shape (chains, draws)

    Returns
    -------
    float
        At least 1. Chains stuck at distinct constants give the
        configured ceiling.
    """
    values = _check_shape(values)
    if not np.all(np.isfinite(values)):
        return DiagnosticsConfig.RHAT_CEILING
    segments = split_chains(values, _segments_per_chain(values.shape[0]))
    return _potential_scale_reduction(segments)


def autocovariance(values: np.ndarray) -> np.ndarray:
    """
    Biased autocovariance of each row at every lag, computed with an FFT
    """
    values = np.asarray(values, dtype=float)
    length = values.shape[-1]
    centered = values - values.mean(axis=-1, keepdims=True)
    size = fft.next_fast_len(2 * length)
    spectrum = fft.rfft(centered, n=size, axis=-1)
    return fft.irfft(spectrum * np.conjugate(spectrum), n=size, axis=-1)[
        ..., :length
    ] / length


def effective_sample_size(values: np.ndarray) -> float:
    """
    Effective number of draws from split-chain autocorrelations

    Paired autocorrelation sums are accumulated until the first negative
    pair and made monotone. The estimate is capped at N log10 N for N
    total draws.

    Parameters
    ----------
    values: np.ndarray
        Shape (chains, draws)

    Returns
    -------
    float
    """
    values = _check_shape(values)
    segments = split_chains(values, _segments_per_chain(values.shape[0]))
    n_segments, length = segments.shape
    total = n_segments * length
    if not np.all(np.isfinite(segments)):
        return 1.0
    acov = autocovariance(segments)
    mean_acov = acov.mean(axis=0)
    within = mean_acov[0] * length / (length - 1)
    pooled = within * (length - 1) / length
    if n_segments > 1:
        pooled += np.var(segments.mean(axis=1), ddof=1)
    if pooled <= 0.0:
        return float(total)

    def autocorrelation(lag: int) -> float:
        return 1.0 - (within - mean_acov[lag]) / pooled

    rho = np.zeros(length)
    rho[0] = rho_even = 1.0
    rho[1] = rho_odd = autocorrelation(1) if length > 1 else 0.0
    lag = 1
    while lag < length - 3 and rho_even + rho_odd > 0.0:
        rho_even = autocorrelation(lag + 1)
        rho_odd = autocorrelation(lag + 2)
        if rho_even + rho_odd >= 0.0:
            rho[lag + 1] = rho_even
            rho[lag + 2] = rho_odd
        lag += 2
    max_lag = lag - 2
    if rho_even > 0.0 and max_lag + 1 < length:
        rho[max_lag + 1] = rho_even
    # initial monotone sequence
    lag = 1
    while lag <= max_lag - 2:
        if rho[lag + 1] + rho[lag + 2] > rho[lag - 1] + rho[lag]:
            rho[lag + 1] = rho[lag + 2] = (rho[lag - 1] + rho[lag]) / 2.0
        lag += 2
    tau = -1.0 + 2.0 * np.sum(rho[: max_lag + 1]) + np.sum(rho[max_lag + 1 : max_lag + 2])
    tau = max(tau, 1.0 / np.log10(total))
    return float(total / tau)


def parameter_diagnostics(name: str, values: np.ndarray) -> ParameterDiagnostics:
    """
    R-hat, n_eff and Monte Carlo standard error of one scalar series
    """
    values = _check_shape(values)
    n_eff = effective_sample_size(values)
    sd = float(np.std(values, ddof=1))
    return ParameterDiagnostics(
        name=name,
        mean=float(np.mean(values)),
        sd=sd,
        rhat=split_rhat(values),
        n_eff=n_eff,
        mcse=sd / np.sqrt(n_eff),
    )


def diagnostics(draws: Draws, names: Optional[list] = None) -> Diagnostics:
    """
    Convergence diagnostics of every stored quantity

    Parameters
    ----------
    draws: Draws
    names: Optional[list]
        Restrict to these parameter names (default all)

    Returns
    -------
    Diagnostics

    Raises
    ------
    DiagnosticError
        With fewer than four draws per chain
    """
    names = draws.names if names is None else list(names)
    parameters = [
        parameter_diagnostics(name=name, values=draws.column(name)) for name in names
    ]
    max_rhat = max((item.rhat for item in parameters), default=1.0)
    result = Diagnostics(
        parameters=parameters,
        n_chains=draws.n_chains,
        n_draws=draws.n_draws,
        n_divergent=draws.n_divergent,
        max_rhat=max_rhat,
        all_rhat_ok=max_rhat <= DiagnosticsConfig.RHAT_THRESHOLD,
    )
    if not result.all_rhat_ok:
        worst = max(parameters, key=lambda item: item.rhat)
        logger.warning(
            "R-hat above %.2f: worst is %s at %.3f",
            DiagnosticsConfig.RHAT_THRESHOLD,
            worst.name,
            worst.rhat,
        )
    if result.n_divergent:
        logger.warning("%d divergent transitions after warmup", result.n_divergent)
    return result
