"""
Per-Draw Test Accuracies

Marginal (population-averaged) accuracies integrate the inverse logit
over the study and arm random effects of every posterior draw:

    E[expit(mu_jk + x' theta_jk + eta_j + delta_jk)],
    eta_j ~ Normal(0, sigma_j^2), delta_jk ~ Normal(0, tau_jk^2)

Conditional accuracies set the random effects to zero. Monte Carlo
samples come in antithetic pairs, so a zero linear predictor gives 0.5
for any variance.
"""

import logging
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy import special

from dtanma.config import PosteriorConfig
from dtanma.exceptions import DomainError
from dtanma.models.layout import ParameterLayout
from dtanma.sampler.draws import Draws

logger = logging.getLogger(__name__)

MARGINAL = "marginal"
CONDITIONAL = "conditional"


def labels_from_layout(layout: ParameterLayout, block: str = "mu") -> List[Union[int, str]]:
    """
    Original test labels read back from the element names of a (2, K) block
    """
    names = layout.block_names(block)
    n_tests = layout.blocks[block].shape[-1]
    labels: List[Union[int, str]] = []
    for name in names[:n_tests]:
        label = name[name.index("[") + 1 : -1].split(",")[-1]
        labels.append(int(label) if label.lstrip("-").isdigit() else label)
    return labels


def _linear_predictor(
    mu: np.ndarray, theta: Optional[np.ndarray], covariates: Optional[Sequence[float]]
) -> np.ndarray:
    if theta is None or theta.shape[1] == 0:
        return mu
    x = (
        np.zeros(theta.shape[1])
        if covariates is None
        else np.asarray(covariates, dtype=float)
    )
    if x.shape != (theta.shape[1],):
        raise DomainError(
            f"expected {theta.shape[1]} covariate value(s), got {x.shape[0] if x.ndim else 1}"
        )
    return mu + np.einsum("p,npjk->njk", x, theta)


def marginal_accuracy_arrays(
    mu: np.ndarray,
    sigma: np.ndarray,
    tau: np.ndarray,
    theta: Optional[np.ndarray] = None,
    covariates: Optional[Sequence[float]] = None,
    mc_samples: int = PosteriorConfig.MC_SAMPLES,
    seed: int = 0,
    chunk_size: int = PosteriorConfig.MC_CHUNK_SIZE,
) -> np.ndarray:
    """
    Monte Carlo marginal accuracies from parameter arrays

    Parameters
    ----------
    mu: np.ndarray
        Shape (n, 2, K)
    sigma: np.ndarray
        Shape (n, 2)
    tau: np.ndarray
        Shape (n, 2) or (n, 2, K)
    theta: Optional[np.ndarray]
        Shape (n, P, 2, K)
    covariates: Optional[Sequence[float]]
        Covariate values to evaluate at (default all zero)
    mc_samples: int
        Random-effect samples per draw, rounded up to an even number
    seed: int
    chunk_size: int
        Draws processed per batch

    Returns
    -------
    np.ndarray
        Shape (n, 2, K)
    """
    if mc_samples < 1:
        raise DomainError(f"mc_samples must be at least 1, got {mc_samples}")
    if mc_samples % 2:
        logger.debug("Rounding mc_samples up to %d for antithetic pairs", mc_samples + 1)
        mc_samples += 1
    mu = np.asarray(mu, dtype=float)
    n_draws, _, n_tests = mu.shape
    sigma = np.asarray(sigma, dtype=float).reshape(n_draws, 2)
    tau = np.asarray(tau, dtype=float)
    if tau.ndim == 2:
        tau = np.broadcast_to(tau[:, :, None], (n_draws, 2, n_tests))
    location = _linear_predictor(mu, theta, covariates)
    rng = np.random.Generator(np.random.PCG64(seed))
    n_pairs = mc_samples // 2
    result = np.empty_like(location)
    for start in range(0, n_draws, max(1, chunk_size)):
        stop = min(start + max(1, chunk_size), n_draws)
        size = stop - start
        z_eta = _antithetic(rng.standard_normal((size, n_pairs, 2, 1)))
        z_delta = _antithetic(rng.standard_normal((size, n_pairs, 2, n_tests)))
        noise = sigma[start:stop, None, :, None] * z_eta + tau[start:stop, None] * z_delta
        result[start:stop] = special.expit(location[start:stop, None] + noise).mean(axis=1)
    return result


def _antithetic(z: np.ndarray) -> np.ndarray:
    """
    Mirror standard normals along the sample axis: z then -z
    """
    return np.concatenate([z, -z], axis=1)


def _optional_block(draws: Draws, name: str) -> Optional[np.ndarray]:
    return draws.pooled(name) if name in draws.layout else None


def marginal_accuracy(
    draws: Draws,
    mc_samples: int = PosteriorConfig.MC_SAMPLES,
    seed: int = 0,
    covariates: Optional[Sequence[float]] = None,
    pooled_tau: bool = False,
) -> np.ndarray:
    """
    Marginal sensitivity and specificity of every test for every draw

    Parameters
    ----------
    draws: Draws
        Arm-based draws
    mc_samples: int
        Random-effect samples averaged per draw (odd values are rounded up)
    seed: int
        Seed of the Monte Carlo stream
    covariates: Optional[Sequence[float]]
        Covariate vector to evaluate at (default zero)
    pooled_tau: bool
        Use the root mean square of the within-study SDs across tests for
        every test instead of each test's own SD

    Returns
    -------
    np.ndarray
        Shape (chains * draws, 2, K)
    """
    if "sigma" not in draws.layout or "tau" not in draws.layout:
        raise DomainError("marginal accuracies need arm-based draws")
    tau = draws.pooled("tau")
    if pooled_tau and tau.ndim == 3:
        tau = np.sqrt(np.mean(np.square(tau), axis=-1))
    accuracy = marginal_accuracy_arrays(
        mu=draws.pooled("mu"),
        sigma=draws.pooled("sigma"),
        tau=tau,
        theta=_optional_block(draws, "theta"),
        covariates=covariates,
        mc_samples=mc_samples,
        seed=seed,
    )
    logger.debug(
        "Marginal accuracies from %d draws x %d Monte Carlo samples",
        accuracy.shape[0],
        mc_samples,
    )
    return accuracy


def conditional_accuracy(
    draws: Draws, covariates: Optional[Sequence[float]] = None
) -> np.ndarray:
    """
    Accuracies of a study with zero random effects, per draw

    Contrast-based draws carry them as a generated quantity; arm-based
    draws give expit(mu + x' theta).

    Returns
    -------
    np.ndarray
        Shape (chains * draws, 2, K)
    """
    if "accuracy" in draws.layout:
        return draws.pooled("accuracy")
    location = _linear_predictor(
        draws.pooled("mu"), _optional_block(draws, "theta"), covariates
    )
    return special.expit(location)


def accuracy_draws(
    draws: Draws,
    kind: Optional[str] = None,
    mc_samples: int = PosteriorConfig.MC_SAMPLES,
    seed: int = 0,
    covariates: Optional[Sequence[float]] = None,
    pooled_tau: bool = False,
) -> np.ndarray:
    """
    Per-draw accuracies of the requested kind

    The default is marginal for arm-based draws and conditional for
    contrast-based draws, which have no marginal counterpart. `pooled_tau`
    applies to marginal accuracies only.
    """
    if kind is None:
        kind = CONDITIONAL if "accuracy" in draws.layout else MARGINAL
    if kind == MARGINAL:
        return marginal_accuracy(
            draws,
            mc_samples=mc_samples,
            seed=seed,
            covariates=covariates,
            pooled_tau=pooled_tau,
        )
    if kind == CONDITIONAL:
        return conditional_accuracy(draws, covariates=covariates)
    raise DomainError(f"unknown accuracy kind {kind!r}")


def accuracy_labels(draws: Draws) -> List[Union[int, str]]:
    """
    Test labels matching the last axis of `accuracy_draws`
    """
    block = "accuracy" if "accuracy" in draws.layout else "mu"
    return labels_from_layout(draws.layout, block)
