"""
Parallel Chain Runner
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, NamedTuple, Optional, Tuple

import numpy as np
import tenacity

from dtanma.config import SamplerDefaults
from dtanma.containers import SamplerConfig
from dtanma.exceptions import (
    DomainError,
    NonFiniteDensityError,
    SamplerInitializationError,
)
from dtanma.models.base_model import BaseModel
from dtanma.models.layout import ParameterLayout
from dtanma.sampler.adaptation import DualAveraging, RunningVariance, warmup_windows
from dtanma.sampler.draws import Draws
from dtanma.sampler.nuts import Density, find_reasonable_step_size, nuts_transition

logger = logging.getLogger(__name__)


class ChainResult(NamedTuple):
    """
    Kept draws of one chain
    """

    unconstrained: np.ndarray
    log_density: np.ndarray
    divergent: np.ndarray
    tree_depth: np.ndarray
    step_size: float
    inv_mass: np.ndarray


def chain_rng(seed: int, chain: int) -> np.random.Generator:
    """
    Private random stream of one chain, derived from (seed, chain index)
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, chain])))


def _candidate_point(
    density: Density, dim: int, radius: float, rng: np.random.Generator
) -> Tuple[np.ndarray, float, np.ndarray]:
    q = rng.uniform(-radius, radius, size=dim)
    try:
        log_density, gradient = density(q)
    except (FloatingPointError, DomainError) as e:
        raise NonFiniteDensityError(str(e)) from e
    if not np.isfinite(log_density) or not np.all(np.isfinite(gradient)):
        raise NonFiniteDensityError("log density or gradient is not finite")
    return q, log_density, gradient


def initial_point(
    density: Density, dim: int, radius: float, rng: np.random.Generator
) -> Tuple[np.ndarray, float, np.ndarray]:
    """
    Draw uniform starting points in [-radius, radius]^dim until the
    density and gradient are finite

    Raises
    ------
    SamplerInitializationError
        When every attempt fails
    """
    retryer = tenacity.Retrying(
        stop=tenacity.stop.stop_after_attempt(SamplerDefaults.MAX_INIT_ATTEMPTS),
        retry=tenacity.retry_if_exception_type(NonFiniteDensityError),
    )
    try:
        return retryer.__call__(
            fn=_candidate_point, density=density, dim=dim, radius=radius, rng=rng
        )
    except tenacity.RetryError as e:
        raise SamplerInitializationError(
            f"no finite starting point after {SamplerDefaults.MAX_INIT_ATTEMPTS} "
            f"attempts within radius {radius}"
        ) from e


def run_chain(
    density: Density, dim: int, config: SamplerConfig, chain: int
) -> ChainResult:
    """
    Warm up and sample one chain

    Parameters
    ----------
    density: Density
    dim: int
    config: SamplerConfig
    chain: int
        Zero-based chain index

    Returns
    -------
    ChainResult
    """
    rng = chain_rng(config.seed, chain)
    q, log_density, gradient = initial_point(density, dim, config.init_radius, rng)
    inv_mass = np.ones(dim)
    step_size = find_reasonable_step_size(density, q, log_density, gradient, inv_mass, rng)
    averaging = DualAveraging.start(step_size)
    windows = warmup_windows(config.n_warmup)
    variance = RunningVariance(dim)
    warmup_divergent = 0
    for iteration in range(config.n_warmup):
        transition = nuts_transition(
            density,
            q,
            log_density,
            gradient,
            step_size,
            inv_mass,
            rng,
            max_tree_depth=config.max_tree_depth,
        )
        q, log_density, gradient = transition.q, transition.log_density, transition.gradient
        warmup_divergent += transition.divergent
        step_size = averaging.update(transition.accept_stat, config.target_accept)
        for start, end in windows:
            if start <= iteration < end:
                variance.update(q)
                if iteration + 1 == end:
                    inv_mass = variance.regularized_variance()
                    variance.reset()
                    step_size = find_reasonable_step_size(
                        density, q, log_density, gradient, inv_mass, rng, step_size
                    )
                    averaging = DualAveraging.start(step_size)
                    logger.debug(
                        "Chain %d: metric updated at iteration %d, step size %.4g",
                        chain + 1,
                        end,
                        step_size,
                    )
                break
    step_size = averaging.final()
    logger.info(
        "Chain %d: warmup finished (%d iterations, step size %.4g, %d divergent)",
        chain + 1,
        config.n_warmup,
        step_size,
        warmup_divergent,
    )

    n_kept = config.draws_per_chain
    kept = np.zeros((n_kept, dim))
    kept_log_density = np.zeros(n_kept)
    kept_divergent = np.zeros(n_kept, dtype=bool)
    kept_depth = np.zeros(n_kept, dtype=int)
    for iteration in range(n_kept * config.thin):
        transition = nuts_transition(
            density,
            q,
            log_density,
            gradient,
            step_size,
            inv_mass,
            rng,
            max_tree_depth=config.max_tree_depth,
        )
        q, log_density, gradient = transition.q, transition.log_density, transition.gradient
        if (iteration + 1) % config.thin == 0:
            index = iteration // config.thin
            kept[index] = q
            kept_log_density[index] = log_density
            kept_divergent[index] = transition.divergent
            kept_depth[index] = transition.tree_depth
    if kept_divergent.any():
        logger.warning(
            "Chain %d: %d divergent transitions", chain + 1, int(kept_divergent.sum())
        )
    return ChainResult(
        unconstrained=kept,
        log_density=kept_log_density,
        divergent=kept_divergent,
        tree_depth=kept_depth,
        step_size=step_size,
        inv_mass=inv_mass,
    )


def run_chains(
    density: Density,
    dim: int,
    config: SamplerConfig,
    *,
    constrain: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    layout: Optional[ParameterLayout] = None,
) -> Draws:
    """
    Run independent NUTS chains concurrently

    Parameters
    ----------
    density: Density
        Reentrant `q -> (log_density, gradient)` on R^dim
    dim: int
    config: SamplerConfig
    constrain: Optional[Callable[[np.ndarray], np.ndarray]]
        Maps a batch (n, dim) of unconstrained draws to stored quantities
    layout: Optional[ParameterLayout]
        Names of the stored quantities (default x[1]..x[dim])

    Returns
    -------
    Draws

    Raises
    ------
    SamplerInitializationError
        When a chain finds no finite starting point
    """
    if dim < 1:
        raise DomainError(f"dimension must be at least 1, got {dim}")
    logger.info(
        "Sampling %d chain(s): %d warmup, %d draws, thin %d, seed %d",
        config.n_chains,
        config.n_warmup,
        config.n_samples,
        config.thin,
        config.seed,
    )
    with ThreadPoolExecutor(max_workers=config.n_chains) as executor:
        futures = [
            executor.submit(run_chain, density, dim, config, chain)
            for chain in range(config.n_chains)
        ]
        results = [future.result() for future in futures]
    unconstrained = np.stack([result.unconstrained for result in results])
    n_chains, n_draws = unconstrained.shape[:2]
    if constrain is None:
        constrained = unconstrained.copy()
        layout = layout if layout is not None else ParameterLayout.flat(dim)
    else:
        constrained = np.asarray(constrain(unconstrained.reshape(-1, dim)))
        constrained = constrained.reshape(n_chains, n_draws, -1)
        if layout is None:
            layout = ParameterLayout.flat(constrained.shape[-1])
    return Draws(
        constrained=constrained,
        layout=layout,
        log_density=np.stack([result.log_density for result in results]),
        divergent=np.stack([result.divergent for result in results]),
        tree_depth=np.stack([result.tree_depth for result in results]),
        unconstrained=unconstrained,
        step_size=np.array([result.step_size for result in results]),
        thin=config.thin,
    )


def thin_draws(draws: Draws, every: int) -> Draws:
    """
    Keep draws 0, every, 2*every, ... of each chain

    Parameters
    ----------
    draws: Draws
    every: int

    Returns
    -------
    Draws
    """
    if every < 1:
        raise DomainError(f"thinning interval must be at least 1, got {every}")
    if every == 1:
        return draws
    return draws.select(np.arange(0, draws.n_draws, every), thin=draws.thin * every)


def sample_model(model: BaseModel, config: SamplerConfig) -> Draws:
    """
    Sample a model's posterior and store its constrained quantities

    Parameters
    ----------
    model: BaseModel
    config: SamplerConfig

    Returns
    -------
    Draws
    """
    logger.info("Fitting %r", model)
    # compile once before the chains share the function
    model.log_density_and_grad(np.zeros(model.dim))
    return run_chains(
        model.log_density_and_grad,
        model.dim,
        config,
        constrain=model.constrain_draws,
        layout=model.constrained_layout,
    )
