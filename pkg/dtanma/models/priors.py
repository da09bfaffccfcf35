"""
Prior Log-Densities

`*_log_prior` functions evaluate priors on the constrained scale with
scipy and serve as the reference implementation. `*_log_prior_unconstrained`
functions are jax-traceable and already include the log-Jacobian of the
transform in `dtanma.models.transforms`.
"""

import logging

import jax
import jax.numpy as jnp
import numpy as np
from scipy import special, stats

from dtanma.config import CorrelationPrior, ScalePrior
from dtanma.containers import PriorSpec
from dtanma.models.transforms import log_one_minus_tanh_squared

logger = logging.getLogger(__name__)

LOG_2 = float(np.log(2.0))
HALF_LOG_2PI = float(0.5 * np.log(2.0 * np.pi))


def mean_log_prior(x: np.ndarray, priors: PriorSpec) -> float:
    """
    Normal(0, sd) on each location parameter
    """
    return float(np.sum(stats.norm(loc=0.0, scale=priors.mean_sd).logpdf(x)))


def scale_log_prior(x: np.ndarray, priors: PriorSpec) -> float:
    """
    Uniform(0, b) or HalfCauchy(0, s) on each standard deviation

    Values outside the support give -inf.
    """
    x = np.asarray(x, dtype=float)
    if priors.scale_prior == ScalePrior.uniform:
        # open interval: the boundary has zero density under the transform
        inside = (x > 0) & (x < priors.uniform_upper)
        density = np.where(inside, -np.log(priors.uniform_upper), -np.inf)
        return float(np.sum(density))
    return float(np.sum(stats.halfcauchy(scale=priors.half_cauchy_scale).logpdf(x)))


def lkj_log_normalizer(shape: float) -> float:
    """
    log of the LKJ(shape) normaliser for a 2x2 correlation matrix
    """
    return float(-(2.0 * shape - 1.0) * LOG_2 - special.betaln(shape, shape))


def correlation_log_prior(rho: float, priors: PriorSpec) -> float:
    """
    Prior density of the between-study correlation

    atanh_normal puts Normal(0, sd) on atanh(rho); uniform is Uniform(-1, 1);
    lkj is the LKJ(shape) density of the 2x2 correlation matrix,
    proportional to (1 - rho^2)^(shape - 1).
    """
    rho = float(rho)
    if not -1.0 < rho < 1.0:
        return -np.inf
    log_one_minus = float(np.log1p(-(rho**2)))
    if priors.correlation_prior == CorrelationPrior.atanh_normal:
        return float(
            stats.norm(loc=0.0, scale=priors.mean_sd).logpdf(np.arctanh(rho))
            - log_one_minus
        )
    if priors.correlation_prior == CorrelationPrior.uniform:
        return -LOG_2
    return (priors.lkj_shape - 1.0) * log_one_minus + lkj_log_normalizer(
        priors.lkj_shape
    )


def normal_log_density(x: jnp.ndarray, scale: float = 1.0) -> jnp.ndarray:
    """
    Elementwise Normal(0, scale) log-density, traceable
    """
    return -0.5 * jnp.square(x / scale) - jnp.log(scale) - HALF_LOG_2PI


def scale_log_prior_unconstrained(u: jnp.ndarray, priors: PriorSpec) -> jnp.ndarray:
    """
    Elementwise log prior plus log-Jacobian of a scale in unconstrained form
    """
    if priors.scale_prior == ScalePrior.uniform:
        # -log(b) from the density cancels +log(b) from the Jacobian
        return jax.nn.log_sigmoid(u) + jax.nn.log_sigmoid(-u)
    scale = priors.half_cauchy_scale
    return (
        jnp.log(2.0 / (jnp.pi * scale)) - jnp.log1p(jnp.square(jnp.exp(u) / scale)) + u
    )


def correlation_log_prior_unconstrained(z: jnp.ndarray, priors: PriorSpec) -> jnp.ndarray:
    """
    Log prior plus log-Jacobian of rho = tanh(z)
    """
    if priors.correlation_prior == CorrelationPrior.atanh_normal:
        return normal_log_density(z, priors.mean_sd)
    log_one_minus = log_one_minus_tanh_squared(z)
    if priors.correlation_prior == CorrelationPrior.uniform:
        return log_one_minus - LOG_2
    return priors.lkj_shape * log_one_minus + lkj_log_normalizer(priors.lkj_shape)
