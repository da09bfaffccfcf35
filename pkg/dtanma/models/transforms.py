"""
Constraining Transforms and Their Log-Jacobians

The `constrain_*` functions are traceable by jax and map unconstrained
reals to the constrained space, returning the log-Jacobian alongside.
The `unconstrain_*` functions are their numpy inverses and validate the
constrained input.
"""

import logging
from enum import Enum
from typing import Tuple

import jax
import jax.numpy as jnp
import numpy as np
from scipy import special

from dtanma.config import ScalePrior
from dtanma.containers import PriorSpec
from dtanma.exceptions import DomainError

logger = logging.getLogger(__name__)


class TransformDirection(str, Enum):
    """
    Direction of a parameter transform
    """

    to_unconstrained = "to_unconstrained"
    to_constrained = "to_constrained"


def constrain_scale(u: jnp.ndarray, priors: PriorSpec) -> Tuple[jnp.ndarray, jnp.ndarray]:
    """
    Map reals to standard deviations

    Uniform(0, b) scales use the scaled logit x = b * sigmoid(u); half-Cauchy
    scales use x = exp(u).

    Returns
    -------
    Tuple[jnp.ndarray, jnp.ndarray]
        Constrained values and elementwise log-Jacobians
    """
    if priors.scale_prior == ScalePrior.uniform:
        upper = priors.uniform_upper
        value = upper * jax.nn.sigmoid(u)
        log_jacobian = jnp.log(upper) + jax.nn.log_sigmoid(u) + jax.nn.log_sigmoid(-u)
        return value, log_jacobian
    return jnp.exp(u), u


def unconstrain_scale(x: np.ndarray, priors: PriorSpec) -> np.ndarray:
    """
    Inverse of `constrain_scale`
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise DomainError(f"standard deviations must be positive, got {x}")
    if priors.scale_prior == ScalePrior.uniform:
        if np.any(x >= priors.uniform_upper):
            raise DomainError(
                f"standard deviations must lie below {priors.uniform_upper}, got {x}"
            )
        return special.logit(x / priors.uniform_upper)
    return np.log(x)


def log_one_minus_tanh_squared(z: jnp.ndarray) -> jnp.ndarray:
    """
    log(1 - tanh(z)^2), stable for large |z|
    """
    return 2.0 * (jnp.log(2.0) - z - jax.nn.softplus(-2.0 * z))


def constrain_correlation(z: jnp.ndarray) -> Tuple[jnp.ndarray, jnp.ndarray]:
    """
    rho = tanh(z) with log-Jacobian log(1 - rho^2)
    """
    return jnp.tanh(z), log_one_minus_tanh_squared(z)


def unconstrain_correlation(rho: float) -> np.ndarray:
    """
    Inverse of `constrain_correlation`
    """
    rho = np.asarray(rho, dtype=float)
    if not np.all(np.isfinite(rho)) or np.any(np.abs(rho) >= 1):
        raise DomainError(f"correlation must lie in (-1, 1), got {rho}")
    return np.arctanh(rho)
