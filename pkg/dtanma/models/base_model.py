"""
Base Class for Differentiable Log Posteriors
"""

import logging
from abc import ABC, abstractmethod
from typing import Callable, Dict, Optional, Tuple

import jax
import jax.numpy as jnp
import numpy as np
from scipy import special

from dtanma.containers import NetworkDataset, PriorSpec
from dtanma.exceptions import DatasetValidationError, DomainError
from dtanma.models.layout import ParameterLayout

logger = logging.getLogger(__name__)


class BaseModel(ABC):
    """
    A log posterior over an unconstrained flat vector

    Subclasses fill `layout` (unconstrained coordinates) and
    `constrained_layout` (the constrained parameters plus generated
    quantities stored with every draw) in `_build`, and implement the
    traceable `log_density` and `constrained_vector`. Evaluation is pure:
    the compiled functions close over read-only dataset arrays, so one
    model may serve several chains concurrently.
    """

    name: str = "base"

    def __init__(self, ds: NetworkDataset, priors: Optional[PriorSpec] = None) -> None:
        if ds.n_arms == 0:
            raise DatasetValidationError("the dataset has no arms")
        self.dataset = ds
        self.priors = priors if priors is not None else PriorSpec()
        arrays = ds.arrays
        self.arm_study = jnp.asarray(arrays.arm_study)
        self.arm_test = jnp.asarray(arrays.arm_test)
        self.positives = jnp.asarray(arrays.positives)
        self.totals = jnp.asarray(arrays.totals)
        self.log_binomial_constant = float(
            np.sum(
                special.gammaln(arrays.totals + 1)
                - special.gammaln(arrays.positives + 1)
                - special.gammaln(arrays.totals - arrays.positives + 1)
            )
        )
        self.layout = ParameterLayout()
        self.constrained_layout = ParameterLayout()
        self._build()
        self._value_and_grad: Callable = jax.jit(jax.value_and_grad(self.log_density))
        self._constrain_batch: Callable = jax.jit(jax.vmap(self.constrained_vector))
        self._log_jacobian: Callable = jax.jit(self.log_jacobian_traced)

    @abstractmethod
    def _build(self) -> None:
        """
        Populate `layout` and `constrained_layout`
        """

    @abstractmethod
    def log_density(self, u: jnp.ndarray) -> jnp.ndarray:
        """
        Unnormalised log posterior in unconstrained coordinates (traceable)
        """

    @abstractmethod
    def constrained_vector(self, u: jnp.ndarray) -> jnp.ndarray:
        """
        Flat constrained parameters and generated quantities (traceable)
        """

    @abstractmethod
    def log_jacobian_traced(self, u: jnp.ndarray) -> jnp.ndarray:
        """
        Log-Jacobian of the constraining transform (traceable)
        """

    @property
    def dim(self) -> int:
        return self.layout.size

    @property
    def parameter_names(self) -> list:
        return list(self.constrained_layout.names)

    def binomial_log_likelihood(self, logits: jnp.ndarray) -> jnp.ndarray:
        """
        Sum of binomial log-pmfs over observed arms at logit-scale probabilities

        Parameters
        ----------
        logits: jnp.ndarray
            Shape (arms, 2): diseased then healthy linear predictors
        """
        return (
            jnp.sum(
                self.positives * jax.nn.log_sigmoid(logits)
                + (self.totals - self.positives) * jax.nn.log_sigmoid(-logits)
            )
            + self.log_binomial_constant
        )

    def log_density_and_grad(self, u: np.ndarray) -> Tuple[float, np.ndarray]:
        """
        Value and exact gradient without argument checks, for the sampler
        """
        value, gradient = self._value_and_grad(jnp.asarray(u, dtype=jnp.float64))
        return float(value), np.asarray(gradient)

    def log_posterior_and_grad(self, u: np.ndarray) -> Tuple[float, np.ndarray]:
        """
        Log posterior (with log-Jacobian) and its gradient by autodiff

        Parameters
        ----------
        u: np.ndarray
            Unconstrained vector of length `dim`

        Returns
        -------
        Tuple[float, np.ndarray]
        """
        u = np.asarray(u, dtype=float)
        if u.shape != (self.dim,):
            raise DomainError(f"expected a vector of length {self.dim}, got {u.shape}")
        if not np.all(np.isfinite(u)):
            raise DomainError("unconstrained vector has non-finite entries")
        return self.log_density_and_grad(u)

    def log_jacobian(self, u: np.ndarray) -> float:
        return float(self._log_jacobian(jnp.asarray(u, dtype=jnp.float64)))

    def constrain_draws(self, draws: np.ndarray) -> np.ndarray:
        """
        Constrained views of a batch of unconstrained draws

        Parameters
        ----------
        draws: np.ndarray
            Shape (n, dim)

        Returns
        -------
        np.ndarray
            Shape (n, len(constrained_layout.names))
        """
        draws = np.asarray(draws, dtype=float).reshape(-1, self.dim)
        if draws.shape[0] == 0:
            return np.zeros((0, self.constrained_layout.size))
        return np.asarray(self._constrain_batch(jnp.asarray(draws)))

    def generated_quantities(self, u: np.ndarray) -> Dict[str, np.ndarray]:
        """
        Constrained parameters and derived quantities at one unconstrained point

        Parameters
        ----------
        u: np.ndarray
            Unconstrained vector of length `dim`

        Returns
        -------
        Dict[str, np.ndarray]
            One array per block of `constrained_layout`
        """
        values = self.constrain_draws(np.asarray(u, dtype=float)[None, :])[0]
        return {
            name: self.constrained_layout.unpack(values, name)
            for name in self.constrained_layout.blocks
        }

    def initial_point_ok(self, u: np.ndarray) -> bool:
        """
        Whether the density and gradient are finite at `u`
        """
        value, gradient = self.log_density_and_grad(u)
        return bool(np.isfinite(value) and np.all(np.isfinite(gradient)))

    def describe(self) -> Dict[str, object]:
        """
        Configuration echo for run reports
        """
        return {
            "model": self.name,
            "priors": self.priors.dict(),
            "n_parameters": self.dim,
        }

    def __repr__(self) -> str:
        """
        String Representation
        """
        return f"<{self.__class__.__name__}: {self.dataset!r}, dim={self.dim}>"
