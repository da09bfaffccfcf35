"""
Arm-Based Hierarchical Model

Each observed arm (study i, test k) contributes two binomial counts with

    logit(pi_ijk) = mu_jk + sum_p theta_pjk X_pi + eta_ij + delta_ijk

where j = 1 counts true positives among the diseased and j = 2 true
negatives among the healthy. Study effects (eta_i1, eta_i2) are bivariate
normal with covariance built from sigma and rho; arm errors delta_ijk are
independent Normal(0, tau_jk^2). Study and arm effects are sampled
non-centered, and arm errors of unobserved arms are integrated out.
"""

import logging
from typing import NamedTuple, Optional

import jax.numpy as jnp
import numpy as np
from scipy import stats

from dtanma.config import CovarianceStructure
from dtanma.containers import CovarianceSpec, NetworkDataset, PriorSpec
from dtanma.exceptions import ConfigurationError, DomainError
from dtanma.models.base_model import BaseModel
from dtanma.models.covariance import assemble_covariance
from dtanma.models.priors import (
    correlation_log_prior,
    correlation_log_prior_unconstrained,
    mean_log_prior,
    normal_log_density,
    scale_log_prior,
    scale_log_prior_unconstrained,
)
from dtanma.models.transforms import (
    TransformDirection,
    constrain_correlation,
    constrain_scale,
    unconstrain_correlation,
    unconstrain_scale,
)

logger = logging.getLogger(__name__)

OUTCOME_LABELS = (1, 2)


class ABParams(NamedTuple):
    """
    Constrained Arm-Based Parameters

    Shapes: mu (2, K); theta (P, 2, K); eta (I, 2); delta (I, 2, K) with NaN
    for unobserved arms; sigma (2,); rho scalar; tau (2, K), with equal
    columns under compound symmetry.
    """

    mu: np.ndarray
    theta: np.ndarray
    eta: np.ndarray
    delta: np.ndarray
    sigma: np.ndarray
    rho: float
    tau: np.ndarray


class UnconstrainedVector(NamedTuple):
    """
    Flat unconstrained coordinates and the log-Jacobian of the transform
    """

    values: np.ndarray
    log_jacobian: float


class _Constrained(NamedTuple):
    mu: jnp.ndarray
    theta: jnp.ndarray
    sigma: jnp.ndarray
    rho: jnp.ndarray
    tau: jnp.ndarray
    tau_arm: jnp.ndarray
    eta: jnp.ndarray
    delta: jnp.ndarray
    log_jacobian: jnp.ndarray


def log_likelihood_ab(params: ABParams, ds: NetworkDataset) -> float:
    """
    Binomial log-likelihood over observed arms

    Parameters
    ----------
    params: ABParams
    ds: NetworkDataset

    Returns
    -------
    float
        Includes the binomial coefficients; 0 for a dataset without arms
    """
    if ds.n_arms == 0:
        return 0.0
    arrays = ds.arrays
    mu = np.asarray(params.mu, dtype=float)
    theta = np.asarray(params.theta, dtype=float).reshape(-1, 2, mu.shape[1])
    covariate_term = np.einsum(
        "ap,pja->aj",
        arrays.covariates[arrays.arm_study],
        theta[:, :, arrays.arm_test],
    )
    delta = np.asarray(params.delta, dtype=float)[arrays.arm_study, :, arrays.arm_test]
    logits = (
        mu[:, arrays.arm_test].T
        + covariate_term
        + np.asarray(params.eta, dtype=float)[arrays.arm_study]
        + delta
    )
    probabilities = 1.0 / (1.0 + np.exp(-logits))
    return float(
        np.sum(
            stats.binom.logpmf(
                arrays.positives.astype(int), arrays.totals.astype(int), probabilities
            )
        )
    )


def log_prior_ab(
    params: ABParams,
    priors: Optional[PriorSpec] = None,
    cov: Optional[CovarianceSpec] = None,
) -> float:
    """
    Log prior of constrained arm-based parameters

    Sums the bivariate normal density of each study effect, the normal
    density of each observed arm error (non-NaN entries of delta), and the
    hyperpriors. Parameters outside the prior support give -inf.

    Parameters
    ----------
    params: ABParams
    priors: Optional[PriorSpec]
    cov: Optional[CovarianceSpec]

    Returns
    -------
    float
    """
    priors = priors if priors is not None else PriorSpec()
    cov = cov if cov is not None else CovarianceSpec()
    sigma = np.asarray(params.sigma, dtype=float)
    tau = np.asarray(params.tau, dtype=float)
    rho = float(params.rho)
    if np.any(sigma <= 0) or np.any(tau <= 0) or not -1.0 < rho < 1.0:
        return -np.inf
    total = mean_log_prior(params.mu, priors) + mean_log_prior(params.theta, priors)
    total += scale_log_prior(sigma, priors)
    total += correlation_log_prior(rho, priors)
    if cov.fixed_tau is None:
        hyper_tau = tau[:, 0] if cov.compound_symmetry else tau
        total += scale_log_prior(hyper_tau, priors)
    if not np.isfinite(total):
        return -np.inf
    eta = np.asarray(params.eta, dtype=float).reshape(-1, 2)
    if eta.shape[0] > 0:
        total += float(
            np.sum(
                stats.multivariate_normal(
                    mean=np.zeros(2), cov=assemble_covariance(sigma, rho)
                ).logpdf(eta)
            )
        )
    delta = np.asarray(params.delta, dtype=float)
    observed = ~np.isnan(delta)
    scales = np.broadcast_to(tau[None, :, :], delta.shape)
    total += float(np.sum(stats.norm(loc=0.0, scale=scales[observed]).logpdf(delta[observed])))
    return float(total)


class ArmBasedModel(BaseModel):
    """
    Arm-Based Network Meta-Analysis of Sensitivity and Specificity
    """

    name = "ab"

    def __init__(
        self,
        ds: NetworkDataset,
        priors: Optional[PriorSpec] = None,
        covariance: Optional[CovarianceSpec] = None,
    ) -> None:
        """
        Parameters
        ----------
        ds: NetworkDataset
        priors: Optional[PriorSpec]
            Defaults to normal means, Uniform(0, 5) scales and a normal prior
            on atanh(rho)
        covariance: Optional[CovarianceSpec]
            Defaults to compound symmetry
        """
        self.covariance = covariance if covariance is not None else CovarianceSpec()
        if (
            self.covariance.structure == CovarianceStructure.unstructured
            and ds.n_tests < 2
        ):
            raise ConfigurationError(
                "an unstructured covariance needs at least two tests"
            )
        super().__init__(ds=ds, priors=priors)

    def _build(self) -> None:
        ds = self.dataset
        tests = ds.test_labels
        n_tests, n_covariates = ds.n_tests, ds.n_covariates
        arm_names = [(arm.study_id, arm.test_id) for arm in ds.arms]
        tau_shape = (2,) if self.covariance.compound_symmetry else (2, n_tests)
        tau_labels = [OUTCOME_LABELS] if len(tau_shape) == 1 else [OUTCOME_LABELS, tests]
        covariate_labels = [range(1, n_covariates + 1), OUTCOME_LABELS, tests]
        for layout in (self.layout, self.constrained_layout):
            layout.add("mu", (2, n_tests), [OUTCOME_LABELS, tests])
            if n_covariates > 0:
                layout.add("theta", (n_covariates, 2, n_tests), covariate_labels)
            layout.add("sigma", (2,), [OUTCOME_LABELS])
            layout.add("rho", ())
            # a fixed tau is reported with the draws but not sampled
            if layout is self.constrained_layout or self.covariance.fixed_tau is None:
                layout.add("tau", tau_shape, tau_labels)
        self.layout.add("eta_raw", (ds.n_studies, 2), [ds.study_ids, OUTCOME_LABELS])
        self.layout.add(
            "delta_raw",
            (ds.n_arms, 2),
            names=[
                f"delta_raw[{study},{test},{j}]"
                for study, test in arm_names
                for j in OUTCOME_LABELS
            ],
        )
        self.constrained_layout.add(
            "eta", (ds.n_studies, 2), [ds.study_ids, OUTCOME_LABELS]
        )
        self.constrained_layout.add(
            "delta",
            (ds.n_arms, 2),
            names=[
                f"delta[{study},{test},{j}]"
                for study, test in arm_names
                for j in OUTCOME_LABELS
            ],
        )
        self.covariates = jnp.asarray(ds.arrays.covariates)
        self._tau_shape = tau_shape

    def _constrain(self, u: jnp.ndarray) -> _Constrained:
        layout = self.layout
        n_tests = self.dataset.n_tests
        mu = layout.unpack(u, "mu")
        theta = (
            layout.unpack(u, "theta")
            if "theta" in layout
            else jnp.zeros((0, 2, n_tests))
        )
        sigma, jacobian_sigma = constrain_scale(layout.unpack(u, "sigma"), self.priors)
        rho, jacobian_rho = constrain_correlation(layout.unpack(u, "rho"))
        if self.covariance.fixed_tau is None:
            tau, jacobian_tau = constrain_scale(layout.unpack(u, "tau"), self.priors)
            jacobian_tau = jnp.sum(jacobian_tau)
        else:
            tau = jnp.full(self._tau_shape, self.covariance.fixed_tau)
            jacobian_tau = jnp.asarray(0.0)
        tau_full = jnp.broadcast_to(tau[:, None], (2, n_tests)) if tau.ndim == 1 else tau
        tau_arm = tau_full[:, self.arm_test].T
        z_eta = layout.unpack(u, "eta_raw")
        root = jnp.sqrt(1.0 - jnp.square(rho))
        eta = jnp.stack(
            [sigma[0] * z_eta[:, 0], sigma[1] * (rho * z_eta[:, 0] + root * z_eta[:, 1])],
            axis=1,
        )
        delta = tau_arm * layout.unpack(u, "delta_raw")
        n_studies = self.dataset.n_studies
        log_jacobian = (
            jnp.sum(jacobian_sigma)
            + jacobian_rho
            + jacobian_tau
            + n_studies * (jnp.sum(jnp.log(sigma)) + 0.5 * jacobian_rho)
            + jnp.sum(jnp.log(tau_arm))
        )
        return _Constrained(
            mu=mu,
            theta=theta,
            sigma=sigma,
            rho=rho,
            tau=tau,
            tau_arm=tau_arm,
            eta=eta,
            delta=delta,
            log_jacobian=log_jacobian,
        )

    def linear_predictor(self, c: _Constrained) -> jnp.ndarray:
        """
        Logits of the observed arms, shape (arms, 2)
        """
        covariate_term = jnp.einsum(
            "ap,pja->aj",
            self.covariates[self.arm_study],
            c.theta[:, :, self.arm_test],
        )
        return c.mu[:, self.arm_test].T + covariate_term + c.eta[self.arm_study] + c.delta

    def log_density(self, u: jnp.ndarray) -> jnp.ndarray:
        layout = self.layout
        c = self._constrain(u)
        log_likelihood = self.binomial_log_likelihood(self.linear_predictor(c))
        log_prior = jnp.sum(normal_log_density(c.mu, self.priors.mean_sd))
        log_prior += jnp.sum(normal_log_density(c.theta, self.priors.mean_sd))
        log_prior += jnp.sum(
            scale_log_prior_unconstrained(layout.unpack(u, "sigma"), self.priors)
        )
        log_prior += correlation_log_prior_unconstrained(
            layout.unpack(u, "rho"), self.priors
        )
        if self.covariance.fixed_tau is None:
            log_prior += jnp.sum(
                scale_log_prior_unconstrained(layout.unpack(u, "tau"), self.priors)
            )
        log_prior += jnp.sum(normal_log_density(layout.unpack(u, "eta_raw")))
        log_prior += jnp.sum(normal_log_density(layout.unpack(u, "delta_raw")))
        return log_likelihood + log_prior

    def log_jacobian_traced(self, u: jnp.ndarray) -> jnp.ndarray:
        return self._constrain(u).log_jacobian

    def constrained_vector(self, u: jnp.ndarray) -> jnp.ndarray:
        c = self._constrain(u)
        return jnp.concatenate(
            [
                c.mu.ravel(),
                c.theta.ravel(),
                c.sigma,
                jnp.reshape(c.rho, (1,)),
                c.tau.ravel(),
                c.eta.ravel(),
                c.delta.ravel(),
            ]
        )

    def to_constrained(self, u: np.ndarray) -> ABParams:
        """
        Back-transform an unconstrained vector

        Parameters
        ----------
        u: np.ndarray

        Returns
        -------
        ABParams
        """
        u = np.asarray(u, dtype=float)
        if u.shape != (self.dim,) or not np.all(np.isfinite(u)):
            raise DomainError(f"expected a finite vector of length {self.dim}")
        c = self._constrain(jnp.asarray(u))
        ds = self.dataset
        arrays = ds.arrays
        tau = np.asarray(c.tau)
        tau_full = np.broadcast_to(tau[:, None], (2, ds.n_tests)).copy() if tau.ndim == 1 else tau
        delta = np.full((ds.n_studies, 2, ds.n_tests), np.nan)
        delta[arrays.arm_study, :, arrays.arm_test] = np.asarray(c.delta)
        return ABParams(
            mu=np.asarray(c.mu),
            theta=np.asarray(c.theta),
            eta=np.asarray(c.eta),
            delta=delta,
            sigma=np.asarray(c.sigma),
            rho=float(c.rho),
            tau=tau_full,
        )

    def to_unconstrained(self, params: ABParams) -> UnconstrainedVector:
        """
        Transform constrained parameters to the sampler's coordinates

        Parameters
        ----------
        params: ABParams

        Returns
        -------
        UnconstrainedVector
        """
        ds = self.dataset
        arrays = ds.arrays
        mu = np.asarray(params.mu, dtype=float)
        theta = np.asarray(params.theta, dtype=float).reshape(-1, 2, ds.n_tests)
        sigma = np.asarray(params.sigma, dtype=float)
        tau = np.asarray(params.tau, dtype=float)
        eta = np.asarray(params.eta, dtype=float)
        delta = np.asarray(params.delta, dtype=float)
        expected = {
            "mu": (mu.shape, (2, ds.n_tests)),
            "theta": (theta.shape, (ds.n_covariates, 2, ds.n_tests)),
            "sigma": (sigma.shape, (2,)),
            "tau": (tau.shape, (2, ds.n_tests)),
            "eta": (eta.shape, (ds.n_studies, 2)),
            "delta": (delta.shape, (ds.n_studies, 2, ds.n_tests)),
        }
        for name, (shape, wanted) in expected.items():
            if shape != wanted:
                raise DomainError(f"{name} has shape {shape}, expected {wanted}")
        u = np.zeros(self.dim)
        layout = self.layout
        u[layout.blocks["mu"].start : layout.blocks["mu"].stop] = mu.ravel()
        if "theta" in layout:
            u[layout.blocks["theta"].start : layout.blocks["theta"].stop] = theta.ravel()
        u[layout.blocks["sigma"].start : layout.blocks["sigma"].stop] = unconstrain_scale(
            sigma, self.priors
        )
        u[layout.blocks["rho"].start] = unconstrain_correlation(params.rho)
        if self.covariance.fixed_tau is None:
            if np.any(tau <= 0) or not np.all(np.isfinite(tau)):
                raise DomainError(f"tau must be positive, got {tau}")
            if self.covariance.compound_symmetry:
                if not np.allclose(tau, tau[:, :1]):
                    raise DomainError("compound symmetry requires one tau per outcome")
                hyper_tau = tau[:, 0]
            else:
                hyper_tau = tau
            block = layout.blocks["tau"]
            u[block.start : block.stop] = unconstrain_scale(hyper_tau, self.priors).ravel()
            tau_used = tau
        else:
            tau_used = np.full((2, ds.n_tests), self.covariance.fixed_tau)
        rho = float(params.rho)
        z_first = eta[:, 0] / sigma[0]
        z_second = (eta[:, 1] / sigma[1] - rho * z_first) / np.sqrt(1.0 - rho**2)
        block = layout.blocks["eta_raw"]
        u[block.start : block.stop] = np.stack([z_first, z_second], axis=1).ravel()
        observed_delta = delta[arrays.arm_study, :, arrays.arm_test]
        if not np.all(np.isfinite(observed_delta)):
            raise DomainError("arm errors of observed arms must be finite")
        tau_arm = tau_used[:, arrays.arm_test].T
        block = layout.blocks["delta_raw"]
        u[block.start : block.stop] = (observed_delta / tau_arm).ravel()
        return UnconstrainedVector(values=u, log_jacobian=self.log_jacobian(u))

    def transform_parameters(self, value, direction: TransformDirection):
        """
        Transform in either direction

        Parameters
        ----------
        value: Union[ABParams, UnconstrainedVector, np.ndarray]
        direction: TransformDirection

        Returns
        -------
        Union[UnconstrainedVector, ABParams]
        """
        if TransformDirection(direction) == TransformDirection.to_unconstrained:
            return self.to_unconstrained(value)
        values = value.values if isinstance(value, UnconstrainedVector) else value
        return self.to_constrained(values)

    def describe(self):
        description = super().describe()
        description["covariance"] = self.covariance.dict()
        return description
