"""
Contrast-Based Comparator Model

Each study i has baseline logits mu_ij ~ Normal(m_j, s_j^2) and contrasts
delta_ijk ~ Normal(nu_jk, sd_jk^2) of every other test against a common
baseline test. Per study the test logits follow a sum-to-zero combination

    theta_ijk = mu_ij + delta_ijk - (1/K) * sum_k' delta_ijk'

with the baseline's own contrast fixed at zero. Only studies that observe
the baseline and at least one other test are admitted.
"""

import logging
from typing import List, NamedTuple, Optional

import jax.numpy as jnp
import numpy as np
from scipy import special, stats

from dtanma.containers import NetworkDataset, PriorSpec
from dtanma.dataset.selection import comparative_studies
from dtanma.exceptions import DatasetValidationError, DomainError
from dtanma.models.ab_model import OUTCOME_LABELS
from dtanma.models.base_model import BaseModel
from dtanma.models.priors import (
    mean_log_prior,
    normal_log_density,
    scale_log_prior,
    scale_log_prior_unconstrained,
)
from dtanma.models.transforms import constrain_scale
from dtanma.utils.logging_utils import describe_labels

logger = logging.getLogger(__name__)


class CBParams(NamedTuple):
    """
    Constrained Contrast-Based Parameters

    Contrast axes follow the non-baseline tests in label order.
    Shapes: mu_study (I, 2); m (2,); s (2,); delta_contrast (I, 2, K-1);
    nu_delta (2, K-1); contrast_sd (2, K-1).
    """

    mu_study: np.ndarray
    m: np.ndarray
    s: np.ndarray
    delta_contrast: np.ndarray
    nu_delta: np.ndarray
    contrast_sd: np.ndarray


def contrast_weights(n_tests: int, baseline_index: int) -> np.ndarray:
    """
    Weights mapping K-1 contrasts to K test logits

    Row k holds 1{k is the contrast's test} - 1/K; the baseline row is
    -1/K throughout.

    Parameters
    ----------
    n_tests: int
    baseline_index: int
        Position of the baseline among the K tests

    Returns
    -------
    np.ndarray
        Shape (K, K-1)
    """
    contrast_tests = [k for k in range(n_tests) if k != baseline_index]
    weights = np.full((n_tests, n_tests - 1), -1.0 / n_tests)
    for column, k in enumerate(contrast_tests):
        weights[k, column] += 1.0
    return weights


def recover_accuracy_cb(
    m: np.ndarray, nu_delta: np.ndarray, baseline_index: Optional[int] = None
) -> np.ndarray:
    """
    Conditional accuracies of a study with zero random effects

    The mean log odds ratios are combined on the logit scale with the
    sum-to-zero weights before the inverse logit.

    Parameters
    ----------
    m: np.ndarray
        Shape (2,) mean baseline logits
    nu_delta: np.ndarray
        Shape (2, K-1) mean contrasts
    baseline_index: Optional[int]
        Position of the baseline among the K tests (default last)

    Returns
    -------
    np.ndarray
        Shape (2, K) in (0, 1)
    """
    m = np.asarray(m, dtype=float)
    nu_delta = np.asarray(nu_delta, dtype=float).reshape(2, -1)
    n_tests = nu_delta.shape[1] + 1
    baseline_index = n_tests - 1 if baseline_index is None else baseline_index
    weights = contrast_weights(n_tests, baseline_index)
    return special.expit(m[:, None] + nu_delta @ weights.T)


def check_comparative_design(ds: NetworkDataset, baseline_test: int) -> None:
    """
    Every study must observe the baseline and at least one other test

    Raises
    ------
    DatasetValidationError
        Listing the offending studies
    """
    if baseline_test not in ds.test_labels:
        raise DatasetValidationError(
            f"baseline test {baseline_test} is not observed in any study"
        )
    comparative = set(comparative_studies(ds, baseline_test))
    offending: List[str] = [
        study_id for study_id in ds.study_ids if study_id not in comparative
    ]
    if offending:
        raise DatasetValidationError(
            f"studies must compare test {baseline_test} with another test; "
            f"{len(offending)} do not: {describe_labels(offending)}"
        )


def log_posterior_cb(
    params: CBParams,
    ds: NetworkDataset,
    baseline_test: int,
    priors: Optional[PriorSpec] = None,
) -> float:
    """
    Log posterior of constrained contrast-based parameters

    Parameters
    ----------
    params: CBParams
    ds: NetworkDataset
    baseline_test: int
        Original label of the common comparator
    priors: Optional[PriorSpec]

    Returns
    -------
    float
    """
    priors = priors if priors is not None else PriorSpec()
    check_comparative_design(ds, baseline_test)
    arrays = ds.arrays
    s = np.asarray(params.s, dtype=float)
    contrast_sd = np.asarray(params.contrast_sd, dtype=float)
    if np.any(s <= 0) or np.any(contrast_sd <= 0):
        return -np.inf
    baseline_index = ds.test_index[baseline_test]
    weights = contrast_weights(ds.n_tests, baseline_index)
    mu_study = np.asarray(params.mu_study, dtype=float)
    delta = np.asarray(params.delta_contrast, dtype=float)
    theta = mu_study[:, :, None] + np.einsum("ijc,kc->ijk", delta, weights)
    logits = theta[arrays.arm_study, :, arrays.arm_test]
    log_likelihood = np.sum(
        stats.binom.logpmf(
            arrays.positives.astype(int),
            arrays.totals.astype(int),
            special.expit(logits),
        )
    )
    m = np.asarray(params.m, dtype=float)
    nu = np.asarray(params.nu_delta, dtype=float)
    total = (
        log_likelihood
        + np.sum(stats.norm(loc=m[None, :], scale=s[None, :]).logpdf(mu_study))
        + np.sum(stats.norm(loc=nu[None], scale=contrast_sd[None]).logpdf(delta))
        + mean_log_prior(m, priors)
        + mean_log_prior(nu, priors)
        + scale_log_prior(s, priors)
        + scale_log_prior(contrast_sd, priors)
    )
    return float(total)


class ContrastBasedModel(BaseModel):
    """
    Contrast-Based Network Meta-Analysis Against a Common Baseline Test
    """

    name = "cb"

    def __init__(
        self,
        ds: NetworkDataset,
        baseline_test: int,
        priors: Optional[PriorSpec] = None,
    ) -> None:
        """
        Parameters
        ----------
        ds: NetworkDataset
        baseline_test: int
            Original label of the common comparator
        priors: Optional[PriorSpec]
            Scale priors apply to s and the contrast SDs; the correlation
            prior is unused (diagonal contrast covariance)
        """
        check_comparative_design(ds, baseline_test)
        self.baseline_test = int(baseline_test)
        self.baseline_index = ds.test_index[self.baseline_test]
        self.contrast_labels = [
            label for label in ds.test_labels if label != self.baseline_test
        ]
        super().__init__(ds=ds, priors=priors)

    def _build(self) -> None:
        ds = self.dataset
        n_contrasts = len(self.contrast_labels)
        contrast_axes = [OUTCOME_LABELS, self.contrast_labels]
        for layout in (self.layout, self.constrained_layout):
            layout.add("m", (2,), [OUTCOME_LABELS])
            layout.add("s", (2,), [OUTCOME_LABELS])
            layout.add("nu", (2, n_contrasts), contrast_axes)
            layout.add("contrast_sd", (2, n_contrasts), contrast_axes)
        self.layout.add("mu_raw", (ds.n_studies, 2), [ds.study_ids, OUTCOME_LABELS])
        self.layout.add(
            "delta_raw",
            (ds.n_studies, 2, n_contrasts),
            [ds.study_ids, OUTCOME_LABELS, self.contrast_labels],
        )
        self.constrained_layout.add(
            "mu_study", (ds.n_studies, 2), [ds.study_ids, OUTCOME_LABELS]
        )
        self.constrained_layout.add(
            "delta",
            (ds.n_studies, 2, n_contrasts),
            [ds.study_ids, OUTCOME_LABELS, self.contrast_labels],
        )
        self.constrained_layout.add(
            "accuracy", (2, ds.n_tests), [OUTCOME_LABELS, ds.test_labels]
        )
        self.weights = jnp.asarray(contrast_weights(ds.n_tests, self.baseline_index))

    def _constrain(self, u: jnp.ndarray):
        layout = self.layout
        m = layout.unpack(u, "m")
        s, jacobian_s = constrain_scale(layout.unpack(u, "s"), self.priors)
        nu = layout.unpack(u, "nu")
        contrast_sd, jacobian_sd = constrain_scale(
            layout.unpack(u, "contrast_sd"), self.priors
        )
        mu_study = m[None, :] + s[None, :] * layout.unpack(u, "mu_raw")
        delta = nu[None] + contrast_sd[None] * layout.unpack(u, "delta_raw")
        n_studies = self.dataset.n_studies
        log_jacobian = (
            jnp.sum(jacobian_s)
            + jnp.sum(jacobian_sd)
            + n_studies * (jnp.sum(jnp.log(s)) + jnp.sum(jnp.log(contrast_sd)))
        )
        return m, s, nu, contrast_sd, mu_study, delta, log_jacobian

    def study_logits(self, mu_study: jnp.ndarray, delta: jnp.ndarray) -> jnp.ndarray:
        """
        Per-study test logits, shape (I, 2, K)
        """
        return mu_study[:, :, None] + jnp.einsum("ijc,kc->ijk", delta, self.weights)

    def log_density(self, u: jnp.ndarray) -> jnp.ndarray:
        layout = self.layout
        m, _, nu, _, mu_study, delta, _ = self._constrain(u)
        logits = self.study_logits(mu_study, delta)[self.arm_study, :, self.arm_test]
        log_prior = (
            jnp.sum(normal_log_density(m, self.priors.mean_sd))
            + jnp.sum(normal_log_density(nu, self.priors.mean_sd))
            + jnp.sum(scale_log_prior_unconstrained(layout.unpack(u, "s"), self.priors))
            + jnp.sum(
                scale_log_prior_unconstrained(
                    layout.unpack(u, "contrast_sd"), self.priors
                )
            )
            + jnp.sum(normal_log_density(layout.unpack(u, "mu_raw")))
            + jnp.sum(normal_log_density(layout.unpack(u, "delta_raw")))
        )
        return self.binomial_log_likelihood(logits) + log_prior

    def log_jacobian_traced(self, u: jnp.ndarray) -> jnp.ndarray:
        return self._constrain(u)[-1]

    def constrained_vector(self, u: jnp.ndarray) -> jnp.ndarray:
        m, s, nu, contrast_sd, mu_study, delta, _ = self._constrain(u)
        logits = m[:, None] + nu @ self.weights.T
        accuracy = 1.0 / (1.0 + jnp.exp(-logits))
        return jnp.concatenate(
            [
                m,
                s,
                nu.ravel(),
                contrast_sd.ravel(),
                mu_study.ravel(),
                delta.ravel(),
                accuracy.ravel(),
            ]
        )

    def to_constrained(self, u: np.ndarray) -> CBParams:
        """
        Back-transform an unconstrained vector
        """
        u = np.asarray(u, dtype=float)
        if u.shape != (self.dim,) or not np.all(np.isfinite(u)):
            raise DomainError(f"expected a finite vector of length {self.dim}")
        m, s, nu, contrast_sd, mu_study, delta, _ = self._constrain(jnp.asarray(u))
        return CBParams(
            mu_study=np.asarray(mu_study),
            m=np.asarray(m),
            s=np.asarray(s),
            delta_contrast=np.asarray(delta),
            nu_delta=np.asarray(nu),
            contrast_sd=np.asarray(contrast_sd),
        )

    def describe(self):
        description = super().describe()
        description["baseline_test"] = self.baseline_test
        return description
