"""
Long-Running Recovery Checks on Simulated Networks

Run with `task test:slow` (`pytest -m slow`).
"""

import logging
from typing import Dict, Tuple

import jax
import jax.numpy as jnp
import numpy as np
import pytest
from scipy import special

from dtanma.containers import CovarianceSpec, NetworkDataset, SamplerConfig
from dtanma.models import ArmBasedModel, ContrastBasedModel, ParameterLayout
from dtanma.posterior import marginal_accuracy, variance_partition
from dtanma.sampler import Draws, diagnostics, effective_sample_size, run_chains, sample_model
from dtanma.simulate import TruthSpec, impose_mar, simulate_network

logger = logging.getLogger(__name__)

pytestmark = pytest.mark.slow

RECOVERY_TRUTH = TruthSpec(
    n_studies=40,
    n_tests=4,
    mu=[[1.5, 1.0, 0.5, 2.0], [0.5, 1.0, 1.5, 0.0]],
    sigma=(0.7, 0.6),
    rho=-0.6,
    tau=(0.3, 0.3),
    n_diseased=200,
    n_healthy=200,
    seed=2024,
)
FULL_RUN = SamplerConfig(n_chains=3, n_warmup=1000, n_samples=1000, seed=31)
MEDIUM_RUN = SamplerConfig(n_chains=3, n_warmup=600, n_samples=600, seed=37)
# tolerance in combined MCSEs
MCSE_MULTIPLIER = 2.0


def _interval(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    return np.percentile(values, 2.5, axis=0), np.percentile(values, 97.5, axis=0)


def _mean_and_mcse(values: np.ndarray) -> Tuple[float, float]:
    """
    Posterior mean and its Monte Carlo error from (chain, draw) values
    """
    n_eff = effective_sample_size(values)
    return float(np.mean(values)), float(np.std(values, ddof=1) / np.sqrt(n_eff))


@pytest.fixture(scope="module")
def recovery_network() -> NetworkDataset:
    ds, _ = simulate_network(RECOVERY_TRUTH)
    return ds


@pytest.fixture(scope="module")
def recovery_fit(recovery_network: NetworkDataset) -> Draws:
    return sample_model(ArmBasedModel(recovery_network), FULL_RUN)


def test_parameter_recovery(recovery_fit: Draws) -> None:
    """
    Known hyperparameters are covered by their 95% credible intervals
    """
    hyperparameters = [
        name for name in recovery_fit.names if not name.startswith(("eta", "delta"))
    ]
    result = diagnostics(recovery_fit, names=hyperparameters)
    assert result.max_rhat <= 1.05
    assert recovery_fit.n_divergent < 0.01 * recovery_fit.n_chains * recovery_fit.n_draws
    mu_low, mu_high = _interval(recovery_fit.pooled("mu"))
    truth = RECOVERY_TRUTH.mu_array
    assert int(np.sum((mu_low <= truth) & (truth <= mu_high))) >= 10
    sigma_low, sigma_high = _interval(recovery_fit.pooled("sigma"))
    assert np.all(sigma_low <= np.asarray(RECOVERY_TRUTH.sigma))
    assert np.all(np.asarray(RECOVERY_TRUTH.sigma) <= sigma_high)
    rho_low, rho_high = _interval(recovery_fit.pooled("rho"))
    assert rho_low <= RECOVERY_TRUTH.rho <= rho_high


def test_mar_deletion_is_robust(recovery_network: NetworkDataset, recovery_fit: Draws) -> None:
    """
    Deleting 30% of arms at random moves marginal accuracies by under one SD
    """
    deletion = impose_mar(recovery_network, keep_prob=0.7, seed=41)
    assert deletion.dataset.n_arms < recovery_network.n_arms
    reduced = sample_model(ArmBasedModel(deletion.dataset), MEDIUM_RUN)
    full = marginal_accuracy(recovery_fit, mc_samples=200, seed=3)
    partial = marginal_accuracy(reduced, mc_samples=200, seed=3)
    shift = np.abs(partial.mean(axis=0) - full.mean(axis=0))
    assert np.all(shift < full.std(axis=0))


def test_variance_partition_recovered() -> None:
    """
    With sigma^2 = 3 tau^2 about three quarters of the variance is between studies
    """
    truth = TruthSpec(
        n_studies=40,
        n_tests=3,
        mu=[[1.0, 0.5, 1.5], [1.0, 1.5, 0.5]],
        sigma=(0.9, 0.9),
        rho=-0.3,
        tau=(0.9 / np.sqrt(3.0), 0.9 / np.sqrt(3.0)),
        n_diseased=150,
        n_healthy=150,
        seed=77,
    )
    ds, _ = simulate_network(truth)
    draws = sample_model(ArmBasedModel(ds), MEDIUM_RUN)
    report = variance_partition(draws)
    for outcome in ("sensitivity", "specificity"):
        share = report.lookup(f"between_study_percent_{outcome}").mean
        assert 60.0 <= share <= 90.0
    formatted = report.formatted()["rho"]
    assert formatted.count("[") == 1 and formatted.endswith("]")


def test_arm_and_contrast_models_agree() -> None:
    """
    Log odds ratios of test 2 against test 1 from arm-based marginal draws
    match the contrast-based nu on a complete two-test network
    """
    truth = TruthSpec(
        n_studies=30,
        n_tests=2,
        mu=[[1.2, 0.6], [0.8, 1.4]],
        sigma=(0.6, 0.6),
        rho=-0.4,
        tau=(0.2, 0.2),
        n_diseased=150,
        n_healthy=150,
        seed=99,
    )
    ds, _ = simulate_network(truth)
    ab = sample_model(ArmBasedModel(ds), FULL_RUN)
    cb = sample_model(ContrastBasedModel(ds, baseline_test=1), FULL_RUN)
    marginal = marginal_accuracy(ab, mc_samples=1000, seed=5)
    log_odds = special.logit(marginal)
    ab_contrast = (log_odds[:, :, 1] - log_odds[:, :, 0]).reshape(ab.n_chains, ab.n_draws, 2)
    cb_nu = cb.get("nu")
    for j in range(2):
        ab_mean, ab_mcse = _mean_and_mcse(ab_contrast[:, :, j])
        cb_mean, cb_mcse = _mean_and_mcse(cb_nu[:, :, j, 0])
        tolerance = MCSE_MULTIPLIER * np.hypot(ab_mcse, cb_mcse)
        logger.info("Outcome %d: arm-based %.4f, contrast-based %.4f", j + 1, ab_mean, cb_mean)
        assert abs(ab_mean - cb_mean) < tolerance


class BivariateRandomEffects:
    """
    Single-test bivariate random-effects meta-analysis, coded separately
    from the arm-based model, with the same default priors
    """

    def __init__(self, ds: NetworkDataset) -> None:
        arrays = ds.arrays
        self.n_studies = ds.n_studies
        self.study = jnp.asarray(arrays.arm_study)
        self.positives = jnp.asarray(arrays.positives)
        self.negatives = jnp.asarray(arrays.totals - arrays.positives)
        self.dim = 5 + 2 * ds.n_studies
        self.layout = ParameterLayout()
        self.layout.add("mu", (2,), [(1, 2)])
        self.layout.add("sigma", (2,), [(1, 2)])
        self.layout.add("rho", ())
        self._value_and_grad = jax.jit(jax.value_and_grad(self.log_density))
        self._constrain = jax.jit(jax.vmap(self.constrain))

    def constrain(self, q: jnp.ndarray) -> jnp.ndarray:
        sigma = 5.0 * jax.nn.sigmoid(q[2:4])
        return jnp.concatenate([q[:2], sigma, jnp.tanh(q[4:5])])

    def log_density(self, q: jnp.ndarray) -> jnp.ndarray:
        mu, s, z = q[:2], q[2:4], q[4]
        raw = q[5:].reshape(self.n_studies, 2)
        sigma = 5.0 * jax.nn.sigmoid(s)
        rho = jnp.tanh(z)
        eta = jnp.stack(
            [
                sigma[0] * raw[:, 0],
                sigma[1] * (rho * raw[:, 0] + jnp.sqrt(1.0 - rho**2) * raw[:, 1]),
            ],
            axis=1,
        )
        logits = mu + eta[self.study]
        log_likelihood = jnp.sum(
            self.positives * jax.nn.log_sigmoid(logits)
            + self.negatives * jax.nn.log_sigmoid(-logits)
        )
        log_prior = (
            -0.5 * jnp.sum(jnp.square(mu / 5.0))
            + jnp.sum(jax.nn.log_sigmoid(s) + jax.nn.log_sigmoid(-s))
            - 0.5 * jnp.square(z / 5.0)
            - 0.5 * jnp.sum(jnp.square(raw))
        )
        return log_likelihood + log_prior

    def density(self, q: np.ndarray) -> Tuple[float, np.ndarray]:
        value, gradient = self._value_and_grad(jnp.asarray(q))
        return float(value), np.asarray(gradient)

    def constrain_batch(self, q: np.ndarray) -> np.ndarray:
        return np.asarray(self._constrain(jnp.asarray(q)))


def test_bivariate_reduction() -> None:
    """
    One test and a vanishing within-study SD reproduce a bivariate meta-analysis
    """
    truth = TruthSpec(
        n_studies=25,
        n_tests=1,
        mu=[[1.3], [1.7]],
        sigma=(0.6, 0.8),
        rho=-0.5,
        tau=(0.0, 0.0),
        n_diseased=(40, 120),
        n_healthy=(60, 200),
        seed=5,
    )
    ds, _ = simulate_network(truth)
    ab = sample_model(
        ArmBasedModel(ds, covariance=CovarianceSpec(fixed_tau=1e-3)), MEDIUM_RUN
    )
    reference_model = BivariateRandomEffects(ds)
    reference = run_chains(
        reference_model.density,
        reference_model.dim,
        MEDIUM_RUN,
        constrain=reference_model.constrain_batch,
        layout=reference_model.layout,
    )
    pairs: Dict[str, str] = {
        "mu[1,1]": "mu[1]",
        "mu[2,1]": "mu[2]",
        "sigma[1]": "sigma[1]",
        "sigma[2]": "sigma[2]",
        "rho": "rho",
    }
    for ab_name, reference_name in pairs.items():
        ab_mean, ab_mcse = _mean_and_mcse(ab.column(ab_name))
        ref_mean, ref_mcse = _mean_and_mcse(reference.column(reference_name))
        assert abs(ab_mean - ref_mean) < MCSE_MULTIPLIER * np.hypot(ab_mcse, ref_mcse), ab_name
