"""
Forward Simulation of Complete Networks from Arm-Based Truth
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np
import pandas as pd
from scipy import special

from dtanma.containers import NetworkDataset, StudyArm
from dtanma.simulate.truth import TruthSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LatentRecord:
    """
    The unobserved quantities behind a simulated network

    Shapes: eta (I, 2); delta (I, 2, K); pi (I, 2, K); covariates (I, P).
    """

    study_ids: List[str]
    test_labels: List[int]
    eta: np.ndarray
    delta: np.ndarray
    pi: np.ndarray
    covariates: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        """
        One row per (study, test)
        """
        records = []
        for i, study_id in enumerate(self.study_ids):
            for k, test_id in enumerate(self.test_labels):
                records.append(
                    {
                        "study_id": study_id,
                        "test_id": test_id,
                        "eta_1": self.eta[i, 0],
                        "eta_2": self.eta[i, 1],
                        "delta_1": self.delta[i, 0, k],
                        "delta_2": self.delta[i, 1, k],
                        "pi_1": self.pi[i, 0, k],
                        "pi_2": self.pi[i, 1, k],
                    }
                )
        return pd.DataFrame(records)


def _subject_counts(
    rule: Union[int, Tuple[int, int]], shape: Tuple[int, ...], rng: np.random.Generator
) -> np.ndarray:
    if isinstance(rule, tuple):
        low, high = rule
        return rng.integers(low, high + 1, size=shape)
    return np.full(shape, int(rule))


def simulate_network(truth: TruthSpec) -> Tuple[NetworkDataset, LatentRecord]:
    """
    Draw a complete network (every study reports every test)

    Study effects are bivariate normal with SDs `sigma` and correlation
    `rho`, arm errors independent normal with SD `tau`; counts are
    binomial at the implied accuracies. Deterministic given `truth.seed`.

    Parameters
    ----------
    truth: TruthSpec

    Returns
    -------
    Tuple[NetworkDataset, LatentRecord]
    """
    rng = np.random.Generator(np.random.PCG64(truth.seed))
    n_studies, n_tests = truth.n_studies, truth.n_tests
    covariates = truth.covariate_mean + truth.covariate_sd * rng.standard_normal(
        (n_studies, truth.n_covariates)
    )
    z = rng.standard_normal((n_studies, 2))
    sigma = np.asarray(truth.sigma, dtype=float)
    eta = np.stack(
        [
            sigma[0] * z[:, 0],
            sigma[1] * (truth.rho * z[:, 0] + np.sqrt(1.0 - truth.rho**2) * z[:, 1]),
        ],
        axis=1,
    )
    delta = truth.tau_array[None] * rng.standard_normal((n_studies, 2, n_tests))
    logits = (
        truth.mu_array[None]
        + np.einsum("ip,pjk->ijk", covariates, truth.theta_array)
        + eta[:, :, None]
        + delta
    )
    pi = special.expit(logits)
    n_diseased = _subject_counts(truth.n_diseased, (n_studies, n_tests), rng)
    n_healthy = _subject_counts(truth.n_healthy, (n_studies, n_tests), rng)
    tp = rng.binomial(n_diseased, pi[:, 0, :])
    tn = rng.binomial(n_healthy, pi[:, 1, :])
    study_ids = [f"{truth.study_prefix}{i + 1}" for i in range(n_studies)]
    test_labels = list(range(1, n_tests + 1))
    arms = tuple(
        StudyArm(
            study_id=study_ids[i],
            test_id=test_labels[k],
            tp=int(tp[i, k]),
            n_diseased=int(n_diseased[i, k]),
            tn=int(tn[i, k]),
            n_healthy=int(n_healthy[i, k]),
            covariates=tuple(float(value) for value in covariates[i]),
        )
        for i in range(n_studies)
        for k in range(n_tests)
    )
    ds = NetworkDataset(arms=arms)
    logger.info(
        "Simulated %d studies x %d tests (seed %d)", n_studies, n_tests, truth.seed
    )
    latent = LatentRecord(
        study_ids=study_ids,
        test_labels=test_labels,
        eta=eta,
        delta=delta,
        pi=pi,
        covariates=covariates,
    )
    return ds, latent
