"""
Arm-Based Model Tests
"""

import math

import numpy as np
import pytest
from scipy import special

from dtanma.config import CovarianceStructure, PriorPreset
from dtanma.containers import CovarianceSpec, NetworkDataset, PriorSpec
from dtanma.exceptions import ConfigurationError, DomainError
from dtanma.models import (
    ABParams,
    ArmBasedModel,
    MODEL_REGISTRY,
    TransformDirection,
    log_likelihood_ab,
    log_prior_ab,
)
from dtanma.posterior import marginal_accuracy_arrays
from tests.conftest import TWO_TEST_CSV, max_gradient_error, simulated_dataset


def _random_points(model: ArmBasedModel, n: int, seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).normal(scale=0.7, size=(n, model.dim))


def test_registry() -> None:
    """
    Models are registered by name
    """
    assert MODEL_REGISTRY["ab"] is ArmBasedModel
    assert sorted(MODEL_REGISTRY) == ["ab", "cb"]


def test_layout_names(three_test_dataset: NetworkDataset) -> None:
    """
    Constrained names use the original study ids and test labels
    """
    model = ArmBasedModel(three_test_dataset)
    names = model.parameter_names
    assert names[:6] == ["mu[1,1]", "mu[1,2]", "mu[1,3]", "mu[2,1]", "mu[2,2]", "mu[2,3]"]
    assert "theta[1,2,3]" in names
    assert "rho" in names
    assert "tau[1]" in names
    assert "eta[a,2]" in names
    assert "delta[d,3,1]" in names
    # mu 6 + theta 6 + sigma 2 + rho 1 + tau 2 + eta 8 + delta 16
    assert model.dim == 41


@pytest.mark.parametrize(
    "preset", [PriorPreset.eq14, PriorPreset.eq15, PriorPreset.lkj1, PriorPreset.lkj2]
)
def test_density_matches_reference(
    three_test_dataset: NetworkDataset, preset: PriorPreset
) -> None:
    """
    The compiled density is likelihood + prior + log-Jacobian
    """
    model = ArmBasedModel(three_test_dataset, priors=PriorSpec.from_preset(preset))
    for u in _random_points(model, 5):
        params = model.to_constrained(u)
        reference = (
            log_likelihood_ab(params, three_test_dataset)
            + log_prior_ab(params, model.priors, model.covariance)
            + model.log_jacobian(u)
        )
        value, _ = model.log_posterior_and_grad(u)
        assert value == pytest.approx(reference, rel=1e-8, abs=1e-8)


GRADIENT_SHAPES = [(5, 2, 0), (10, 4, 0), (8, 3, 1)]


@pytest.mark.parametrize("n_studies,n_tests,n_covariates", GRADIENT_SHAPES)
@pytest.mark.parametrize("structure", list(CovarianceStructure))
def test_gradient_matches_finite_differences(
    n_studies: int, n_tests: int, n_covariates: int, structure: CovarianceStructure
) -> None:
    """
    Autodiff against central differences at 50 random points
    """
    ds = simulated_dataset(n_studies, n_tests, n_covariates)
    assert (ds.n_studies, ds.n_tests, ds.n_covariates) == (n_studies, n_tests, n_covariates)
    model = ArmBasedModel(ds, covariance=CovarianceSpec(structure=structure))
    assert max_gradient_error(model, n_points=50, seed=n_studies) < 1e-6


def test_transform_round_trip(three_test_dataset: NetworkDataset) -> None:
    """
    Unconstrained -> constrained -> unconstrained
    """
    model = ArmBasedModel(three_test_dataset)
    u = _random_points(model, 1, seed=4)[0]
    params = model.transform_parameters(u, TransformDirection.to_constrained)
    back = model.transform_parameters(params, TransformDirection.to_unconstrained)
    np.testing.assert_allclose(back.values, u, atol=1e-9)
    assert back.log_jacobian == pytest.approx(model.log_jacobian(u))
    # unobserved arm errors are left out
    assert np.isnan(params.delta[0, :, 2]).all()


def test_compound_symmetry_rejects_unequal_tau(two_test_dataset: NetworkDataset) -> None:
    """
    One tau per outcome under compound symmetry
    """
    model = ArmBasedModel(two_test_dataset)
    params = model.to_constrained(np.zeros(model.dim))
    tau = params.tau.copy()
    tau[0, 1] = tau[0, 0] + 0.5
    with pytest.raises(DomainError, match="compound symmetry"):
        model.to_unconstrained(params._replace(tau=tau))


def test_unstructured_needs_two_tests() -> None:
    """
    An unstructured covariance is meaningless with one test
    """
    from dtanma.dataset import parse_dataset

    ds = parse_dataset(
        "study_id,test_id,tp,n_diseased,tn,n_healthy\na,1,5,10,5,10\nb,1,6,10,4,10\n"
    )
    with pytest.raises(ConfigurationError):
        ArmBasedModel(ds, covariance=CovarianceSpec(structure="un"))


def test_fixed_tau_is_not_sampled(two_test_dataset: NetworkDataset) -> None:
    """
    A fixed tau leaves the parameter vector but is still reported
    """
    free = ArmBasedModel(two_test_dataset)
    fixed = ArmBasedModel(two_test_dataset, covariance=CovarianceSpec(fixed_tau=0.01))
    assert fixed.dim == free.dim - 2
    assert "tau" not in fixed.layout
    quantities = fixed.generated_quantities(np.zeros(fixed.dim))
    np.testing.assert_allclose(quantities["tau"], [0.01, 0.01])


def test_prior_outside_support() -> None:
    """
    Scales above the uniform bound have zero prior density
    """
    params = ABParams(
        mu=np.zeros((2, 1)),
        theta=np.zeros((0, 2, 1)),
        eta=np.zeros((0, 2)),
        delta=np.zeros((0, 2, 1)),
        sigma=np.array([6.0, 1.0]),
        rho=0.0,
        tau=np.ones((2, 1)),
    )
    assert log_prior_ab(params) == -np.inf


def test_non_finite_input_rejected(two_test_dataset: NetworkDataset) -> None:
    """
    Argument checks on the public density
    """
    model = ArmBasedModel(two_test_dataset)
    u = np.zeros(model.dim)
    u[0] = np.nan
    with pytest.raises(DomainError):
        model.log_posterior_and_grad(u)
    with pytest.raises(DomainError):
        model.log_posterior_and_grad(np.zeros(model.dim + 1))


def test_covariates_shift_the_likelihood(three_test_dataset: NetworkDataset) -> None:
    """
    theta enters through the study covariates
    """
    model = ArmBasedModel(three_test_dataset)
    params = model.to_constrained(np.zeros(model.dim))
    shifted = params._replace(theta=params.theta + 0.5)
    assert log_likelihood_ab(shifted, three_test_dataset) != pytest.approx(
        log_likelihood_ab(params, three_test_dataset)
    )


def labelled_params(ds: NetworkDataset) -> ABParams:
    """
    Parameters tied to study ids and test labels, not to dataset positions
    """
    mu = np.array([[0.3 * label + j for label in ds.test_labels] for j in (0.5, 1.0)])
    offsets = [sum(map(ord, study)) % 7 / 10 for study in ds.study_ids]
    eta = np.array([[offset, -2 * offset] for offset in offsets])
    delta = np.full((ds.n_studies, 2, ds.n_tests), np.nan)
    for arm in ds.arms:
        i, k = ds.study_ids.index(arm.study_id), ds.test_index[arm.test_id]
        delta[i, :, k] = [0.05 * arm.tp / arm.n_diseased, -0.05 * arm.tn / arm.n_healthy]
    return ABParams(
        mu=mu,
        theta=np.zeros((0, 2, ds.n_tests)),
        eta=eta,
        delta=delta,
        sigma=np.array([0.6, 0.5]),
        rho=-0.3,
        tau=np.full((2, ds.n_tests), 0.3),
    )


def test_log_likelihood_by_hand() -> None:
    """
    One arm, logits 0.5 and 1.0, counts 8/10 and 18/20
    """
    from dtanma.dataset import parse_dataset

    ds = parse_dataset("study_id,test_id,tp,n_diseased,tn,n_healthy\ns1,1,8,10,18,20\n")
    params = ABParams(
        mu=np.array([[0.5], [1.0]]),
        theta=np.zeros((0, 2, 1)),
        eta=np.zeros((1, 2)),
        delta=np.zeros((1, 2, 1)),
        sigma=np.ones(2),
        rho=0.0,
        tau=np.ones((2, 1)),
    )
    p, q = special.expit(0.5), special.expit(1.0)
    expected = (
        math.log(math.comb(10, 8))
        + 8 * math.log(p)
        + 2 * math.log(1 - p)
        + math.log(math.comb(20, 18))
        + 18 * math.log(q)
        + 2 * math.log(1 - q)
    )
    assert log_likelihood_ab(params, ds) == pytest.approx(expected, rel=1e-12)
    assert log_likelihood_ab(params, ds) == pytest.approx(-4.9523170, abs=1e-6)


def test_log_likelihood_sums_over_arms(two_test_dataset: NetworkDataset) -> None:
    """
    The network likelihood is the sum of one-arm likelihoods
    """
    params = labelled_params(two_test_dataset)
    per_arm = []
    for arm in two_test_dataset.arms:
        i = two_test_dataset.study_ids.index(arm.study_id)
        k = two_test_dataset.test_index[arm.test_id]
        single = NetworkDataset(arms=(arm,))
        per_arm.append(
            log_likelihood_ab(
                params._replace(
                    mu=params.mu[:, [k]],
                    theta=np.zeros((0, 2, 1)),
                    eta=params.eta[[i]],
                    delta=params.delta[[i]][:, :, [k]],
                    tau=params.tau[:, [k]],
                ),
                single,
            )
        )
    total = log_likelihood_ab(params, two_test_dataset)
    assert total == pytest.approx(sum(per_arm), rel=1e-12)


def test_log_likelihood_ignores_row_order() -> None:
    """
    Shuffling studies and arms leaves the likelihood unchanged
    """
    from dtanma.dataset import parse_dataset

    header, *rows = TWO_TEST_CSV.strip().splitlines()
    rng = np.random.default_rng(8)
    original = parse_dataset(TWO_TEST_CSV)
    expected = log_likelihood_ab(labelled_params(original), original)
    for _ in range(5):
        shuffled = [rows[index] for index in rng.permutation(len(rows))]
        ds = parse_dataset("\n".join([header, *shuffled]) + "\n")
        assert log_likelihood_ab(labelled_params(ds), ds) == pytest.approx(
            expected, rel=1e-12
        )


def test_marginal_accuracy_increases_with_mu() -> None:
    """
    Marginal sensitivity and specificity rise with the test mean
    """
    grid = np.arange(-3.0, 3.01, 0.5)
    mu = np.broadcast_to(grid, (1, 2, grid.size))
    for tau in (0.0, 0.5):
        accuracy = marginal_accuracy_arrays(
            mu, np.ones((1, 2)), np.full((1, 2), tau), mc_samples=4000, seed=4
        )
        assert np.all(np.diff(accuracy[0], axis=-1) > 0)
