"""
Marginal and Conditional Accuracy Tests
"""

import numpy as np
import pytest
from scipy import special

from dtanma.exceptions import DomainError
from dtanma.models import ParameterLayout
from dtanma.posterior import (
    CONDITIONAL,
    MARGINAL,
    accuracy_draws,
    accuracy_labels,
    conditional_accuracy,
    marginal_accuracy,
    marginal_accuracy_arrays,
)
from tests.conftest import make_draws


def gauss_hermite_expit(location: float, sd: float, order: int = 80) -> float:
    nodes, weights = np.polynomial.hermite_e.hermegauss(order)
    return float(np.sum(weights * special.expit(location + sd * nodes)) / np.sqrt(2 * np.pi))


def ab_layout(tests=(1, 3), tau_per_test: bool = False) -> ParameterLayout:
    layout = ParameterLayout()
    layout.add("mu", (2, len(tests)), [(1, 2), tests])
    layout.add("sigma", (2,), [(1, 2)])
    layout.add("rho", ())
    if tau_per_test:
        layout.add("tau", (2, len(tests)), [(1, 2), tests])
    else:
        layout.add("tau", (2,), [(1, 2)])
    return layout


def test_marginal_matches_quadrature() -> None:
    """
    Monte Carlo against Gauss-Hermite on the combined standard deviation
    """
    mu = np.array([[[1.0, -0.5], [2.0, 0.3]]])
    sigma = np.array([[0.8, 0.4]])
    tau = np.array([[0.5, 0.2]])
    result = marginal_accuracy_arrays(mu, sigma, tau, mc_samples=4000, seed=3)
    for j in range(2):
        sd = np.hypot(sigma[0, j], tau[0, j])
        for k in range(2):
            assert result[0, j, k] == pytest.approx(
                gauss_hermite_expit(mu[0, j, k], sd), abs=0.01
            )


@pytest.mark.parametrize("mc_samples", [1, 10, 11])
def test_zero_location_gives_half(mc_samples: int) -> None:
    """
    Antithetic pairs make a zero linear predictor exactly 0.5, odd counts included
    """
    result = marginal_accuracy_arrays(
        np.zeros((3, 2, 2)),
        np.full((3, 2), 2.0),
        np.full((3, 2), 1.5),
        mc_samples=mc_samples,
    )
    np.testing.assert_allclose(result, 0.5)


def test_marginal_shrinks_toward_half() -> None:
    """
    Random effects pull the marginal accuracy toward 0.5
    """
    mu = np.full((1, 2, 1), 2.0)
    result = marginal_accuracy_arrays(mu, np.ones((1, 2)), np.ones((1, 2)), mc_samples=500)
    assert 0.5 < result[0, 0, 0] < special.expit(2.0)


def test_marginal_is_reproducible_and_chunked() -> None:
    """
    Same seed, same values, whatever the chunk size
    """
    rng = np.random.default_rng(0)
    mu = rng.normal(size=(7, 2, 3))
    sigma = rng.uniform(0.1, 1.0, size=(7, 2))
    tau = rng.uniform(0.1, 1.0, size=(7, 2, 3))
    first = marginal_accuracy_arrays(mu, sigma, tau, mc_samples=50, seed=1, chunk_size=100)
    second = marginal_accuracy_arrays(mu, sigma, tau, mc_samples=50, seed=1, chunk_size=100)
    np.testing.assert_array_equal(first, second)
    chunked = marginal_accuracy_arrays(mu, sigma, tau, mc_samples=50, seed=1, chunk_size=3)
    assert chunked.shape == first.shape
    with pytest.raises(DomainError):
        marginal_accuracy_arrays(mu, sigma, tau, mc_samples=0)


def test_covariates_shift_location() -> None:
    """
    theta enters at the requested covariate values
    """
    mu = np.zeros((1, 2, 1))
    theta = np.ones((1, 1, 2, 1))
    at_zero = marginal_accuracy_arrays(mu, np.ones((1, 2)), np.ones((1, 2)), theta=theta)
    shifted = marginal_accuracy_arrays(
        mu, np.ones((1, 2)), np.ones((1, 2)), theta=theta, covariates=[1.0]
    )
    np.testing.assert_allclose(at_zero, 0.5)
    assert np.all(shifted > 0.5)
    with pytest.raises(DomainError):
        marginal_accuracy_arrays(
            mu, np.ones((1, 2)), np.ones((1, 2)), theta=theta, covariates=[1.0, 2.0]
        )


def test_accuracy_from_draws() -> None:
    """
    Draw containers give per-draw accuracies with their test labels
    """
    layout = ab_layout(tau_per_test=True)
    values = np.zeros((2, 5, layout.size))
    values[..., layout.blocks["sigma"].start : layout.blocks["sigma"].stop] = 0.5
    values[..., layout.blocks["tau"].start : layout.blocks["tau"].stop] = 0.3
    draws = make_draws(values, layout)
    assert accuracy_labels(draws) == [1, 3]
    marginal = accuracy_draws(draws, mc_samples=20)
    assert marginal.shape == (10, 2, 2)
    np.testing.assert_allclose(marginal, 0.5)
    np.testing.assert_allclose(conditional_accuracy(draws), 0.5)
    pooled = marginal_accuracy(draws, mc_samples=20, pooled_tau=True)
    np.testing.assert_allclose(pooled, 0.5)
    with pytest.raises(DomainError):
        accuracy_draws(draws, kind="other")


def test_contrast_based_draws_are_conditional() -> None:
    """
    Stored accuracies are used as they are
    """
    layout = ParameterLayout()
    layout.add("m", (2,), [(1, 2)])
    layout.add("accuracy", (2, 2), [(1, 2), (4, 7)])
    values = np.tile([0.0, 0.0, 0.9, 0.8, 0.7, 0.6], (1, 3, 1))
    draws = make_draws(values, layout)
    assert accuracy_labels(draws) == [4, 7]
    accuracy = accuracy_draws(draws)
    np.testing.assert_allclose(accuracy[0], [[0.9, 0.8], [0.7, 0.6]])
    assert accuracy_draws(draws, kind=CONDITIONAL).shape == (3, 2, 2)
    with pytest.raises(DomainError):
        accuracy_draws(draws, kind=MARGINAL)
