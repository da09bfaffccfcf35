"""
Contrast-Based Model Tests
"""

import numpy as np
import pytest

from dtanma.containers import NetworkDataset
from dtanma.dataset import restrict_to_comparative
from dtanma.exceptions import DatasetValidationError
from dtanma.models import (
    ContrastBasedModel,
    check_comparative_design,
    log_posterior_cb,
    recover_accuracy_cb,
)
from dtanma.models.cb_model import contrast_weights
from tests.conftest import max_gradient_error, simulated_dataset


def test_contrast_weights_sum_to_zero() -> None:
    """
    Each contrast column sums to zero over the tests
    """
    weights = contrast_weights(4, baseline_index=1)
    assert weights.shape == (4, 3)
    np.testing.assert_allclose(weights.sum(axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(weights[1], -0.25)


def test_recover_accuracy_zero_contrasts() -> None:
    """
    Zero contrasts give the baseline logit for every test
    """
    accuracy = recover_accuracy_cb(np.array([1.0, 2.0]), np.zeros((2, 2)))
    np.testing.assert_allclose(accuracy[0], 1 / (1 + np.exp(-1.0)))
    np.testing.assert_allclose(accuracy[1], 1 / (1 + np.exp(-2.0)))


def test_recover_accuracy_logit_combination() -> None:
    """
    Two tests, one contrast d: logits m + d/2 and m - d/2
    """
    accuracy = recover_accuracy_cb(
        np.array([0.0, 0.0]), np.array([[2.0], [-2.0]]), baseline_index=0
    )
    expit = lambda x: 1 / (1 + np.exp(-x))  # noqa: E731
    np.testing.assert_allclose(accuracy[0], [expit(-1.0), expit(1.0)])
    np.testing.assert_allclose(accuracy[1], [expit(1.0), expit(-1.0)])


def test_design_must_include_baseline(two_test_dataset: NetworkDataset) -> None:
    """
    Single-test studies are not admitted
    """
    with pytest.raises(DatasetValidationError, match="s3"):
        check_comparative_design(two_test_dataset, baseline_test=1)
    with pytest.raises(DatasetValidationError, match="not observed"):
        check_comparative_design(two_test_dataset, baseline_test=5)


def test_density_matches_reference(two_test_dataset: NetworkDataset) -> None:
    """
    The compiled density is the reference posterior plus log-Jacobian
    """
    ds = restrict_to_comparative(two_test_dataset, baseline_test=1)
    model = ContrastBasedModel(ds, baseline_test=1)
    rng = np.random.default_rng(2)
    for u in rng.normal(scale=0.7, size=(4, model.dim)):
        params = model.to_constrained(u)
        reference = log_posterior_cb(params, ds, 1, model.priors) + model.log_jacobian(u)
        value, gradient = model.log_posterior_and_grad(u)
        assert value == pytest.approx(reference, rel=1e-8, abs=1e-8)
        assert np.all(np.isfinite(gradient))


def test_generated_accuracy(three_test_dataset: NetworkDataset) -> None:
    """
    Conditional accuracies are stored with every draw
    """
    ds = restrict_to_comparative(three_test_dataset, baseline_test=1)
    model = ContrastBasedModel(ds, baseline_test=1)
    assert model.contrast_labels == [2, 3]
    u = np.random.default_rng(0).normal(size=model.dim)
    quantities = model.generated_quantities(u)
    expected = recover_accuracy_cb(
        quantities["m"], quantities["nu"], baseline_index=model.baseline_index
    )
    np.testing.assert_allclose(quantities["accuracy"], expected, rtol=1e-10)
    assert "accuracy[2,3]" in model.parameter_names


@pytest.mark.parametrize("n_studies,n_tests", [(5, 2), (10, 4), (8, 3)])
def test_gradient_matches_finite_differences(n_studies: int, n_tests: int) -> None:
    """
    Autodiff of the contrast-based posterior against central differences
    """
    ds = simulated_dataset(n_studies, n_tests)
    model = ContrastBasedModel(ds, baseline_test=1)
    assert max_gradient_error(model, n_points=50, seed=n_tests) < 1e-6
