"""
Accuracy Summary and Variance Partition Tests
"""

import numpy as np
import pytest

from dtanma.config import SummaryColumns
from dtanma.exceptions import DomainError
from dtanma.models import ParameterLayout
from dtanma.posterior import MARGINAL, build_accuracy_summary, variance_partition
from tests.conftest import make_draws


@pytest.fixture
def accuracy() -> np.ndarray:
    rng = np.random.default_rng(0)
    sens = rng.uniform(0.6, 0.9, size=(200, 3))
    spec = rng.uniform(0.6, 0.9, size=(200, 3))
    return np.stack([sens, spec], axis=1)


def test_accuracy_summary(accuracy: np.ndarray) -> None:
    """
    Accuracy, relative, DOR and superiority rows for every test
    """
    summary = build_accuracy_summary(accuracy, [1, 2, 5], kind=MARGINAL, stratum="CIN2")
    assert summary.tests == ["1", "2", "5"]
    assert summary.reference == "1"
    assert len(summary.accuracy) == 6
    assert len(summary.relative) == 12
    assert len(summary.dor) == 3
    assert len(summary.superiority) == 3
    row = summary.lookup("2", "sensitivity")
    assert row.mean == pytest.approx(accuracy[:, 0, 1].mean())
    assert row.stratum == "CIN2"
    reference = summary.lookup("1", "relative_specificity")
    assert reference.mean == reference.lower == reference.upper == 1.0
    frame = summary.to_frame()
    assert list(frame.columns) == SummaryColumns.ALL
    # the reference is left out of the exported relative rows
    assert len(frame) == 6 + 8 + 3
    with pytest.raises(KeyError):
        summary.lookup("9", "sensitivity")


def test_accuracy_summary_reference(accuracy: np.ndarray) -> None:
    """
    Any observed test may serve as the reference
    """
    summary = build_accuracy_summary(accuracy, [1, 2, 5], kind=MARGINAL, reference="5")
    assert summary.lookup("5", "difference_sensitivity").mean == 0.0
    with pytest.raises(DomainError):
        build_accuracy_summary(accuracy, [1, 2, 5], kind=MARGINAL, reference="3")
    with pytest.raises(DomainError):
        build_accuracy_summary(accuracy, [1, 2], kind=MARGINAL)


def test_single_test_has_no_superiority(accuracy: np.ndarray) -> None:
    """
    One test: accuracies and DOR only
    """
    summary = build_accuracy_summary(accuracy[:, :, :1], [1], kind=MARGINAL)
    assert summary.superiority == []
    assert len(summary.dor) == 1


def variance_draws(tau_per_test: bool):
    layout = ParameterLayout()
    layout.add("mu", (2, 2), [(1, 2), (1, 2)])
    layout.add("sigma", (2,), [(1, 2)])
    layout.add("rho", ())
    if tau_per_test:
        layout.add("tau", (2, 2), [(1, 2), (1, 2)])
        tau = [1.0, 2.0, 1.0, 1.0]
    else:
        layout.add("tau", (2,), [(1, 2)])
        tau = [1.0, 0.5]
    row = [0.0] * 4 + [1.0, 1.0] + [-0.4] + tau
    return make_draws(np.tile(row, (2, 10, 1)), layout)


def test_variance_partition_compound_symmetry() -> None:
    """
    sigma = tau = 1 splits the sensitivity variance in half
    """
    report = variance_partition(variance_draws(False), stratum="CIN3")
    assert report.lookup("total_variance_sensitivity").mean == pytest.approx(2.0)
    assert report.lookup("between_study_percent_sensitivity").mean == pytest.approx(50.0)
    assert report.lookup("intra_study_correlation_sensitivity").mean == pytest.approx(0.5)
    assert report.lookup("total_variance_specificity").mean == pytest.approx(1.25)
    assert report.lookup("between_study_percent_specificity").mean == pytest.approx(80.0)
    assert report.rho.mean == pytest.approx(-0.4)
    assert report.formatted()["rho"] == "-0.40 [-0.40, -0.40]"
    assert all(row.stratum == "CIN3" for row in report.rows)


def test_variance_partition_unstructured() -> None:
    """
    Per-test totals, the mean-tau total and pairwise correlations
    """
    report = variance_partition(variance_draws(True))
    assert report.lookup("total_variance_sensitivity", test="1").mean == pytest.approx(2.0)
    assert report.lookup("total_variance_sensitivity", test="2").mean == pytest.approx(5.0)
    assert report.lookup("total_variance_mean_tau_sensitivity").mean == pytest.approx(3.5)
    correlation = report.lookup("intra_study_correlation_sensitivity", test="1-2")
    assert correlation.mean == pytest.approx(1.0 / np.sqrt(2.0 * 5.0))
    assert "total_variance_specificity[2]" in report.formatted()


def test_variance_partition_needs_arm_based_draws() -> None:
    """
    Contrast-based draws have no tau
    """
    layout = ParameterLayout()
    layout.add("m", (2,))
    with pytest.raises(DomainError):
        variance_partition(make_draws(np.zeros((1, 4, 2)), layout))
