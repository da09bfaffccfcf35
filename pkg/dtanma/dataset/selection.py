"""
Dataset Subsets and Raw Study Proportions
"""

import logging
from typing import Dict, List, Set

import numpy as np
import pandas as pd

from dtanma.config import DatasetColumns, Outcomes
from dtanma.containers import NetworkDataset
from dtanma.exceptions import DatasetValidationError

logger = logging.getLogger(__name__)


def comparative_studies(ds: NetworkDataset, baseline_test: int) -> List[str]:
    """
    Ids of the studies that observe the baseline and at least one other test
    """
    tests_by_study: Dict[str, Set[int]] = {}
    for arm in ds.arms:
        tests_by_study.setdefault(arm.study_id, set()).add(arm.test_id)
    return [
        study_id
        for study_id in ds.study_ids
        if len(tests_by_study[study_id]) >= 2 and baseline_test in tests_by_study[study_id]
    ]


def restrict_to_comparative(ds: NetworkDataset, baseline_test: int) -> NetworkDataset:
    """
    Keep studies that compare at least two tests, one being the baseline

    Parameters
    ----------
    ds: NetworkDataset
    baseline_test: int
        Original label of the common comparator

    Returns
    -------
    NetworkDataset
    """
    if baseline_test not in ds.test_labels:
        raise DatasetValidationError(
            f"baseline test {baseline_test} does not appear in the dataset"
        )
    keep = comparative_studies(ds, baseline_test)
    if not keep:
        raise DatasetValidationError(
            f"no study compares test {baseline_test} with another test"
        )
    logger.info(
        "Keeping %s of %s studies that compare against test %s",
        len(keep),
        ds.n_studies,
        baseline_test,
    )
    return ds.subset(keep)


def studywise_proportions(ds: NetworkDataset) -> pd.DataFrame:
    """
    Raw per-arm sensitivity tp/n_diseased and specificity tn/n_healthy

    Arms without diseased (healthy) subjects get a missing sensitivity
    (specificity).

    Parameters
    ----------
    ds: NetworkDataset

    Returns
    -------
    pd.DataFrame
        Columns study_id, test_id, sensitivity, specificity
    """
    arrays = ds.arrays
    with np.errstate(divide="ignore", invalid="ignore"):
        proportions = np.where(
            arrays.totals > 0, arrays.positives / arrays.totals, np.nan
        )
    return pd.DataFrame(
        {
            DatasetColumns.STUDY_ID: [arm.study_id for arm in ds.arms],
            DatasetColumns.TEST_ID: [arm.test_id for arm in ds.arms],
            Outcomes.SENSITIVITY: proportions[:, 0] if ds.n_arms else [],
            Outcomes.SPECIFICITY: proportions[:, 1] if ds.n_arms else [],
        }
    )
