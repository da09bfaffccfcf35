"""
Project Configuration for Data Variable Labels
"""

from typing import List


class DatasetColumns:
    """
    Column names of the study-arm CSV schema
    """

    STUDY_ID: str = "study_id"
    TEST_ID: str = "test_id"
    TRUE_POSITIVES: str = "tp"
    N_DISEASED: str = "n_diseased"
    TRUE_NEGATIVES: str = "tn"
    N_HEALTHY: str = "n_healthy"
    STRATUM: str = "stratum"
    COVARIATE_PREFIX: str = "cov_"
    COMMENT: str = "#"

    REQUIRED: List[str] = [
        STUDY_ID,
        TEST_ID,
        TRUE_POSITIVES,
        N_DISEASED,
        TRUE_NEGATIVES,
        N_HEALTHY,
    ]
    COUNTS: List[str] = [TRUE_POSITIVES, N_DISEASED, TRUE_NEGATIVES, N_HEALTHY]


class DrawsColumns:
    """
    Bookkeeping columns of the draws CSV
    """

    CHAIN: str = "chain"
    ITERATION: str = "iter"
    LOG_DENSITY: str = "lp__"
    DIVERGENT: str = "divergent__"
    TREE_DEPTH: str = "treedepth__"

    BOOKKEEPING: List[str] = [CHAIN, ITERATION, LOG_DENSITY, DIVERGENT, TREE_DEPTH]


class SummaryColumns:
    """
    Columns of the summary tables
    """

    STRATUM: str = "stratum"
    TEST: str = "test"
    MEASURE: str = "measure"
    MEAN: str = "mean"
    LOWER: str = "lower"
    UPPER: str = "upper"

    ALL: List[str] = [STRATUM, TEST, MEASURE, MEAN, LOWER, UPPER]


class Outcomes:
    """
    Outcome labels, indexed by j - 1 (j=1 diseased, j=2 healthy)
    """

    SENSITIVITY: str = "sensitivity"
    SPECIFICITY: str = "specificity"

    ORDERED: List[str] = [SENSITIVITY, SPECIFICITY]
