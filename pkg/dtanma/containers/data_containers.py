"""
Study Data Containers
"""

import logging
from collections import Counter
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from pydantic import PrivateAttr, conint, root_validator, validator

from dtanma.containers.base_container import DtaNmaModel

logger = logging.getLogger(__name__)


class StudyArm(DtaNmaModel):
    """
    Counts Reported for One Test Within One Study

    `tp` out of `n_diseased` diseased subjects tested positive and `tn` out
    of `n_healthy` healthy subjects tested negative.
    """

    study_id: str
    test_id: conint(ge=1)  # type: ignore[valid-type]
    tp: conint(ge=0)  # type: ignore[valid-type]
    n_diseased: conint(ge=0)  # type: ignore[valid-type]
    tn: conint(ge=0)  # type: ignore[valid-type]
    n_healthy: conint(ge=0)  # type: ignore[valid-type]
    covariates: Tuple[float, ...] = ()
    stratum: Optional[str] = None

    @validator("study_id")
    def study_id_not_empty(cls, value: str) -> str:
        """
        Study identifiers are opaque but never blank
        """
        if value == "":
            raise ValueError("study_id is empty")
        return value

    @root_validator(skip_on_failure=True)
    def counts_are_consistent(cls, values: Dict[str, object]) -> Dict[str, object]:
        """
        Enforce 0 <= tp <= n_diseased, 0 <= tn <= n_healthy and a nonempty arm
        """
        if values["tp"] > values["n_diseased"]:
            raise ValueError("tp exceeds n_diseased")
        if values["tn"] > values["n_healthy"]:
            raise ValueError("tn exceeds n_healthy")
        if values["n_diseased"] == 0 and values["n_healthy"] == 0:
            raise ValueError("arm has neither diseased nor healthy subjects")
        return values

    @property
    def label(self) -> str:
        """
        Human readable arm name used in error messages
        """
        return f"study {self.study_id!r}, test {self.test_id}"


class DatasetArrays(NamedTuple):
    """
    Dense index arrays over the observed arms of a NetworkDataset

    `positives[:, 0]` holds true positives and `positives[:, 1]` true
    negatives; `totals` holds the matching subject counts.
    """

    arm_study: np.ndarray
    arm_test: np.ndarray
    positives: np.ndarray
    totals: np.ndarray
    covariates: np.ndarray


class NetworkDataset(DtaNmaModel):
    """
    A Validated Network of Study Arms

    Studies are indexed in order of first appearance, tests by sorted
    label. Reports always use the original labels.
    """

    arms: Tuple[StudyArm, ...] = ()

    _arrays: Optional[DatasetArrays] = PrivateAttr(default=None)

    @root_validator(skip_on_failure=True)
    def network_is_consistent(cls, values: Dict[str, object]) -> Dict[str, object]:
        """
        Reject duplicate arms and inconsistent covariates
        """
        arms: Tuple[StudyArm, ...] = values["arms"]  # type: ignore[assignment]
        pairs = Counter((arm.study_id, arm.test_id) for arm in arms)
        duplicates = sorted(pair for pair, count in pairs.items() if count > 1)
        if duplicates:
            study_id, test_id = duplicates[0]
            raise ValueError(
                f"duplicate arm for study {study_id!r}, test {test_id} "
                f"({len(duplicates)} duplicate pair(s))"
            )
        lengths = {len(arm.covariates) for arm in arms}
        if len(lengths) > 1:
            raise ValueError(
                f"covariate vectors have differing lengths: {sorted(lengths)}"
            )
        study_covariates: Dict[str, Tuple[float, ...]] = {}
        for arm in arms:
            known = study_covariates.setdefault(arm.study_id, arm.covariates)
            if known != arm.covariates:
                raise ValueError(
                    f"covariates differ between arms of study {arm.study_id!r}; "
                    "covariates are study-level"
                )
        return values

    @property
    def study_ids(self) -> List[str]:
        """
        Study identifiers in order of first appearance
        """
        return list(dict.fromkeys(arm.study_id for arm in self.arms))

    @property
    def test_labels(self) -> List[int]:
        """
        Original test labels, sorted
        """
        return sorted({arm.test_id for arm in self.arms})

    @property
    def n_studies(self) -> int:
        return len(self.study_ids)

    @property
    def n_tests(self) -> int:
        return len(self.test_labels)

    @property
    def n_covariates(self) -> int:
        return len(self.arms[0].covariates) if self.arms else 0

    @property
    def n_arms(self) -> int:
        return len(self.arms)

    @property
    def study_index(self) -> Dict[str, int]:
        return {study_id: i for i, study_id in enumerate(self.study_ids)}

    @property
    def test_index(self) -> Dict[int, int]:
        return {label: k for k, label in enumerate(self.test_labels)}

    @property
    def strata(self) -> List[Optional[str]]:
        return list(dict.fromkeys(arm.stratum for arm in self.arms))

    @property
    def arrays(self) -> DatasetArrays:
        """
        Dense arrays consumed by the model densities (built once)
        """
        if self._arrays is None:
            study_index = self.study_index
            test_index = self.test_index
            covariates = np.zeros((self.n_studies, self.n_covariates))
            for arm in self.arms:
                covariates[study_index[arm.study_id]] = arm.covariates
            self._arrays = DatasetArrays(
                arm_study=np.array(
                    [study_index[arm.study_id] for arm in self.arms], dtype=int
                ),
                arm_test=np.array(
                    [test_index[arm.test_id] for arm in self.arms], dtype=int
                ),
                positives=np.array(
                    [[arm.tp, arm.tn] for arm in self.arms], dtype=float
                ).reshape(-1, 2),
                totals=np.array(
                    [[arm.n_diseased, arm.n_healthy] for arm in self.arms], dtype=float
                ).reshape(-1, 2),
                covariates=covariates,
            )
        return self._arrays

    def subset(self, study_ids: List[str]) -> "NetworkDataset":
        """
        Keep only the arms of the given studies
        """
        keep = set(study_ids)
        return NetworkDataset(arms=tuple(arm for arm in self.arms if arm.study_id in keep))

    def __repr__(self) -> str:
        """
        String Representation
        """
        return (
            f"<NetworkDataset: {self.n_studies} studies, {self.n_tests} tests, "
            f"{self.n_arms} arms>"
        )


class MissingnessMatrix(DtaNmaModel):
    """
    Which Tests Each Study Reports

    `r[i][k] == 1` exactly when study `i` has an arm for test `k`.
    """

    study_ids: Tuple[str, ...]
    test_labels: Tuple[int, ...]
    r: Tuple[Tuple[int, ...], ...]

    def as_array(self) -> np.ndarray:
        return np.array(self.r, dtype=int).reshape(
            len(self.study_ids), len(self.test_labels)
        )


class NetworkGraph(DtaNmaModel):
    """
    Test Network: Study Counts per Test and Direct Comparisons per Test Pair

    `edges` holds every unordered pair `(k, k')` with `k < k'`, including
    pairs never compared directly (weight 0).
    """

    nodes: Dict[int, int]
    edges: Dict[Tuple[int, int], int]

    def edge_weight(self, first: int, second: int) -> int:
        """
        Symmetric edge lookup
        """
        if first == second:
            return self.nodes[first]
        key = (min(first, second), max(first, second))
        return self.edges.get(key, 0)


class ConnectivityReport(DtaNmaModel):
    """
    Connectivity of the Test Network
    """

    connected: bool
    components: List[List[int]]
