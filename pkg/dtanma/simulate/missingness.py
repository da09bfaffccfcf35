"""
Missing-at-Random Arm Deletion
"""

import logging
from typing import List, Mapping, NamedTuple, Optional, Sequence, Union

import numpy as np

from dtanma.containers import NetworkDataset
from dtanma.exceptions import DomainError
from dtanma.utils.logging_utils import describe_labels

logger = logging.getLogger(__name__)

KeepProbability = Union[float, Sequence[float], Mapping[int, float]]


class MarDeletion(NamedTuple):
    """
    A dataset after MAR deletion and the studies that lost every arm
    """

    dataset: NetworkDataset
    dropped_studies: List[str]

    @property
    def n_dropped(self) -> int:
        return len(self.dropped_studies)


def _keep_probabilities(ds: NetworkDataset, keep_prob: KeepProbability) -> np.ndarray:
    labels = ds.test_labels
    if isinstance(keep_prob, Mapping):
        unknown = sorted(set(keep_prob) - set(labels))
        if unknown:
            raise DomainError(f"keep probabilities given for unknown tests {unknown}")
        values = np.array([keep_prob.get(label, 1.0) for label in labels], dtype=float)
    elif np.ndim(keep_prob) == 0:
        values = np.full(len(labels), float(keep_prob))  # type: ignore[arg-type]
    else:
        values = np.asarray(keep_prob, dtype=float)
        if values.shape != (len(labels),):
            raise DomainError(
                f"expected {len(labels)} keep probabilities, got {values.size}"
            )
    if not np.all((values >= 0.0) & (values <= 1.0)):
        raise DomainError(f"keep probabilities must lie in [0, 1], got {values}")
    return values


def impose_mar(
    ds: NetworkDataset,
    keep_prob: Optional[KeepProbability] = None,
    seed: int = 0,
    patterns: Optional[Sequence[Sequence[int]]] = None,
) -> MarDeletion:
    """
    Delete arms independently of their counts

    Either every arm (i, k) is kept with probability `keep_prob[k]`, or
    every study draws one of `patterns` (sets of test labels) uniformly
    and keeps the arms in it. Studies left without arms are dropped.

    Parameters
    ----------
    ds: NetworkDataset
    keep_prob: Optional[KeepProbability]
        One probability for all tests, one per test in label order, or a
        mapping of test label to probability (absent tests are kept)
    seed: int
    patterns: Optional[Sequence[Sequence[int]]]
        Per-study retention patterns, used instead of `keep_prob`

    Returns
    -------
    MarDeletion
    """
    if (keep_prob is None) == (patterns is None):
        raise DomainError("give exactly one of keep_prob and patterns")
    rng = np.random.Generator(np.random.PCG64(seed))
    arrays = ds.arrays
    if patterns is not None:
        if len(patterns) == 0:
            raise DomainError("at least one retention pattern is required")
        choice = rng.integers(0, len(patterns), size=ds.n_studies)
        chosen = [set(patterns[index]) for index in choice]
        keep = np.array(
            [arm.test_id in chosen[i] for arm, i in zip(ds.arms, arrays.arm_study)],
            dtype=bool,
        )
    else:
        probabilities = _keep_probabilities(ds, keep_prob)  # type: ignore[arg-type]
        keep = rng.random(ds.n_arms) < probabilities[arrays.arm_test]
    kept_arms = tuple(arm for arm, retained in zip(ds.arms, keep) if retained)
    if not kept_arms:
        raise DomainError("MAR deletion removed every arm")
    remaining = {arm.study_id for arm in kept_arms}
    dropped = [study_id for study_id in ds.study_ids if study_id not in remaining]
    if dropped:
        logger.warning(
            "%d studies lost every arm and were dropped: %s",
            len(dropped),
            describe_labels(dropped),
        )
    logger.info("MAR deletion kept %d of %d arms", len(kept_arms), ds.n_arms)
    return MarDeletion(dataset=NetworkDataset(arms=kept_arms), dropped_studies=dropped)
