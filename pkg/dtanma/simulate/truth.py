"""
Ground Truth for Simulated Networks
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError, confloat, conint, root_validator, validator

from dtanma.containers.base_container import DtaNmaModel
from dtanma.exceptions import DomainError
from dtanma.utils.yaml_utils import read_yaml

logger = logging.getLogger(__name__)

SubjectRule = Union[conint(ge=1), Tuple[conint(ge=1), conint(ge=1)]]  # type: ignore[valid-type]


class TruthSpec(DtaNmaModel):
    """
    Known Arm-Based Parameters and a Sampling Design

    `tau` holds one within-study SD per outcome (compound symmetry) or
    one per outcome and test. Subject counts are a fixed number per arm
    or an inclusive (low, high) range drawn uniformly per arm. Study
    covariates are drawn Normal(covariate_mean, covariate_sd^2).
    """

    n_studies: conint(ge=1)  # type: ignore[valid-type]
    n_tests: conint(ge=1)  # type: ignore[valid-type]
    n_covariates: conint(ge=0) = 0  # type: ignore[valid-type]
    mu: List[List[float]]
    theta: Optional[List[List[List[float]]]] = None
    sigma: Tuple[confloat(ge=0), confloat(ge=0)]  # type: ignore[valid-type]
    rho: confloat(gt=-1, lt=1) = 0.0  # type: ignore[valid-type]
    tau: Union[
        Tuple[confloat(ge=0), confloat(ge=0)],  # type: ignore[valid-type]
        List[List[confloat(ge=0)]],  # type: ignore[valid-type]
    ]
    n_diseased: SubjectRule = 100
    n_healthy: SubjectRule = 100
    covariate_mean: float = 0.0
    covariate_sd: confloat(ge=0) = 1.0  # type: ignore[valid-type]
    seed: conint(ge=0) = 0  # type: ignore[valid-type]
    study_prefix: str = "s"

    @validator("n_diseased", "n_healthy")
    def range_is_ordered(cls, value: Any) -> Any:
        """
        A (low, high) range needs low <= high
        """
        if isinstance(value, tuple) and value[0] > value[1]:
            raise ValueError(f"subject range {value} is reversed")
        return value

    @root_validator(skip_on_failure=True)
    def shapes_match(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """
        mu is 2 x K, theta P x 2 x K, tau 2 or 2 x K
        """
        n_tests, n_covariates = values["n_tests"], values["n_covariates"]
        if np.shape(values["mu"]) != (2, n_tests):
            raise ValueError(f"mu must have shape (2, {n_tests})")
        theta = values.get("theta")
        if theta is not None and np.shape(theta) != (n_covariates, 2, n_tests):
            raise ValueError(f"theta must have shape ({n_covariates}, 2, {n_tests})")
        if theta is None and n_covariates > 0:
            raise ValueError("theta is required when n_covariates > 0")
        if np.shape(values["tau"]) not in [(2,), (2, n_tests)]:
            raise ValueError(f"tau must have shape (2,) or (2, {n_tests})")
        return values

    @property
    def mu_array(self) -> np.ndarray:
        return np.asarray(self.mu, dtype=float)

    @property
    def theta_array(self) -> np.ndarray:
        if self.theta is None:
            return np.zeros((0, 2, self.n_tests))
        return np.asarray(self.theta, dtype=float)

    @property
    def tau_array(self) -> np.ndarray:
        """
        Within-study SDs broadcast to (2, K)
        """
        tau = np.asarray(self.tau, dtype=float)
        if tau.ndim == 1:
            return np.broadcast_to(tau[:, None], (2, self.n_tests)).copy()
        return tau

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TruthSpec":
        """
        Validate a mapping, reporting problems as a DomainError
        """
        try:
            return cls.parse_obj(data)
        except ValidationError as e:
            raise DomainError(f"invalid simulation truth: {e}") from e


def load_truth(path: Union[str, Path]) -> TruthSpec:
    """
    Read a TruthSpec from a JSON or YAML file

    Parameters
    ----------
    path: Union[str, Path]

    Returns
    -------
    TruthSpec
    """
    truth = TruthSpec.from_dict(read_yaml(path))
    logger.debug("Simulation truth loaded from %s", Path(path).name)
    return truth
