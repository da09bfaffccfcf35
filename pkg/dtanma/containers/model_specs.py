"""
Model, Prior and Sampler Specifications
"""

import logging
from typing import Dict, Optional

from pydantic import confloat, conint, root_validator, validator

from dtanma.config import (
    CorrelationPrior,
    CovarianceStructure,
    ModelConfig,
    PriorPreset,
    SamplerDefaults,
    ScalePrior,
)
from dtanma.containers.base_container import DtaNmaModel

logger = logging.getLogger(__name__)

MAX_SEED = 2**64 - 1


class CovarianceSpec(DtaNmaModel):
    """
    Within-Study Covariance of the Arm Errors

    Under compound symmetry every test shares one within-study SD per
    outcome. Setting `fixed_tau` removes the within-study SDs from the
    parameter vector and holds them at that constant.
    """

    structure: CovarianceStructure = CovarianceStructure.compound_symmetry
    fixed_tau: Optional[confloat(gt=0)] = None  # type: ignore[valid-type]

    @property
    def compound_symmetry(self) -> bool:
        return self.structure == CovarianceStructure.compound_symmetry


class PriorSpec(DtaNmaModel):
    """
    Prior Choices for the Hyperparameters
    """

    mean_sd: confloat(gt=0) = ModelConfig.MEAN_PRIOR_SD  # type: ignore[valid-type]
    scale_prior: ScalePrior = ScalePrior.uniform
    correlation_prior: CorrelationPrior = CorrelationPrior.atanh_normal
    lkj_shape: float = ModelConfig.LKJ_MINIMUM_SHAPE
    uniform_upper: confloat(gt=0) = ModelConfig.UNIFORM_SCALE_UPPER  # type: ignore[valid-type]
    half_cauchy_scale: confloat(gt=0) = ModelConfig.HALF_CAUCHY_SCALE  # type: ignore[valid-type]

    @validator("lkj_shape")
    def lkj_shape_at_least_one(cls, value: float) -> float:
        """
        LKJ shape must be >= 1
        """
        if value < ModelConfig.LKJ_MINIMUM_SHAPE:
            raise ValueError(f"LKJ shape must be >= 1, got {value}")
        return value

    @classmethod
    def from_preset(cls, preset: PriorPreset) -> "PriorSpec":
        """
        Build one of the named prior configurations

        Parameters
        ----------
        preset: PriorPreset

        Returns
        -------
        PriorSpec
        """
        scale_prior, correlation_prior, shape = ModelConfig.PRESETS[PriorPreset(preset)]
        return cls(
            scale_prior=scale_prior,
            correlation_prior=correlation_prior,
            lkj_shape=shape,
        )


class SamplerConfig(DtaNmaModel):
    """
    Settings for one sampling run
    """

    n_chains: conint(ge=1) = SamplerDefaults.N_CHAINS  # type: ignore[valid-type]
    n_warmup: conint(ge=1) = SamplerDefaults.N_WARMUP  # type: ignore[valid-type]
    n_samples: conint(ge=1) = SamplerDefaults.N_SAMPLES  # type: ignore[valid-type]
    thin: conint(ge=1) = SamplerDefaults.THIN  # type: ignore[valid-type]
    target_accept: confloat(gt=0, lt=1) = SamplerDefaults.TARGET_ACCEPT  # type: ignore[valid-type]
    max_tree_depth: conint(ge=1) = SamplerDefaults.MAX_TREE_DEPTH  # type: ignore[valid-type]
    seed: conint(ge=0, le=MAX_SEED) = 0  # type: ignore[valid-type]
    init_radius: confloat(gt=0) = SamplerDefaults.INIT_RADIUS  # type: ignore[valid-type]

    @property
    def draws_per_chain(self) -> int:
        """
        Draws kept per chain after thinning
        """
        return self.n_samples // self.thin

    @root_validator(skip_on_failure=True)
    def thin_keeps_a_draw(cls, values: Dict[str, int]) -> Dict[str, int]:
        """
        Thinning must leave at least one draw
        """
        if values["thin"] > values["n_samples"]:
            raise ValueError(
                f"thin ({values['thin']}) exceeds n_samples ({values['n_samples']})"
            )
        return values
