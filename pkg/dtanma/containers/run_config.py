"""
Run Configuration for the Command Line
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

from pydantic import ValidationError, confloat, conint, root_validator

from dtanma.config import (
    CovarianceStructure,
    FileConfig,
    ModelChoice,
    PosteriorConfig,
    PriorPreset,
    SamplerDefaults,
    environment_seed,
)
from dtanma.containers.base_container import DtaNmaModel
from dtanma.containers.model_specs import (
    MAX_SEED,
    CovarianceSpec,
    PriorSpec,
    SamplerConfig,
)
from dtanma.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


class RunConfig(DtaNmaModel):
    """
    Everything a `fit` run needs, echoed into its run bundle

    Sampler fields are kept flat so that flags and configuration files
    share one set of keys.
    """

    model: ModelChoice = ModelChoice.ab
    data: Optional[Path] = None
    stratum: Optional[str] = None
    covariance: CovarianceStructure = CovarianceStructure.compound_symmetry
    prior: PriorPreset = PriorPreset.eq14
    fixed_tau: Optional[confloat(gt=0)] = None  # type: ignore[valid-type]
    pooled_tau: bool = False
    chains: conint(ge=1) = SamplerDefaults.N_CHAINS  # type: ignore[valid-type]
    warmup: conint(ge=1) = SamplerDefaults.N_WARMUP  # type: ignore[valid-type]
    samples: conint(ge=1) = SamplerDefaults.N_SAMPLES  # type: ignore[valid-type]
    thin: conint(ge=1) = SamplerDefaults.THIN  # type: ignore[valid-type]
    target_accept: confloat(gt=0, lt=1) = SamplerDefaults.TARGET_ACCEPT  # type: ignore[valid-type]
    max_tree_depth: conint(ge=1) = SamplerDefaults.MAX_TREE_DEPTH  # type: ignore[valid-type]
    seed: conint(ge=0, le=MAX_SEED) = FileConfig.DEFAULT_SEED  # type: ignore[valid-type]
    outdir: Path = Path(".")
    baseline: Optional[int] = None
    reference: Optional[str] = None
    comparative_only: bool = False
    mc_samples: conint(ge=1) = PosteriorConfig.MC_SAMPLES  # type: ignore[valid-type]
    covariates: Optional[List[float]] = None

    @root_validator(skip_on_failure=True)
    def flags_are_consistent(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """
        The contrast-based model and the comparative subset need a baseline
        """
        if values["baseline"] is None:
            if values["model"] == ModelChoice.cb:
                raise ValueError("--model cb requires --baseline")
            if values["comparative_only"]:
                raise ValueError("--comparative-only requires --baseline")
        if values["model"] == ModelChoice.cb and (
            values["covariance"] == CovarianceStructure.unstructured
            or values["fixed_tau"] is not None
            or values["pooled_tau"]
        ):
            raise ValueError("covariance options apply to the arm-based model only")
        if values["thin"] > values["samples"]:
            raise ValueError(
                f"thin ({values['thin']}) exceeds samples ({values['samples']})"
            )
        return values

    @property
    def sampler(self) -> SamplerConfig:
        return SamplerConfig(
            n_chains=self.chains,
            n_warmup=self.warmup,
            n_samples=self.samples,
            thin=self.thin,
            target_accept=self.target_accept,
            max_tree_depth=self.max_tree_depth,
            seed=self.seed,
        )

    @property
    def priors(self) -> PriorSpec:
        return PriorSpec.from_preset(self.prior)

    @property
    def covariance_spec(self) -> CovarianceSpec:
        return CovarianceSpec(structure=self.covariance, fixed_tau=self.fixed_tau)

    def echo(self) -> Dict[str, Any]:
        """
        Plain JSON types, as written into the run bundle
        """
        return json.loads(self.json())

    @classmethod
    def resolve(
        cls,
        flags: Optional[Mapping[str, Any]] = None,
        file_values: Optional[Mapping[str, Any]] = None,
    ) -> "RunConfig":
        """
        Merge configuration sources

        Precedence: flags > configuration file > DTA_NMA_SEED > defaults.
        Flags left at None are treated as not given.

        Parameters
        ----------
        flags: Optional[Mapping[str, Any]]
        file_values: Optional[Mapping[str, Any]]

        Returns
        -------
        RunConfig

        Raises
        ------
        ConfigurationError
            Unknown keys or values that fail validation
        """
        values: Dict[str, Any] = {}
        seed = environment_seed()
        if seed is not None:
            values["seed"] = seed
        for source in (file_values or {}, flags or {}):
            for key, value in source.items():
                key = key.replace("-", "_")
                if key not in cls.__fields__:
                    raise ConfigurationError(f"unknown configuration key: {key}")
                if value is None or value == ():
                    continue
                values[key] = list(value) if isinstance(value, tuple) else value
        try:
            config = cls(**values)
        except ValidationError as error:
            messages = "; ".join(
                f"{'.'.join(str(part) for part in item['loc'])}: {item['msg']}"
                if item["loc"] != ("__root__",)
                else item["msg"]
                for item in error.errors()
            )
            raise ConfigurationError(messages) from error
        logger.debug("Run configuration: %s", config.echo())
        return config
