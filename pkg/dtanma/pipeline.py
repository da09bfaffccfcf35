"""
Fit, Summarise, Write and Reload Runs
"""

import logging
from pathlib import Path
from typing import Any, Dict, NamedTuple, Optional, Sequence, Union

from dtanma.config import FileConfig, ModelChoice, PosteriorConfig
from dtanma.containers import (
    AccuracySummary,
    Diagnostics,
    NetworkDataset,
    RunConfig,
    VarianceReport,
)
from dtanma.dataset import (
    build_network,
    check_connected,
    read_dataset,
    restrict_to_comparative,
)
from dtanma.exceptions import ConfigurationError
from dtanma.models import MODEL_REGISTRY, ArmBasedModel, BaseModel, ContrastBasedModel
from dtanma.posterior import (
    CONDITIONAL,
    MARGINAL,
    accuracy_draws,
    accuracy_labels,
    build_accuracy_summary,
    variance_partition,
)
from dtanma.report import bundle_layout, export_results, read_bundle
from dtanma.sampler import Draws, diagnostics, sample_model

logger = logging.getLogger(__name__)


class FitResult(NamedTuple):
    """
    Everything produced by one fit
    """

    dataset: NetworkDataset
    model: BaseModel
    draws: Draws
    diagnostics: Diagnostics
    summary: AccuracySummary
    variance: Optional[VarianceReport]


class StoredRun(NamedTuple):
    """
    A run read back from its output directory
    """

    directory: Path
    bundle: Dict[str, Any]
    config: RunConfig
    draws: Draws

    @property
    def summary(self) -> AccuracySummary:
        return AccuracySummary.parse_obj(self.bundle["summary"])


def load_run_dataset(config: RunConfig) -> NetworkDataset:
    """
    Read the dataset of a run and apply the comparative restriction
    """
    if config.data is None:
        raise ConfigurationError("no dataset given: pass --data or set `data`")
    ds = read_dataset(config.data, stratum_filter=config.stratum)
    if config.comparative_only:
        ds = restrict_to_comparative(ds, baseline_test=int(config.baseline))  # type: ignore[arg-type]
    check_connected(build_network(ds))
    return ds


def build_model(config: RunConfig, ds: NetworkDataset) -> BaseModel:
    """
    Instantiate the registered model the configuration asks for
    """
    model_class = MODEL_REGISTRY[ModelChoice(config.model).value]
    if issubclass(model_class, ContrastBasedModel):
        return model_class(ds, baseline_test=config.baseline, priors=config.priors)
    if issubclass(model_class, ArmBasedModel):
        return model_class(ds, priors=config.priors, covariance=config.covariance_spec)
    return model_class(ds, priors=config.priors)


def accuracy_kind(draws: Draws) -> str:
    return CONDITIONAL if "accuracy" in draws.layout else MARGINAL


def summarize_draws(
    draws: Draws,
    reference: Optional[str] = None,
    stratum: Optional[str] = None,
    mc_samples: int = PosteriorConfig.MC_SAMPLES,
    seed: int = 0,
    covariates: Optional[Sequence[float]] = None,
    tie_tol: float = PosteriorConfig.TIE_TOLERANCE,
    pooled_tau: bool = False,
):
    """
    Accuracy summary and, for arm-based draws, the variance partition

    Returns
    -------
    Tuple[AccuracySummary, Optional[VarianceReport]]
    """
    kind = accuracy_kind(draws)
    accuracy = accuracy_draws(
        draws,
        kind=kind,
        mc_samples=mc_samples,
        seed=seed,
        covariates=covariates,
        pooled_tau=pooled_tau,
    )
    summary = build_accuracy_summary(
        accuracy,
        accuracy_labels(draws),
        kind=kind,
        reference=reference,
        stratum=stratum,
        tie_tol=tie_tol,
    )
    variance = variance_partition(draws, stratum=stratum) if kind == MARGINAL else None
    return summary, variance


def fit_run(config: RunConfig) -> FitResult:
    """
    Read, fit and summarise

    Parameters
    ----------
    config: RunConfig

    Returns
    -------
    FitResult
    """
    ds = load_run_dataset(config)
    model = build_model(config, ds)
    draws = sample_model(model, config.sampler)
    result = diagnostics(draws)
    summary, variance = summarize_draws(
        draws,
        reference=config.reference,
        stratum=config.stratum,
        mc_samples=config.mc_samples,
        seed=config.seed,
        covariates=config.covariates,
        pooled_tau=config.pooled_tau,
    )
    return FitResult(
        dataset=ds,
        model=model,
        draws=draws,
        diagnostics=result,
        summary=summary,
        variance=variance,
    )


def write_run(result: FitResult, config: RunConfig) -> Dict[str, Path]:
    """
    Draws CSV, summary CSV and the JSON run bundle under `config.outdir`
    """
    directory = Path(config.outdir)
    directory.mkdir(parents=True, exist_ok=True)
    draws_path = result.draws.to_csv(directory / FileConfig.DRAWS_FILE)
    summary_path, bundle_path = export_results(
        result.summary,
        result.variance,
        directory,
        diagnostics=result.diagnostics,
        config=config.echo(),
        layout=result.draws.layout,
    )
    return {"draws": draws_path, "summary": summary_path, "diagnostics": bundle_path}


def load_run(directory: Union[str, Path]) -> StoredRun:
    """
    Read a run directory written by `write_run`

    Parameters
    ----------
    directory: Union[str, Path]

    Returns
    -------
    StoredRun
    """
    directory = Path(directory)
    bundle = read_bundle(directory)
    config = RunConfig.resolve(file_values=bundle.get("config") or {})
    draws = Draws.from_csv(directory / FileConfig.DRAWS_FILE, layout=bundle_layout(bundle))
    logger.debug("Loaded run %s: %r", directory, draws)
    return StoredRun(directory=directory, bundle=bundle, config=config, draws=draws)
