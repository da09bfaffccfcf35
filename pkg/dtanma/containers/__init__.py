"""
dtanma Data Storage Objects
"""

from .base_container import DtaNmaModel
from .data_containers import (
    ConnectivityReport,
    DatasetArrays,
    MissingnessMatrix,
    NetworkDataset,
    NetworkGraph,
    StudyArm,
)
from .model_specs import CovarianceSpec, PriorSpec, SamplerConfig
from .results import (
    AccuracySummary,
    Diagnostics,
    IntervalSummary,
    ParameterDiagnostics,
    SummaryRow,
    SuperioritySummary,
    VarianceReport,
    format_interval,
)
from .run_config import RunConfig

__all__ = [
    "AccuracySummary",
    "ConnectivityReport",
    "CovarianceSpec",
    "DatasetArrays",
    "Diagnostics",
    "DtaNmaModel",
    "IntervalSummary",
    "MissingnessMatrix",
    "NetworkDataset",
    "NetworkGraph",
    "ParameterDiagnostics",
    "PriorSpec",
    "RunConfig",
    "SamplerConfig",
    "StudyArm",
    "SummaryRow",
    "SuperioritySummary",
    "VarianceReport",
    "format_interval",
]
