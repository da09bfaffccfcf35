"""
Config __init__ file
"""

from .data_columns import DatasetColumns, DrawsColumns, Outcomes, SummaryColumns
from .file_config import FileConfig, environment_seed
from .model_config import (
    CorrelationPrior,
    CovarianceStructure,
    DiagnosticsConfig,
    ModelChoice,
    ModelConfig,
    PosteriorConfig,
    PriorPreset,
    SamplerDefaults,
    ScalePrior,
)

__all__ = [
    "CorrelationPrior",
    "CovarianceStructure",
    "DatasetColumns",
    "DiagnosticsConfig",
    "DrawsColumns",
    "FileConfig",
    "ModelChoice",
    "ModelConfig",
    "Outcomes",
    "PosteriorConfig",
    "PriorPreset",
    "SamplerDefaults",
    "ScalePrior",
    "SummaryColumns",
    "environment_seed",
]
