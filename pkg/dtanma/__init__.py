"""
dtanma: network meta-analysis of diagnostic test accuracy
"""

from dtanma._version import __application__, __version__
from dtanma.containers import NetworkDataset, RunConfig
from dtanma.dataset import parse_dataset, read_dataset
from dtanma.models import MODEL_REGISTRY, ArmBasedModel, ContrastBasedModel
from dtanma.sampler import Draws, diagnostics, sample_model

__all__ = [
    "ArmBasedModel",
    "ContrastBasedModel",
    "Draws",
    "MODEL_REGISTRY",
    "NetworkDataset",
    "RunConfig",
    "__application__",
    "__version__",
    "diagnostics",
    "parse_dataset",
    "read_dataset",
    "sample_model",
]
