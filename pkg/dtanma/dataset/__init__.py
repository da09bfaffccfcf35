"""
dataset __init__ file
"""

from .network import build_network, check_connected, missingness_matrix
from .parsing import dataset_to_frame, parse_dataset, read_dataset, serialize_dataset
from .selection import comparative_studies, restrict_to_comparative, studywise_proportions

__all__ = [
    "build_network",
    "check_connected",
    "comparative_studies",
    "dataset_to_frame",
    "missingness_matrix",
    "parse_dataset",
    "read_dataset",
    "restrict_to_comparative",
    "serialize_dataset",
    "studywise_proportions",
]
