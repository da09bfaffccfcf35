"""
Utils __init__ file
"""

from .logging_utils import describe_labels, log_dtanma
from .yaml_utils import read_yaml

__all__ = ["describe_labels", "log_dtanma", "read_yaml"]
