"""
posterior __init__ file
"""

from .accuracy import (
    CONDITIONAL,
    MARGINAL,
    accuracy_draws,
    accuracy_labels,
    conditional_accuracy,
    marginal_accuracy,
    marginal_accuracy_arrays,
)
from .ranking import (
    RelativeMeasures,
    dominance_counts,
    dor,
    relative_measures,
    superiority_index,
    superiority_values,
)
from .summary import percentile, summarize
from .tables import build_accuracy_summary
from .variance import variance_partition

__all__ = [
    "CONDITIONAL",
    "MARGINAL",
    "RelativeMeasures",
    "accuracy_draws",
    "accuracy_labels",
    "build_accuracy_summary",
    "conditional_accuracy",
    "dominance_counts",
    "dor",
    "marginal_accuracy",
    "marginal_accuracy_arrays",
    "percentile",
    "relative_measures",
    "summarize",
    "superiority_index",
    "superiority_values",
    "variance_partition",
]
