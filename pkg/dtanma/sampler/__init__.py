"""
sampler __init__ file
"""

from .diagnostics import diagnostics, effective_sample_size, split_rhat
from .draws import Draws
from .nuts import Transition, nuts_transition
from .runner import run_chains, sample_model, thin_draws

__all__ = [
    "Draws",
    "Transition",
    "diagnostics",
    "effective_sample_size",
    "nuts_transition",
    "run_chains",
    "sample_model",
    "split_rhat",
    "thin_draws",
]
