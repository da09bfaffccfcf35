"""
simulate __init__ file
"""

from .generator import LatentRecord, simulate_network
from .missingness import MarDeletion, impose_mar
from .truth import TruthSpec, load_truth

__all__ = [
    "LatentRecord",
    "MarDeletion",
    "TruthSpec",
    "impose_mar",
    "load_truth",
    "simulate_network",
]
