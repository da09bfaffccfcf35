"""
report __init__ file
"""

from .export import (
    bundle_layout,
    export_results,
    ranking_frame,
    read_bundle,
    summary_frame,
    write_frame,
)
from .forest import forest_plot
from .network_plot import network_plot
from .svg import SvgDocument
from .trace import trace_plot

__all__ = [
    "SvgDocument",
    "bundle_layout",
    "export_results",
    "forest_plot",
    "network_plot",
    "ranking_frame",
    "read_bundle",
    "summary_frame",
    "trace_plot",
    "write_frame",
]
