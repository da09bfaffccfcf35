"""
Network Diagram of Tests and Direct Comparisons
"""

import logging
import math
from pathlib import Path
from typing import Dict, Tuple, Union

from dtanma.containers import NetworkGraph
from dtanma.exceptions import DomainError
from dtanma.report.svg import SvgDocument

logger = logging.getLogger(__name__)

CANVAS_SIZE = 420.0
LAYOUT_RADIUS = 150.0
MAX_NODE_RADIUS = 28.0
MAX_EDGE_WIDTH = 10.0
NODE_COLOR = "#4c72b0"
EDGE_COLOR = "#8c8c8c"


def node_positions(graph: NetworkGraph) -> Dict[int, Tuple[float, float]]:
    """
    Tests evenly spaced on a circle, first test at the top
    """
    labels = sorted(graph.nodes)
    center = CANVAS_SIZE / 2.0
    if len(labels) == 1:
        return {labels[0]: (center, center)}
    return {
        label: (
            center + LAYOUT_RADIUS * math.sin(2.0 * math.pi * index / len(labels)),
            center - LAYOUT_RADIUS * math.cos(2.0 * math.pi * index / len(labels)),
        )
        for index, label in enumerate(labels)
    }


def node_radius(count: int, max_count: int) -> float:
    """
    Node area proportional to the number of studies evaluating the test
    """
    if max_count <= 0:
        return 0.0
    return MAX_NODE_RADIUS * math.sqrt(count / max_count)


def network_plot(graph: NetworkGraph, outpath: Union[str, Path]) -> Path:
    """
    Draw the test network

    Node radius grows with the square root of the test's study count and
    edge width with the number of studies comparing both tests; pairs
    never compared directly get no edge.

    Parameters
    ----------
    graph: NetworkGraph
    outpath: Union[str, Path]

    Returns
    -------
    Path
    """
    if not graph.nodes:
        raise DomainError("the network has no tests")
    positions = node_positions(graph)
    max_count = max(graph.nodes.values())
    max_weight = max(graph.edges.values(), default=0)
    document = SvgDocument(CANVAS_SIZE, CANVAS_SIZE, title="Test network")
    edges = document.group("edges")
    for (first, second), weight in sorted(graph.edges.items()):
        if weight <= 0:
            continue
        document.line(
            positions[first],
            positions[second],
            "network-edge",
            stroke=EDGE_COLOR,
            width=MAX_EDGE_WIDTH * weight / max_weight,
            parent=edges,
        )
    nodes = document.group("nodes")
    for label in sorted(graph.nodes):
        x, y = positions[label]
        radius = node_radius(graph.nodes[label], max_count)
        document.circle((x, y), radius, "network-node", fill=NODE_COLOR, parent=nodes)
        document.text(
            (x, y - radius - 6), f"{label} ({graph.nodes[label]})", "node-label",
            parent=nodes,
        )
    logger.debug("Network plot: %d tests, max %d studies", len(graph.nodes), max_count)
    return document.write(outpath)
