"""
Comparison Network Structure
"""

import logging
from itertools import combinations
from typing import Dict, List, Tuple

import numpy as np

from dtanma.containers import (
    ConnectivityReport,
    MissingnessMatrix,
    NetworkDataset,
    NetworkGraph,
)

logger = logging.getLogger(__name__)


def missingness_matrix(ds: NetworkDataset) -> MissingnessMatrix:
    """
    Study-by-test indicator of reported arms

    Parameters
    ----------
    ds: NetworkDataset

    Returns
    -------
    MissingnessMatrix
    """
    arrays = ds.arrays
    r = np.zeros((ds.n_studies, ds.n_tests), dtype=int)
    r[arrays.arm_study, arrays.arm_test] = 1
    return MissingnessMatrix(
        study_ids=tuple(ds.study_ids),
        test_labels=tuple(ds.test_labels),
        r=tuple(tuple(int(value) for value in row) for row in r),
    )


def build_network(ds: NetworkDataset) -> NetworkGraph:
    """
    Count studies per test and direct comparisons per test pair

    Parameters
    ----------
    ds: NetworkDataset

    Returns
    -------
    NetworkGraph
    """
    r = missingness_matrix(ds).as_array()
    labels = ds.test_labels
    co_occurrence = r.T @ r
    nodes = {label: int(co_occurrence[k, k]) for k, label in enumerate(labels)}
    edges: Dict[Tuple[int, int], int] = {
        (labels[k], labels[m]): int(co_occurrence[k, m])
        for k, m in combinations(range(len(labels)), 2)
    }
    return NetworkGraph(nodes=nodes, edges=edges)


def check_connected(g: NetworkGraph) -> ConnectivityReport:
    """
    Connected components over direct comparisons

    Tests with no studies are ignored. A single test is connected.

    Parameters
    ----------
    g: NetworkGraph

    Returns
    -------
    ConnectivityReport
    """
    labels = [label for label, count in sorted(g.nodes.items()) if count > 0]
    parent = {label: label for label in labels}

    def find(label: int) -> int:
        while parent[label] != label:
            parent[label] = parent[parent[label]]
            label = parent[label]
        return label

    for (first, second), weight in g.edges.items():
        if weight > 0 and first in parent and second in parent:
            root_first, root_second = find(first), find(second)
            if root_first != root_second:
                parent[max(root_first, root_second)] = min(root_first, root_second)
    grouped: Dict[int, List[int]] = {}
    for label in labels:
        grouped.setdefault(find(label), []).append(label)
    components = sorted(grouped.values(), key=lambda component: component[0])
    connected = len(components) <= 1
    if not connected:
        logger.warning(
            "The test network is disconnected: %s components %s",
            len(components),
            components,
        )
    return ConnectivityReport(connected=connected, components=components)
