"""
Network Structure Tests
"""

import itertools

import numpy as np
import pytest

from dtanma.containers import NetworkGraph
from dtanma.dataset import build_network, check_connected, missingness_matrix, parse_dataset

HEADER = "study_id,test_id,tp,n_diseased,tn,n_healthy\n"


def _dataset(design):
    rows = [
        f"s{index},{test},5,10,5,10"
        for index, tests in enumerate(design, start=1)
        for test in tests
    ]
    return parse_dataset(HEADER + "\n".join(rows) + "\n")


def test_single_study_two_tests() -> None:
    """
    One study comparing two tests
    """
    graph = build_network(_dataset([{1, 2}]))
    assert graph.nodes == {1: 1, 2: 1}
    assert graph.edges == {(1, 2): 1}


def test_counts_by_hand() -> None:
    """
    Studies {1,2}, {1,2}, {1,3}
    """
    graph = build_network(_dataset([{1, 2}, {1, 2}, {1, 3}]))
    assert graph.nodes == {1: 3, 2: 2, 3: 1}
    assert graph.edges == {(1, 2): 2, (1, 3): 1, (2, 3): 0}
    assert graph.edge_weight(3, 1) == 1


def test_single_test_study_has_no_edges() -> None:
    """
    A one-test study adds to its node only
    """
    graph = build_network(_dataset([{4}]))
    assert graph.nodes == {4: 1}
    assert graph.edges == {}


def test_edges_match_brute_force() -> None:
    """
    Edge weights equal pairwise intersections of missingness rows
    """
    rng = np.random.default_rng(3)
    for _ in range(25):
        n_studies, n_tests = rng.integers(1, 7, size=2)
        design = []
        for _ in range(n_studies):
            tests = {int(k) + 1 for k in np.flatnonzero(rng.random(n_tests) < 0.5)}
            design.append(tests or {int(rng.integers(1, n_tests + 1))})
        ds = _dataset(design)
        r = missingness_matrix(ds).as_array()
        graph = build_network(ds)
        for (k, m) in itertools.combinations(range(ds.n_tests), 2):
            labels = ds.test_labels
            expected = int(sum(row[k] and row[m] for row in r))
            assert graph.edges[(labels[k], labels[m])] == expected


@pytest.mark.parametrize(
    "edges, connected, components",
    [
        ({(1, 2): 2, (1, 3): 0, (2, 3): 1}, True, [[1, 2, 3]]),
        ({(1, 2): 1, (1, 3): 0, (2, 3): 0}, False, [[1, 2], [3]]),
    ],
)
def test_check_connected(edges, connected, components) -> None:
    """
    Components over positive-weight edges
    """
    graph = NetworkGraph(nodes={1: 2, 2: 2, 3: 1}, edges=edges)
    report = check_connected(graph)
    assert report.connected is connected
    assert report.components == components


def test_single_test_is_connected() -> None:
    """
    K = 1 is trivially connected
    """
    report = check_connected(NetworkGraph(nodes={1: 3}, edges={}))
    assert report.connected
    assert report.components == [[1]]


def test_disconnected_network_warns(caplog: pytest.LogCaptureFixture) -> None:
    """
    Disconnection is reported, not raised
    """
    graph = build_network(_dataset([{1, 2}, {3}]))
    with caplog.at_level("WARNING"):
        report = check_connected(graph)
    assert not report.connected
    assert "disconnected" in caplog.text
