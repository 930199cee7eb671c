import itertools
import os

import networkx as nx
import pytest

from simplets.core import SimplicialComplex, primal_graph
from simplets.synthetic import random_complex


def pytest_collection_modifyitems(config, items):
    if os.environ.get("SIMPLETS_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="set SIMPLETS_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def triangle_with_tail():
    return SimplicialComplex.from_simplices([[0, 1, 2], [2, 3]])


def to_networkx(graph):
    g = nx.Graph()
    g.add_nodes_from(range(graph.num_nodes))
    g.add_edges_from(graph.edges())
    return g


def brute_spanning_trees(nodes, edges):
    """Count spanning trees by trying every (n-1)-edge subset."""
    nodes = list(nodes)
    if len(nodes) == 1:
        return 1
    count = 0
    for sub in itertools.combinations(edges, len(nodes) - 1):
        g = nx.Graph()
        g.add_nodes_from(nodes)
        g.add_edges_from(sub)
        if nx.is_connected(g):
            count += 1
    return count


def random_complexes(count, n_max=25, m_max=60, size_max=5, seed=0):
    import numpy as np

    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(6, n_max + 1))
        m = int(rng.integers(3, m_max + 1))
        out.append(random_complex(n, m, max_size=size_max, rng_seed=[seed, i], min_size=2))
    return out


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
