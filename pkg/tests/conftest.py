import pytest

from diffgraph.graph import DiffGraph, DiffNode, build_graph, default_edge_rule
from diffgraph.pddt import Pddt, PddtConfig


def make_hub_sample(n_nodes: int = 240, n_hubs: int = 4) -> Pddt:
    """Synthetic sampled table: every output difference is 0, exactly
    n_hubs entries have dp 0.5 (hw 1), the rest dp 0.25 or 0.125."""
    a = list(range(n_nodes))
    b = list(range(n_nodes))
    c = [0] * n_nodes
    hw = [1 if i < n_hubs else (2 if i % 2 == 0 else 3) for i in range(n_nodes)]
    return Pddt(PddtConfig(16, 0.1), a, b, c, hw)


@pytest.fixture
def hub_graph() -> DiffGraph:
    """The 240-node / 960-edge figure fixture under the default rule."""
    return build_graph(make_hub_sample(), default_edge_rule())


def make_diamond() -> DiffGraph:
    """src 0 -> {1 (dp 0.5), 2 (dp 0.125)} -> dst 3."""
    nodes = [
        DiffNode(0, 0, 0, 0, 1.0, 0),
        DiffNode(1, 1, 1, 0, 0.5, 1),
        DiffNode(2, 2, 2, 0, 0.125, 3),
        DiffNode(3, 3, 3, 0, 0.25, 2),
    ]
    edges = [(0, 1, "E"), (0, 2, "E"), (1, 3, "E"), (2, 3, "E")]
    return DiffGraph(nodes, edges, 4)


def make_two_node_graph() -> DiffGraph:
    nodes = [DiffNode(0, 1, 1, 0, 0.5, 1), DiffNode(1, 3, 3, 0, 0.25, 2)]
    return DiffGraph(nodes, [(0, 1, "OUTPUT_WEIGHT")], 4)
