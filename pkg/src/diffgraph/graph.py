"""Differential knowledge graph: rule-based edges, statistics, paths, exports.

Nodes are sampled PDDT entries; edges are the cross product of two
predicate-selected node sets, mirroring a MATCH/CREATE pair in a graph
database.  All queries are read-only and deterministic.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .differential import dyadic_str
from .pddt import Pddt
from .simon import ParameterError

NODE_FIELDS = ("input_a", "input_b", "output", "weight", "hw")

_OPS = {"<=": operator.le, ">=": operator.ge, "=": operator.eq, "==": operator.eq}


class RuleError(ValueError):
    """Edge-rule predicate references an unknown field or operator."""


@dataclass(frozen=True)
class DiffNode:
    node_id: int
    a: int
    b: int
    c: int
    dp: float
    hw: int

    def get(self, name: str):
        try:
            return {"input_a": self.a, "input_b": self.b, "output": self.c,
                    "weight": self.dp, "hw": self.hw}[name]
        except KeyError:
            raise RuleError(f"unknown node field {name!r}; expected one of {NODE_FIELDS}")


@dataclass(frozen=True)
class Predicate:
    field: str
    op: str
    value: float

    def __post_init__(self):
        if self.field not in NODE_FIELDS:
            raise RuleError(f"unknown node field {self.field!r}; expected one of {NODE_FIELDS}")
        if self.op not in _OPS:
            raise RuleError(f"unknown operator {self.op!r}; expected one of {sorted(_OPS)}")

    def matches(self, node: DiffNode) -> bool:
        return _OPS[self.op](node.get(self.field), self.value)


@dataclass(frozen=True)
class EdgeRule:
    source_predicate: Predicate
    target_predicate: Predicate
    directed: bool = True
    allow_self_loops: bool = True
    relation_label: str = "OUTPUT_WEIGHT"


def default_edge_rule() -> EdgeRule:
    """Source nodes with zero output difference, targets with dp >= 0.5.

    This is the reading that reproduces the hub structure (a handful of
    high-probability nodes attracting every edge)."""
    return EdgeRule(Predicate("output", "=", 0), Predicate("weight", ">=", 0.5))


def printed_edge_rule() -> EdgeRule:
    """The rule as printed in the source query: output <= 0, weight <= 0.5."""
    return EdgeRule(Predicate("output", "<=", 0), Predicate("weight", "<=", 0.5))


EDGE_RULE_PRESETS = {"default": default_edge_rule, "printed": printed_edge_rule}


class DiffGraph:
    """Immutable directed graph over differential nodes."""

    def __init__(self, nodes: Sequence[DiffNode], edges: Sequence[Tuple[int, int, str]],
                 word_size: int):
        self.nodes: List[DiffNode] = list(nodes)
        self.edges: List[Tuple[int, int, str]] = sorted(edges)
        self.word_size = word_size
        self._by_id: Dict[int, DiffNode] = {nd.node_id: nd for nd in self.nodes}
        if len(self._by_id) != len(self.nodes):
            raise ParameterError("duplicate node ids")
        self.successors: Dict[int, List[int]] = {nd.node_id: [] for nd in self.nodes}
        self.predecessors: Dict[int, List[int]] = {nd.node_id: [] for nd in self.nodes}
        for src, dst, _label in self.edges:
            if src not in self._by_id or dst not in self._by_id:
                raise ParameterError(f"edge ({src}, {dst}) references a missing node")
            self.successors[src].append(dst)
            self.predecessors[dst].append(src)

    def node(self, node_id: int) -> DiffNode:
        return self._by_id[node_id]

    def neighbors(self, node_id: int) -> List[int]:
        """Adjacent nodes ignoring direction (undirected matching)."""
        return sorted(set(self.successors[node_id]) | set(self.predecessors[node_id]))

    def __eq__(self, other) -> bool:
        return (isinstance(other, DiffGraph) and self.nodes == other.nodes
                and self.edges == other.edges and self.word_size == other.word_size)


def build_graph(sample: Pddt, rule: EdgeRule) -> DiffGraph:
    """Nodes from every sample entry, edges from the rule's cross product."""
    if len(sample) == 0:
        raise ParameterError("cannot build a graph from an empty sample")
    nodes = [
        DiffNode(i, d.a, d.b, d.c, d.dp, d.hw) for i, d in enumerate(sample)
    ]
    sources = [nd.node_id for nd in nodes if rule.source_predicate.matches(nd)]
    targets = [nd.node_id for nd in nodes if rule.target_predicate.matches(nd)]
    edges = [
        (u, v, rule.relation_label)
        for u in sources for v in targets
        if rule.allow_self_loops or u != v
    ]
    return DiffGraph(nodes, edges, sample.config.word_size)


# --- statistics --------------------------------------------------------


@dataclass(frozen=True)
class GraphStats:
    node_count: int
    edge_count: int
    in_degree: Dict[int, int]
    out_degree: Dict[int, int]
    hubs: List[int]               # nodes of maximal in-degree, by id
    components: List[List[int]]   # undirected components, each sorted
    clustering: Dict[int, float]  # undirected local clustering coefficient


def graph_stats(graph: DiffGraph) -> GraphStats:
    in_deg = {nd.node_id: len(graph.predecessors[nd.node_id]) for nd in graph.nodes}
    out_deg = {nd.node_id: len(graph.successors[nd.node_id]) for nd in graph.nodes}
    max_in = max(in_deg.values(), default=0)
    hubs = sorted(i for i, d in in_deg.items() if d == max_in and max_in > 0)

    # undirected components by BFS over sorted ids
    seen = set()
    components = []
    for nd in graph.nodes:
        if nd.node_id in seen:
            continue
        comp, queue = [], [nd.node_id]
        seen.add(nd.node_id)
        while queue:
            u = queue.pop(0)
            comp.append(u)
            for v in graph.neighbors(u):
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        components.append(sorted(comp))

    clustering = {}
    for nd in graph.nodes:
        nbrs = [v for v in graph.neighbors(nd.node_id) if v != nd.node_id]
        k = len(nbrs)
        if k < 2:
            clustering[nd.node_id] = 0.0
            continue
        links = sum(
            1 for i, u in enumerate(nbrs) for v in nbrs[i + 1:]
            if v in graph.successors[u] or u in graph.successors[v]
        )
        clustering[nd.node_id] = 2.0 * links / (k * (k - 1))

    return GraphStats(len(graph.nodes), len(graph.edges), in_deg, out_deg,
                      hubs, components, clustering)


# --- path search -------------------------------------------------------


@dataclass(frozen=True)
class PathResult:
    """A simple path; lower rank_key is better: fewest hops, then highest
    accumulated node probability, then lexicographically smallest ids."""

    node_sequence: Tuple[int, ...]
    total_dp: float

    @property
    def hops(self) -> int:
        return len(self.node_sequence) - 1

    @property
    def rank_key(self):
        return (self.hops, -self.total_dp, self.node_sequence)


def find_optimal_paths(graph: DiffGraph, src: int, dst: int, max_hops: int,
                       limit: int) -> List[PathResult]:
    """All simple directed paths src -> dst within max_hops, best-ranked first."""
    for node_id, name in ((src, "src"), (dst, "dst")):
        if node_id not in graph.successors:
            raise ParameterError(f"{name} node {node_id} not in graph")
    if max_hops < 1:
        raise ParameterError(f"max_hops {max_hops} < 1")
    results: List[PathResult] = []

    def dp_of(u: int) -> float:
        return graph.node(u).dp

    if src == dst:
        return [PathResult((src,), dp_of(src))][:limit]

    path = [src]
    on_path = {src}

    def dfs(u: int, total: float):
        if len(path) - 1 >= max_hops:
            return
        for v in sorted(set(graph.successors[u])):
            if v in on_path:
                continue
            if v == dst:
                results.append(PathResult(tuple(path) + (v,), total + dp_of(v)))
                continue
            path.append(v)
            on_path.add(v)
            dfs(v, total + dp_of(v))
            path.pop()
            on_path.remove(v)

    dfs(src, dp_of(src))
    results.sort(key=lambda p: p.rank_key)
    return results[:limit]


def extract_subgraph(graph: DiffGraph, limit: int) -> DiffGraph:
    """First `limit` edges in (src, dst) order plus their incident nodes."""
    if limit < 0:
        raise ParameterError(f"negative limit {limit}")
    edges = graph.edges[:limit]
    incident = {u for u, _v, _l in edges} | {v for _u, v, _l in edges}
    nodes = [nd for nd in graph.nodes if nd.node_id in incident]
    return DiffGraph(nodes, edges, graph.word_size)


# --- exports -----------------------------------------------------------


def _hex(x: int, n: int) -> str:
    return f"0x{x:0{-(-n // 4)}x}"


def to_nodes_csv(graph: DiffGraph) -> bytes:
    n = graph.word_size
    lines = ["id,input_a,input_b,output,weight,hw"]
    for nd in graph.nodes:
        lines.append(f"{nd.node_id},{_hex(nd.a, n)},{_hex(nd.b, n)},{_hex(nd.c, n)},"
                     f"{dyadic_str(nd.hw)},{nd.hw}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def to_edges_csv(graph: DiffGraph) -> bytes:
    lines = ["src_id,dst_id,label"]
    for src, dst, label in graph.edges:
        lines.append(f"{src},{dst},{label}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def from_csv(nodes_csv: bytes, edges_csv: bytes) -> DiffGraph:
    """Rebuild a graph from its nodes+edges CSV export."""
    nodes = []
    word_size = 4
    for line in nodes_csv.decode("utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("id,"):
            continue
        i, a, b, c, _dp, hw = line.split(",")
        word_size = max(word_size, (len(a) - 2) * 4)
        nodes.append(DiffNode(int(i), int(a, 16), int(b, 16), int(c, 16),
                              2.0 ** -int(hw), int(hw)))
    edges = []
    for line in edges_csv.decode("utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("src_id,"):
            continue
        src, dst, label = line.split(",")
        edges.append((int(src), int(dst), label))
    return DiffGraph(nodes, edges, word_size)


def to_graphml(graph: DiffGraph) -> bytes:
    n = graph.word_size
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="input_a" for="node" attr.name="input_a" attr.type="string"/>',
        '  <key id="input_b" for="node" attr.name="input_b" attr.type="string"/>',
        '  <key id="output" for="node" attr.name="output" attr.type="string"/>',
        '  <key id="weight" for="node" attr.name="weight" attr.type="double"/>',
        '  <key id="hw" for="node" attr.name="hw" attr.type="int"/>',
        '  <key id="label" for="edge" attr.name="label" attr.type="string"/>',
        '  <graph id="G" edgedefault="directed">',
    ]
    for nd in graph.nodes:
        out.append(f'    <node id="n{nd.node_id}">')
        out.append(f'      <data key="input_a">{_hex(nd.a, n)}</data>')
        out.append(f'      <data key="input_b">{_hex(nd.b, n)}</data>')
        out.append(f'      <data key="output">{_hex(nd.c, n)}</data>')
        out.append(f'      <data key="weight">{dyadic_str(nd.hw)}</data>')
        out.append(f'      <data key="hw">{nd.hw}</data>')
        out.append('    </node>')
    for src, dst, label in graph.edges:
        out.append(f'    <edge source="n{src}" target="n{dst}">')
        out.append(f'      <data key="label">{label}</data>')
        out.append('    </edge>')
    out.extend(['  </graph>', '</graphml>'])
    return ("\n".join(out) + "\n").encode("utf-8")


def to_dot(graph: DiffGraph) -> bytes:
    n = graph.word_size
    out = ["digraph differentials {"]
    for nd in graph.nodes:
        out.append(
            f'  n{nd.node_id} [label="{nd.node_id}" input_a="{_hex(nd.a, n)}" '
            f'input_b="{_hex(nd.b, n)}" output="{_hex(nd.c, n)}" '
            f'weight="{dyadic_str(nd.hw)}" hw="{nd.hw}"];'
        )
    for src, dst, label in graph.edges:
        out.append(f'  n{src} -> n{dst} [label="{label}"];')
    out.append("}")
    return ("\n".join(out) + "\n").encode("utf-8")


def to_cypher(graph: DiffGraph) -> bytes:
    """CREATE statements loadable into an external graph database."""
    n = graph.word_size
    out = []
    for nd in graph.nodes:
        out.append(
            f"CREATE (:DIFFERENTIALS {{id: {nd.node_id}, input_a: '{_hex(nd.a, n)}', "
            f"input_b: '{_hex(nd.b, n)}', output: '{_hex(nd.c, n)}', "
            f"weight: {dyadic_str(nd.hw)}, hw: {nd.hw}}});"
        )
    for src, dst, label in graph.edges:
        out.append(
            f"MATCH (a:DIFFERENTIALS {{id: {src}}}), (b:DIFFERENTIALS {{id: {dst}}}) "
            f"CREATE (a)-[:{label}]->(b);"
        )
    return ("\n".join(out) + "\n").encode("utf-8")


EXPORT_FORMATS = ("csv", "graphml", "dot", "cypher")


def export_graph(graph: DiffGraph, fmt: str) -> Dict[str, bytes]:
    """Serialize to the named format; returns filename-suffix -> bytes."""
    if fmt == "csv":
        return {"nodes.csv": to_nodes_csv(graph), "edges.csv": to_edges_csv(graph)}
    if fmt == "graphml":
        return {"graphml": to_graphml(graph)}
    if fmt == "dot":
        return {"dot": to_dot(graph)}
    if fmt == "cypher":
        return {"cypher": to_cypher(graph)}
    raise ParameterError(f"unknown export format {fmt!r}; expected one of {EXPORT_FORMATS}")
