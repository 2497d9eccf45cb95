"""Monte Carlo search baseline and comparison against graph-guided search.

Playouts are uniform random descents through the directed graph; each
playout seeds its own RNG from (seed, playout index), so reports are
reproducible and independent of execution order.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .graph import DiffGraph, DiffNode, PathResult, find_optimal_paths
from .simon import ParameterError


@dataclass(frozen=True)
class McsConfig:
    playouts: int
    seed: int = 0
    max_depth: int = 16
    target_hw: float = 0.0
    target_node: Optional[int] = None

    def __post_init__(self):
        if self.playouts < 1:
            raise ParameterError(f"playouts {self.playouts} < 1")
        if self.max_depth < 1:
            raise ParameterError(f"max_depth {self.max_depth} < 1")


@dataclass
class SearchReport:
    method: str
    seed: int
    playouts_or_expansions: int
    best_path: Optional[PathResult]
    elapsed_ms: float
    trace: List[Optional[PathResult]] = field(default_factory=list)
    walk_totals: List[float] = field(default_factory=list)

    def to_csv_row(self) -> str:
        hops = self.best_path.hops if self.best_path else ""
        dp = self.best_path.total_dp if self.best_path else ""
        return (f"{self.method},{self.seed},{self.playouts_or_expansions},"
                f"{hops},{dp},{self.playouts_or_expansions},{self.elapsed_ms:.3f}")

    @staticmethod
    def csv_header() -> str:
        return "method,seed,playouts,best_hops,best_total_dp,expansions,elapsed_ms"


def _playout(graph: DiffGraph, start: int, rng: random.Random,
             max_depth: int) -> Tuple[List[int], float]:
    """One random walk over unvisited successors, capped at max_depth hops."""
    path = [start]
    visited = {start}
    total = graph.node(start).dp
    while len(path) - 1 < max_depth:
        options = [v for v in sorted(set(graph.successors[path[-1]])) if v not in visited]
        if not options:
            break
        nxt = rng.choice(options)
        path.append(nxt)
        visited.add(nxt)
        total += graph.node(nxt).dp
    return path, total


def _candidate(graph: DiffGraph, path: List[int],
               target: Optional[int]) -> Optional[PathResult]:
    """The scored path a walk contributes: its prefix up to the target
    node when one is set, otherwise the complete walk."""
    if target is not None:
        if target not in path:
            return None
        path = path[: path.index(target) + 1]
    total = sum(graph.node(u).dp for u in path)
    return PathResult(tuple(path), total)


def mcs_search(graph: DiffGraph, start: int, config: McsConfig) -> SearchReport:
    """Seeded flat Monte Carlo search; returns the best-so-far path."""
    if start not in graph.successors:
        raise ParameterError(f"start node {start} not in graph")
    t0 = time.perf_counter()
    best: Optional[PathResult] = None
    trace: List[Optional[PathResult]] = []
    walk_totals: List[float] = []
    for i in range(config.playouts):
        rng = random.Random(f"mcs:{config.seed}:{i}")
        path, total = _playout(graph, start, rng, config.max_depth)
        walk_totals.append(total)
        cand = _candidate(graph, path, config.target_node)
        if cand is not None and len(cand.node_sequence) > 1:
            if best is None or cand.rank_key < best.rank_key:
                best = cand
        trace.append(best)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return SearchReport("mcs", config.seed, config.playouts, best, elapsed,
                        trace, walk_totals)


def graph_guided_search(graph: DiffGraph, start: int, dst: int,
                        max_hops: int) -> SearchReport:
    """Deterministic exhaustive search under the shared ranking."""
    t0 = time.perf_counter()
    paths = find_optimal_paths(graph, start, dst, max_hops, limit=1)
    elapsed = (time.perf_counter() - t0) * 1000.0
    best = paths[0] if paths else None
    # expansions: simple paths touched is not tracked; report node count bound
    return SearchReport("graph", 0, len(graph.nodes), best, elapsed)


def compare(graph: DiffGraph, start: int, dst: int,
            mcs_config: McsConfig) -> Tuple[SearchReport, SearchReport]:
    """Run MCS and graph-guided search on identical inputs.

    The deterministic search is exhaustive, so its best path must rank at
    least as well as anything the playouts found; that is asserted here.
    """
    cfg = McsConfig(mcs_config.playouts, mcs_config.seed, mcs_config.max_depth,
                    mcs_config.target_hw, dst)
    mcs_report = mcs_search(graph, start, cfg)
    graph_report = graph_guided_search(graph, start, dst, cfg.max_depth)
    if mcs_report.best_path is not None:
        assert graph_report.best_path is not None
        assert graph_report.best_path.rank_key <= mcs_report.best_path.rank_key, (
            "deterministic search must dominate sampled search")
    return mcs_report, graph_report


# --- toy tree fixture --------------------------------------------------

# Complete binary tree of depth 2 (7 nodes, 4 leaves).  Node probabilities
# are chosen so that exactly 2 of the 4 equally likely root-to-leaf walks
# accumulate total probability <= 1:
#   root(0.125) -> L(0.125) -> LL(0.125)  total 0.375
#                            -> LR(0.5)    total 0.75
#             -> R(0.5)   -> RL(0.5)    total 1.125
#                            -> RR(0.5)    total 1.125
FIG_TREE_DEPTH = 2
FIG_TREE_LEAVES = 4
_FIG_TREE_HW = [3, 3, 1, 3, 1, 1, 1]  # ids 0..6: root, L, R, LL, LR, RL, RR
_FIG_TREE_EDGES = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]


def build_fig_tree_fixture() -> DiffGraph:
    """Deterministic toy tree where half of all uniform root-to-leaf walks
    have total probability <= 1."""
    nodes = [DiffNode(i, i, i, 0, 2.0 ** -hw, hw) for i, hw in enumerate(_FIG_TREE_HW)]
    edges = [(u, v, "OUTPUT_WEIGHT") for u, v in _FIG_TREE_EDGES]
    return DiffGraph(nodes, edges, 4)


def leaf_paths(graph: DiffGraph, root: int) -> List[PathResult]:
    """All root-to-leaf simple paths in a directed tree, by node sequence."""
    results: List[PathResult] = []

    def walk(path: List[int], total: float):
        succ = sorted(set(graph.successors[path[-1]]) - set(path))
        if not succ:
            results.append(PathResult(tuple(path), total))
            return
        for v in succ:
            walk(path + [v], total + graph.node(v).dp)

    walk([root], graph.node(root).dp)
    return results


def min_weight_leaf_path(graph: DiffGraph, root: int) -> PathResult:
    """Exhaustive deterministic answer to the MCS objective on a tree:
    the root-to-leaf path with the smallest accumulated probability."""
    return min(leaf_paths(graph, root), key=lambda p: (p.total_dp, p.node_sequence))
