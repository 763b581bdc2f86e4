"""MST-based contiguous grouping (SKATER-style tree partitioning).

Edge costs are Euclidean distances between feature rows; a minimum
spanning tree of the contiguity graph is cut greedily, one edge at a
time, each cut maximizing the drop in total within-group sum of squared
deviations (Assuncao et al., 2006). Every group stays connected in the
contiguity graph by construction.
"""

from __future__ import annotations

import logging
import operator
from dataclasses import dataclass

import numpy as np

from .contiguity import ContiguityGraph
from .errors import InfeasibleError, InputError
from .validation import as_feature_values, check_alignment, check_members

logger = logging.getLogger("regionkit.skater")


@dataclass(frozen=True)
class WeightedGraph:
    """A contiguity graph with per-edge feature-space costs."""

    base: ContiguityGraph
    cost: np.ndarray

    def __post_init__(self):
        if self.cost.shape != (len(self.base.edges),):
            raise InputError("cost array not aligned with edges")
        if len(self.base.edges) and (not np.all(np.isfinite(self.cost)) or self.cost.min() < 0):
            raise InputError("edge costs must be finite and non-negative")
        self.cost.setflags(write=False)


@dataclass(frozen=True)
class Partition:
    """Assignment of each region to one of k contiguous groups.

    ``assignment`` holds labels 1..k aligned with the input row order;
    ``cut_sequence`` lists the removed tree edges, in cut order, as
    (smaller, larger) node-index pairs.
    """

    k: int
    assignment: np.ndarray
    cut_sequence: tuple[tuple[int, int], ...]
    within_ssd: float

    def __post_init__(self):
        labels = set(int(x) for x in self.assignment)
        if labels != set(range(1, self.k + 1)):
            raise InputError(f"assignment must use every label in 1..{self.k}")
        self.assignment.setflags(write=False)

    def groups(self) -> list[list[int]]:
        """Member indices per group, index g holds group g+1."""
        out: list[list[int]] = [[] for _ in range(self.k)]
        for i, lab in enumerate(self.assignment):
            out[int(lab) - 1].append(i)
        return out


def edge_costs(graph: ContiguityGraph, features) -> WeightedGraph:
    """Attach Euclidean feature-distance costs to every contiguity edge."""
    values = check_alignment(graph, features)
    if graph.edges:
        u = np.fromiter((e[0] for e in graph.edges), dtype=int)
        v = np.fromiter((e[1] for e in graph.edges), dtype=int)
        diff = values[u] - values[v]
        cost = np.sqrt(np.sum(diff * diff, axis=1))
    else:
        cost = np.zeros(0)
    return WeightedGraph(base=graph, cost=cost)


class _DisjointSets:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def mst(wg: WeightedGraph) -> tuple[tuple[int, int], ...]:
    """Minimum spanning tree edge set of a connected weighted graph.

    Edges are accreted in ascending (cost, min endpoint, max endpoint)
    order, skipping cycle-closing candidates, so the result is
    deterministic even under cost ties.

    Raises
    ------
    InfeasibleError
        If the graph is disconnected; run repair_connectivity first.
    """
    n = wg.base.n_nodes
    order = sorted(range(len(wg.base.edges)), key=lambda i: (wg.cost[i], wg.base.edges[i]))
    sets = _DisjointSets(n)
    tree = []
    for i in order:
        u, v = wg.base.edges[i]
        if sets.union(u, v):
            tree.append((u, v))
            if len(tree) == n - 1:
                break
    if len(tree) < n - 1:
        raise InfeasibleError(
            "graph is disconnected; apply repair_connectivity before building the spanning tree"
        )
    return tuple(sorted(tree))


def ssd(features, members) -> float:
    """Sum of squared deviations of member rows about their centroid."""
    values = as_feature_values(features)
    idx = check_members(members, values.shape[0])
    return _ssd_rows(values, idx)


def _ssd_rows(values: np.ndarray, idx) -> float:
    sub = values[idx]
    dev = sub - sub.mean(axis=0)
    return float((dev * dev).sum())


def _tree_members(edges) -> list[int]:
    nodes = set()
    for u, v in edges:
        nodes.add(u)
        nodes.add(v)
    return sorted(nodes)


def _split_members(edges, cut, members) -> tuple[list[int], list[int]]:
    """Member sets of the two sides created by removing ``cut`` from a tree.

    With ``cut=None`` nothing is removed: the first side is the component
    containing the smallest member (a tree connectivity probe).
    """
    adj: dict[int, list[int]] = {m: [] for m in members}
    for u, v in edges:
        if cut is not None and (u, v) == cut:
            continue
        adj[u].append(v)
        adj[v].append(u)
    u0 = members[0] if cut is None else cut[0]
    side = {u0}
    stack = [u0]
    while stack:
        node = stack.pop()
        for nb in adj[node]:
            if nb not in side:
                side.add(nb)
                stack.append(nb)
    other = [m for m in members if m not in side]
    return sorted(side), other


def _best_cut_rows(values: np.ndarray, edges) -> tuple[tuple[int, int], float]:
    """Best single cut of a tree given canonical (u < v) edges.

    Ties on the SSD decrease resolve toward the smaller minimum endpoint,
    then the smaller maximum endpoint.
    """
    members = _tree_members(edges)
    total = _ssd_rows(values, members)
    best_key = None
    best = None
    for cut in sorted(edges):
        side_a, side_b = _split_members(edges, cut, members)
        delta = total - _ssd_rows(values, side_a) - _ssd_rows(values, side_b)
        delta = max(delta, 0.0)
        key = (-delta, cut[0], cut[1])
        if best_key is None or key < best_key:
            best_key, best = key, (cut, delta)
    return best


def best_cut(tree, features) -> tuple[tuple[int, int], float]:
    """Pick the tree edge whose removal most reduces within-group SSD.

    Parameters
    ----------
    tree : iterable of (int, int)
        Edge set of a tree over some subset of the feature rows.
    features : FeatureMatrix or array-like

    Returns
    -------
    (edge, ssd_decrease)
        The chosen edge as a (smaller, larger) index pair and its
        non-negative SSD decrease.
    """
    values = as_feature_values(features)
    edges = [tuple(sorted((int(u), int(v)))) for u, v in tree]
    if not edges:
        raise InputError("no cut available: tree has no edges")
    members = _tree_members(edges)
    if members[0] < 0 or members[-1] >= values.shape[0]:
        raise InputError("tree references rows beyond the feature matrix")
    if len(set(edges)) != len(members) - 1:
        raise InputError("edges do not form a tree")
    reachable, _ = _split_members(edges, None, members)
    if len(reachable) != len(members):
        raise InputError("edges do not form a tree")
    return _best_cut_rows(values, edges)


class _Subtree:
    __slots__ = ("members", "edges", "best")

    def __init__(self, members, edges, values):
        self.members = members
        self.edges = edges
        self.best = _best_cut_rows(values, edges) if edges else None


def _canonical_order(graph: ContiguityGraph) -> list[int]:
    return sorted(range(graph.n_nodes), key=lambda i: graph.node_ids[i])


def nested_partitions(graph: ContiguityGraph, features, k_max: int) -> list[Partition]:
    """Greedy cut sequence to k_max groups; returns partitions for k = 1..k_max.

    The sequence is nested: the (k+1)-group partition refines the k-group
    one by exactly one additional cut. Tie-breaking uses the canonical
    sort order of region ids, so permuting the input rows permutes labels
    but never changes the induced set partition.
    """
    values = check_alignment(graph, features)
    n = graph.n_nodes
    if isinstance(k_max, bool):
        raise InputError("k must be an integer")
    try:
        k_max = operator.index(k_max)
    except TypeError:
        raise InputError("k must be an integer") from None
    if k_max < 1 or k_max > n:
        raise InputError(f"k must be in 1..{n}, got {k_max}")

    # canonical index space: rank r <-> original row order[r]
    order = _canonical_order(graph)
    rank = {orig: r for r, orig in enumerate(order)}
    canon_values = values[order]
    canon_edges = tuple(
        tuple(sorted((rank[u], rank[v]))) for u, v in graph.edges
    )
    canon_graph = ContiguityGraph(
        node_ids=tuple(graph.node_ids[i] for i in order),
        edges=tuple(sorted(canon_edges)),
        provenance=("explicit",) * len(canon_edges),
    )
    tree = mst(edge_costs(canon_graph, canon_values))

    forest = [_Subtree(list(range(n)), list(tree), canon_values)]
    cut_sequence: list[tuple[int, int]] = []
    partitions = [_snapshot(forest, cut_sequence, order, canon_values, n)]
    for _ in range(k_max - 1):
        candidates = [
            (-(st.best[1]), st.best[0][0], st.best[0][1], si)
            for si, st in enumerate(forest)
            if st.best is not None
        ]
        if not candidates:
            raise InputError("no cut available: all groups are singletons")
        _, cu, cv, si = min(candidates)
        victim = forest.pop(si)
        cut = (cu, cv)
        cut_sequence.append(cut)
        side_a, side_b = _split_members(victim.edges, cut, victim.members)
        in_a = set(side_a)
        edges_a = [e for e in victim.edges if e != cut and e[0] in in_a]
        edges_b = [e for e in victim.edges if e != cut and e[0] not in in_a]
        forest.append(_Subtree(side_a, edges_a, canon_values))
        forest.append(_Subtree(side_b, edges_b, canon_values))
        partitions.append(_snapshot(forest, cut_sequence, order, canon_values, n))
    return partitions


def _snapshot(forest, cut_sequence, order, canon_values, n) -> Partition:
    groups = sorted((st.members for st in forest), key=lambda ms: ms[0])
    labels = np.zeros(n, dtype=int)
    within = 0.0
    for gi, members in enumerate(groups, start=1):
        within += _ssd_rows(canon_values, members)
        for r in members:
            labels[order[r]] = gi
    cuts = tuple(tuple(sorted((order[u], order[v]))) for u, v in cut_sequence)
    return Partition(
        k=len(groups), assignment=labels, cut_sequence=cuts, within_ssd=within
    )


def partition(graph: ContiguityGraph, features, k: int) -> Partition:
    """Group the regions into k contiguous clusters.

    Builds the minimum spanning tree of the contiguity graph under
    feature-space edge costs, then removes k - 1 edges greedily, each
    removal maximizing the decrease in within-group SSD. Groups are
    labeled 1..k in order of their smallest canonical member.
    """
    parts = nested_partitions(graph, features, k)
    result = parts[k - 1]
    logger.info("partitioned %d regions into %d groups (within_ssd=%.6g)",
                graph.n_nodes, k, result.within_ssd)
    return result


def partition_is_contiguous(graph: ContiguityGraph, assignment) -> bool:
    """Check that every group induces a connected subgraph."""
    labels = np.asarray(assignment)
    if labels.shape != (graph.n_nodes,):
        raise InputError("assignment not aligned with graph nodes")
    adj = graph.neighbors()
    for lab in np.unique(labels):
        members = [i for i in range(graph.n_nodes) if labels[i] == lab]
        seen = {members[0]}
        stack = [members[0]]
        member_set = set(members)
        while stack:
            node = stack.pop()
            for nb in adj[node]:
                if nb in member_set and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) != len(members):
            return False
    return True
