"""Region adjacency graphs and connectivity guarantees for grouping.

Contiguity can come from polygon geometry (rook: shared boundary
segments; queen: shared vertices), from an explicit edge list, or from
nearest-neighbour augmentation. Enclaves and islands are reconnected by
greedily adding shortest centroid-to-centroid links so that the grouping
stage always sees a single connected component.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InfeasibleError, InputError
from .geometry import RegionShape
from .validation import centroid_array

logger = logging.getLogger("regionkit.contiguity")

PROVENANCE_TAGS = ("polygon-adjacency", "explicit", "repair", "knn")


@dataclass(frozen=True)
class ContiguityGraph:
    """Undirected region-adjacency graph with per-edge provenance tags.

    Edges are canonical (u < v) index pairs into ``node_ids``, stored in
    sorted order with ``provenance`` aligned edge-for-edge.
    """

    node_ids: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    provenance: tuple[str, ...]

    def __post_init__(self):
        n = len(self.node_ids)
        if len(set(self.node_ids)) != n:
            raise InputError("duplicate node ids in contiguity graph")
        if len(self.provenance) != len(self.edges):
            raise InputError("edge provenance not aligned with edges")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise InputError(f"self-loop on node {self.node_ids[u]!r}")
            if not (0 <= u < v < n):
                raise InputError(f"edge ({u}, {v}) out of range for {n} nodes")
            if (u, v) in seen:
                raise InputError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        for tag in self.provenance:
            if tag not in PROVENANCE_TAGS:
                raise InputError(f"unknown edge provenance tag {tag!r}")

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.node_ids]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.n_nodes
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by smallest member."""
        adj = self.neighbors()
        seen = [False] * self.n_nodes
        comps = []
        for start in range(self.n_nodes):
            if seen[start]:
                continue
            stack = [start]
            seen[start] = True
            comp = []
            while stack:
                node = stack.pop()
                comp.append(node)
                for nb in adj[node]:
                    if not seen[nb]:
                        seen[nb] = True
                        stack.append(nb)
            comps.append(sorted(comp))
        return comps

    @property
    def is_connected(self) -> bool:
        return self.n_nodes <= 1 or len(self.components()) == 1

    def edges_tagged(self, tag: str) -> list[tuple[str, str]]:
        """Edges carrying a provenance tag, as (id, id) pairs."""
        return [
            (self.node_ids[u], self.node_ids[v])
            for (u, v), t in zip(self.edges, self.provenance)
            if t == tag
        ]


def _build(node_ids, tagged_edges) -> ContiguityGraph:
    """Assemble a graph from {(u, v): tag}; edges canonicalized and sorted."""
    items = sorted(tagged_edges.items())
    return ContiguityGraph(
        node_ids=tuple(node_ids),
        edges=tuple(e for e, _ in items),
        provenance=tuple(t for _, t in items),
    )


def from_adjacency_list(pairs, nodes) -> ContiguityGraph:
    """Build a graph from explicit (region_id, region_id) pairs.

    Symmetric closure is applied and duplicates collapse; all edges are
    tagged "explicit". Unknown ids and self-pairs are errors.
    """
    node_ids = tuple(nodes)
    index = {rid: i for i, rid in enumerate(node_ids)}
    if len(index) != len(node_ids):
        raise InputError("duplicate node ids")
    tagged: dict[tuple[int, int], str] = {}
    for a, b in pairs:
        if a not in index:
            raise InputError(f"unknown region_id {a!r} in adjacency pairs")
        if b not in index:
            raise InputError(f"unknown region_id {b!r} in adjacency pairs")
        if a == b:
            raise InputError(f"self-loop pair ({a!r}, {a!r})")
        u, v = sorted((index[a], index[b]))
        tagged[(u, v)] = "explicit"
    return _build(node_ids, tagged)


def rook_adjacency(shapes, queen: bool = False) -> ContiguityGraph:
    """Polygon contiguity: adjacency through shared boundary geometry.

    Rook (default) links regions sharing at least one boundary segment,
    i.e. an undirected vertex pair present in both boundaries after
    rounding coordinates to 1e-9. Queen mode links regions sharing any
    boundary vertex, which adds corner-touching neighbours.

    Parameters
    ----------
    shapes : sequence of RegionShape
        Node order of the result follows this sequence.
    queen : bool
        Use shared-vertex (queen) contiguity instead of shared segments.
    """
    shapes = list(shapes)
    node_ids = [s.region_id for s in shapes]
    key_owners: dict[tuple, set[int]] = {}
    for i, shape in enumerate(shapes):
        if not isinstance(shape, RegionShape):
            raise InputError("rook_adjacency expects RegionShape geometry")
        for ring in shape.rings():
            rounded = [(round(x, 9), round(y, 9)) for x, y in ring]
            if queen:
                for pt in rounded[:-1]:
                    key_owners.setdefault(pt, set()).add(i)
            else:
                for p, q in zip(rounded, rounded[1:]):
                    if p == q:
                        continue  # zero-length segment: a point, not an edge
                    key = (p, q) if p <= q else (q, p)
                    key_owners.setdefault(key, set()).add(i)

    tagged: dict[tuple[int, int], str] = {}
    for owners in key_owners.values():
        if len(owners) < 2:
            continue
        members = sorted(owners)
        for a_pos, u in enumerate(members):
            for v in members[a_pos + 1:]:
                tagged[(u, v)] = "polygon-adjacency"
    graph = _build(node_ids, tagged)
    logger.info(
        "%s contiguity: %d regions, %d edges", "queen" if queen else "rook",
        graph.n_nodes, len(graph.edges),
    )
    return graph


def repair_connectivity(graph: ContiguityGraph, centroids) -> ContiguityGraph:
    """Reconnect a fragmented graph with shortest centroid-distance links.

    While more than one connected component remains, the closest pair of
    nodes in distinct components (by Euclidean centroid distance, ties
    broken by smaller index pair) gains an edge tagged "repair". Original
    edges are untouched; an already-connected graph is returned as-is.

    Parameters
    ----------
    graph : ContiguityGraph
    centroids : mapping region_id -> (x, y), or (n, 2) array in node order

    Raises
    ------
    InfeasibleError
        If the graph is disconnected and any node lacks a usable centroid.
    """
    comps = graph.components()
    if len(comps) <= 1:
        return graph

    coords = centroid_array(centroids, graph.node_ids)
    missing = [graph.node_ids[i] for i in range(graph.n_nodes) if np.isnan(coords[i]).any()]
    if missing:
        raise InfeasibleError(
            "cannot repair: disconnected graph and no centroid for "
            + ", ".join(repr(m) for m in missing[:5])
        )

    # Repeatedly joining the closest cross-component pair is Kruskal over
    # centroid distances: sort all pairs once, then union components.
    n = graph.n_nodes
    diff = coords[:, None, :] - coords[None, :, :]
    d2 = np.sum(diff * diff, axis=2)
    iu, iv = np.triu_indices(n, k=1)
    pair_order = np.lexsort((iv, iu, d2[iu, iv]))

    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ci, comp in enumerate(comps):
        for node in comp[1:]:
            parent[find(node)] = find(comp[0])

    tagged = {e: t for e, t in zip(graph.edges, graph.provenance)}
    remaining = len(comps) - 1
    for idx in pair_order:
        if remaining == 0:
            break
        u, v = int(iu[idx]), int(iv[idx])
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        parent[rv] = ru
        tagged[(u, v)] = "repair"
        logger.info("repair edge %s -- %s", graph.node_ids[u], graph.node_ids[v])
        remaining -= 1
    return _build(graph.node_ids, tagged)


def knn_augment(graph: ContiguityGraph, centroids, k: int) -> ContiguityGraph:
    """Raise every node's degree to at least k with nearest-centroid edges.

    Nodes are processed in index order; each deficient node gains edges
    (tagged "knn") to its nearest non-neighbour centroids, ties broken by
    smaller node index, until its degree reaches k or candidates run out.
    Never removes edges.
    """
    if k < 1:
        raise InputError("k must be >= 1")
    coords = centroid_array(centroids, graph.node_ids)
    missing = [graph.node_ids[i] for i in range(graph.n_nodes) if np.isnan(coords[i]).any()]
    if missing:
        raise InputError(
            "knn augmentation needs a centroid for every node; missing "
            + ", ".join(repr(m) for m in missing[:5])
        )

    tagged = {e: t for e, t in zip(graph.edges, graph.provenance)}
    degree = graph.degrees()
    adjacent = {frozenset(e) for e in graph.edges}
    for i in range(graph.n_nodes):
        if degree[i] >= k:
            continue
        d2 = np.sum((coords - coords[i]) ** 2, axis=1)
        order = sorted(j for j in range(graph.n_nodes) if j != i)
        order.sort(key=lambda j: (d2[j], j))
        for j in order:
            if degree[i] >= k:
                break
            if frozenset((i, j)) in adjacent:
                continue
            u, v = min(i, j), max(i, j)
            tagged[(u, v)] = "knn"
            adjacent.add(frozenset((u, v)))
            degree[i] += 1
            degree[j] += 1
    return _build(graph.node_ids, tagged)


def load_adjacency_pairs(path) -> list[tuple[str, str]]:
    """Read a two-column adjacency CSV with header ``region_a,region_b``."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"adjacency file not found: {path}")
    with path.open(encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [h.strip() for h in rows[0]] != ["region_a", "region_b"]:
        raise InputError(f'{path}: expected header "region_a,region_b"')
    pairs = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(f.strip() == "" for f in row):
            continue
        if len(row) != 2 or not row[0].strip() or not row[1].strip():
            raise InputError(f"{path} line {lineno}: malformed adjacency row")
        pairs.append((row[0].strip(), row[1].strip()))
    return pairs
