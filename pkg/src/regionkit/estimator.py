"""Scikit-learn style estimator wrapping the contiguous grouping pipeline."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .contiguity import ContiguityGraph, from_adjacency_list, knn_augment, repair_connectivity
from .errors import InputError
from .model_select import DEFAULT_K_MAX, DEFAULT_K_MIN, series_from_partitions
from .skater import nested_partitions
from .validation import as_feature_values


def as_contiguity_graph(connectivity, n_nodes: int, node_ids=None) -> ContiguityGraph:
    """Coerce a connectivity input into a ContiguityGraph.

    Accepts a ContiguityGraph, an iterable of (i, j) index pairs, or a
    square (sparse or dense) adjacency matrix whose nonzero entries mark
    neighbours.
    """
    if isinstance(connectivity, ContiguityGraph):
        if connectivity.n_nodes != n_nodes:
            raise InputError(
                f"connectivity has {connectivity.n_nodes} nodes, X has {n_nodes} rows"
            )
        return connectivity
    ids = tuple(node_ids) if node_ids is not None else tuple(
        f"n{i:06d}" for i in range(n_nodes)
    )
    if hasattr(connectivity, "tocoo"):  # scipy sparse
        coo = connectivity.tocoo()
        pairs = [(ids[i], ids[j]) for i, j in zip(coo.row, coo.col) if i != j]
        return from_adjacency_list(pairs, ids)
    arr = np.asarray(connectivity)
    if arr.ndim == 2 and arr.shape == (n_nodes, n_nodes):
        rows, cols = np.nonzero(arr)
        pairs = [(ids[i], ids[j]) for i, j in zip(rows, cols) if i != j]
        return from_adjacency_list(pairs, ids)
    if arr.ndim == 2 and arr.shape[1] == 2:
        pairs = [(ids[int(i)], ids[int(j)]) for i, j in arr]
        return from_adjacency_list(pairs, ids)
    raise InputError(
        "connectivity must be a ContiguityGraph, an (n, n) adjacency matrix "
        "or a sequence of index pairs"
    )


class SkaterRegions(ClusterMixin, BaseEstimator):
    """Contiguity-constrained clustering by greedy spanning-tree cuts.

    Builds a minimum spanning tree of the connectivity graph under
    Euclidean feature distances and removes edges greedily, each removal
    maximizing the drop in within-group SSD. With ``n_clusters=None``
    the group count is chosen by scanning the Calinski-Harabasz pseudo
    F-statistic over ``[k_min, k_max]``.

    Parameters
    ----------
    n_clusters : int or None
        Fixed number of groups, or None to select by pseudo-F scan.
    k_min, k_max : int
        Inclusive scan range used when ``n_clusters`` is None.
    connectivity : ContiguityGraph, adjacency matrix or pair list
        Which rows of X are neighbours. Required.
    centroids : mapping or (n, 2) array, optional
        Per-region planar coordinates, used to reconnect a fragmented
        connectivity graph and for the optional k-NN augmentation.
    repair : bool
        Reconnect a disconnected graph with shortest centroid links.
    neighbors : int
        If > 0, augment the graph so every node has at least this many
        neighbours before grouping (off by default).

    Attributes
    ----------
    labels_ : ndarray of shape (n,)
        Group label 1..k per row.
    n_clusters_ : int
        The fitted number of groups.
    graph_ : ContiguityGraph
        The effective (augmented, repaired) graph used for grouping.
    partition_ : Partition
        Full grouping result, including the cut sequence.
    series_ : FStatSeries or None
        Pseudo-F scan results when ``n_clusters`` is None.
    best_k_, second_best_k_ : int or None
        Selected group counts when a scan ran.
    """

    def __init__(self, n_clusters=None, *, k_min=DEFAULT_K_MIN, k_max=DEFAULT_K_MAX,
                 connectivity=None, centroids=None, repair=True, neighbors=0):
        self.n_clusters = n_clusters
        self.k_min = k_min
        self.k_max = k_max
        self.connectivity = connectivity
        self.centroids = centroids
        self.repair = repair
        self.neighbors = neighbors

    def fit(self, X, y=None):
        """Group the rows of X into contiguous clusters."""
        values = as_feature_values(X)
        n = values.shape[0]
        region_ids = getattr(X, "region_ids", None)
        if self.connectivity is None:
            raise InputError("SkaterRegions requires a connectivity graph")
        graph = as_contiguity_graph(self.connectivity, n, node_ids=region_ids)

        if self.neighbors:
            graph = knn_augment(graph, self.centroids, self.neighbors)
        if self.repair and not graph.is_connected:
            graph = repair_connectivity(graph, self.centroids)
        self.graph_ = graph

        features = X if region_ids is not None else values
        if self.n_clusters is None:
            if not (2 <= self.k_min <= self.k_max <= n - 1):
                raise InputError(
                    f"scan range must satisfy 2 <= k_min <= k_max <= n - 1; "
                    f"got [{self.k_min}, {self.k_max}] with n={n}"
                )
            parts = nested_partitions(graph, features, self.k_max)
            self.series_ = series_from_partitions(values, parts, self.k_min, self.k_max)
            self.best_k_ = self.series_.best_k
            self.second_best_k_ = self.series_.second_best_k
            part = parts[self.best_k_ - 1]
        else:
            parts = nested_partitions(graph, features, int(self.n_clusters))
            self.series_ = None
            self.best_k_ = None
            self.second_best_k_ = None
            part = parts[int(self.n_clusters) - 1]

        self.partition_ = part
        self.labels_ = part.assignment
        self.n_clusters_ = part.k
        self.within_ssd_ = part.within_ssd
        self.n_features_in_ = values.shape[1]
        return self
