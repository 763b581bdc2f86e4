"""Independent reference implementations used to cross-check the package.

Everything here is deliberately written the slow, obvious way (pure
Python loops, exhaustive enumeration, textbook formulas) and shares no
code with the implementation under test.
"""

from __future__ import annotations

import itertools

import numpy as np


def ids(n):
    """Region ids whose lexicographic order matches index order."""
    return tuple(f"n{i:03d}" for i in range(n))


def mean_py(values, members):
    m = len(values[0])
    out = [0.0] * m
    for i in members:
        for j in range(m):
            out[j] += values[i][j]
    return [s / len(members) for s in out]


def ssd_py(values, members):
    """Definitional SSD: sum over members of squared distance to the mean."""
    mu = mean_py(values, members)
    total = 0.0
    for i in members:
        for j in range(len(mu)):
            d = values[i][j] - mu[j]
            total += d * d
    return total


def ch_py(values, labels):
    """Calinski-Harabasz straight from the definition.

    B is computed directly as sum of group-size-weighted squared
    centroid-to-grand-centroid distances (not as total - W).
    """
    values = [list(map(float, row)) for row in np.asarray(values)]
    labels = list(labels)
    n = len(values)
    groups = {}
    for i, lab in enumerate(labels):
        groups.setdefault(lab, []).append(i)
    k = len(groups)
    grand = mean_py(values, list(range(n)))
    between = 0.0
    within = 0.0
    for members in groups.values():
        mu = mean_py(values, members)
        between += len(members) * sum((a - b) ** 2 for a, b in zip(mu, grand))
        within += ssd_py(values, members)
    if between == 0.0:
        return 0.0
    if within == 0.0:
        return float("inf")
    return (between / (k - 1)) / (within / (n - k))


def _spans(n, edge_subset):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n
    for u, v in edge_subset:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[rv] = ru
            comps -= 1
    return comps == 1


def min_spanning_weight_exhaustive(n, edges, costs):
    """Minimum spanning-tree weight by enumerating all n-1 edge subsets."""
    cost_of = dict(zip(edges, costs))
    best = None
    for subset in itertools.combinations(edges, n - 1):
        if _spans(n, subset):
            weight = sum(cost_of[e] for e in subset)
            if best is None or weight < best:
                best = weight
    return best


def _sides(edges, cut, members):
    adj = {m: [] for m in members}
    for u, v in edges:
        if (u, v) == cut:
            continue
        adj[u].append(v)
        adj[v].append(u)
    seen = {cut[0]}
    stack = [cut[0]]
    while stack:
        node = stack.pop()
        for nb in adj[node]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    side_a = sorted(seen)
    side_b = [m for m in members if m not in seen]
    return side_a, side_b


def greedy_cuts_exhaustive(values, tree_edges, k):
    """Full-rescan greedy tree cutting; returns (cut_sequence, groups).

    At every step, every edge of every current subtree is scored with the
    definitional SSD decrease; the maximum wins, ties resolve toward the
    smaller (min endpoint, max endpoint) pair.
    """
    values = [list(map(float, row)) for row in np.asarray(values)]
    members_all = sorted({x for e in tree_edges for x in e})
    forest = [(members_all, sorted(tuple(sorted(e)) for e in tree_edges))]
    cuts = []
    for _ in range(k - 1):
        best_key = None
        best = None
        for ci, (members, edges) in enumerate(forest):
            if not edges:
                continue
            total = ssd_py(values, members)
            for cut in edges:
                side_a, side_b = _sides(edges, cut, members)
                delta = total - ssd_py(values, side_a) - ssd_py(values, side_b)
                delta = max(delta, 0.0)
                key = (-delta, cut[0], cut[1])
                if best_key is None or key < best_key:
                    best_key = key
                    best = (ci, cut, side_a, side_b)
        ci, cut, side_a, side_b = best
        members, edges = forest.pop(ci)
        in_a = set(side_a)
        forest.append((side_a, [e for e in edges if e != cut and e[0] in in_a]))
        forest.append((side_b, [e for e in edges if e != cut and e[0] not in in_a]))
        cuts.append(cut)
    groups = sorted((sorted(m) for m, _ in forest), key=lambda g: g[0])
    return cuts, groups


def prim_mst(n, edges, costs):
    """Prim's algorithm (distinct from the package's Kruskal), for cross-checks."""
    adj = {i: [] for i in range(n)}
    for (u, v), c in zip(edges, costs):
        adj[u].append((v, c))
        adj[v].append((u, c))
    visited = {0}
    tree = []
    while len(visited) < n:
        best = None
        for u in sorted(visited):
            for v, c in adj[u]:
                if v in visited:
                    continue
                key = (c, min(u, v), max(u, v))
                if best is None or key < best[0]:
                    best = (key, (u, v))
        if best is None:
            raise ValueError("graph is disconnected")
        (_, (u, v)) = best
        visited.add(v)
        tree.append(tuple(sorted((u, v))))
    return sorted(tree)


def random_connected_graph(rng, n, extra_edge_prob=0.35):
    """Random connected graph as sorted canonical (u < v) edge pairs."""
    order = list(rng.permutation(n))
    edges = set()
    for pos in range(1, n):
        anchor = order[int(rng.integers(0, pos))]
        edges.add(tuple(sorted((int(order[pos]), int(anchor)))))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < extra_edge_prob:
                edges.add((u, v))
    return sorted(edges)


def ari_pair_counting(truth, predicted):
    """ARI via explicit agreement counting over all index pairs."""
    n = len(truth)
    a = b = c = d = 0  # same-same, same-diff, diff-same, diff-diff
    for i in range(n):
        for j in range(i + 1, n):
            st = truth[i] == truth[j]
            sp = predicted[i] == predicted[j]
            if st and sp:
                a += 1
            elif st and not sp:
                b += 1
            elif not st and sp:
                c += 1
            else:
                d += 1
    top = 2.0 * (a * d - b * c)
    bottom = (a + b) * (b + d) + (a + c) * (c + d)
    if bottom == 0:
        return 1.0
    return top / bottom
