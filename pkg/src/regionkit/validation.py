"""Input validation helpers used by the functional API and the estimator."""

from __future__ import annotations

import numpy as np

from .errors import InputError


def as_feature_values(features) -> np.ndarray:
    """Return the (n, m) float64 value array of a FeatureMatrix or array-like.

    Accepts a FeatureMatrix (anything with a ``values`` ndarray attribute)
    or a plain 2-D array-like. Values must be finite.
    """
    values = getattr(features, "values", features)
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise InputError(f"feature values must be 2-D, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise InputError("feature values contain non-finite entries")
    return arr


def check_members(members, n: int) -> np.ndarray:
    """Validate a member index set against n rows; returns a sorted index array."""
    idx = np.asarray(sorted(set(int(i) for i in members)), dtype=int)
    if idx.size == 0:
        raise InputError("empty member set")
    if idx[0] < 0 or idx[-1] >= n:
        raise InputError(f"member index out of range for {n} rows")
    return idx


def check_labels(labels, n: int) -> np.ndarray:
    """Validate a per-row label vector of length n."""
    arr = np.asarray(labels)
    if arr.shape != (n,):
        raise InputError(f"labels must have shape ({n},), got {arr.shape}")
    return arr.astype(int)


def check_alignment(graph, features) -> np.ndarray:
    """Verify graph nodes align 1:1 with feature rows; returns the value array."""
    values = as_feature_values(features)
    if len(graph.node_ids) != values.shape[0]:
        raise InputError(
            f"dimension mismatch: graph has {len(graph.node_ids)} nodes, "
            f"features have {values.shape[0]} rows"
        )
    region_ids = getattr(features, "region_ids", None)
    if region_ids is not None and tuple(region_ids) != tuple(graph.node_ids):
        raise InputError("graph node_ids do not match feature region_ids")
    return values


def centroid_array(centroids, node_ids) -> np.ndarray:
    """Normalize centroids (mapping by id, or (n, 2) array-like) to an array.

    Missing or non-finite coordinates become NaN rows; callers decide
    whether that is fatal.
    """
    n = len(node_ids)
    out = np.full((n, 2), np.nan)
    if centroids is None:
        return out
    if hasattr(centroids, "get"):
        for i, rid in enumerate(node_ids):
            xy = centroids.get(rid)
            if xy is not None:
                out[i] = (float(xy[0]), float(xy[1]))
    else:
        arr = np.asarray(centroids, dtype=float)
        if arr.shape != (n, 2):
            raise InputError(
                f"centroids must map node ids or have shape ({n}, 2), got {arr.shape}"
            )
        out = arr.copy()
    out[~np.all(np.isfinite(out), axis=1)] = np.nan
    return out
