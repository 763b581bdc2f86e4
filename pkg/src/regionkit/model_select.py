"""Calinski-Harabasz pseudo F-statistic and group-count selection.

The variance-ratio criterion of Calinski & Harabasz (1974):
CH = (B / (k - 1)) / (W / (n - k)), where W is the total within-group
sum of squared deviations and B the between-group remainder of the total
SSD. Higher is better; the scan picks the best and second-best k over a
contiguous range, reusing one nested greedy cut sequence.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .contiguity import ContiguityGraph
from .errors import InputError
from .skater import Partition, _ssd_rows, nested_partitions
from .validation import as_feature_values, check_labels

logger = logging.getLogger("regionkit.model_select")

DEFAULT_K_MIN = 2
DEFAULT_K_MAX = 15


@dataclass(frozen=True)
class FStatEntry:
    """Pseudo-F value for one candidate group count.

    ``degenerate`` marks perfect separation (W = 0), where the statistic
    is reported as +inf and should be read as a flag, not a magnitude.
    """

    k: int
    ch: float
    within_ssd: float

    @property
    def degenerate(self) -> bool:
        return math.isinf(self.ch)


@dataclass(frozen=True)
class FStatSeries:
    """Pseudo-F values over a contiguous k range, with best and runner-up."""

    entries: tuple[FStatEntry, ...]
    best_k: int
    second_best_k: int | None

    def __post_init__(self):
        if not self.entries:
            raise InputError("series must be non-empty")
        ks = [e.k for e in self.entries]
        if ks != list(range(ks[0], ks[0] + len(ks))):
            raise InputError("series entries must cover a contiguous k range")
        by_k = {e.k: e.ch for e in self.entries}
        if self.best_k not in by_k:
            raise InputError("best_k is not in the series")
        if len(self.entries) == 1:
            if self.second_best_k is not None:
                raise InputError("single-entry series has no second best")
            return
        if self.second_best_k is None or self.second_best_k == self.best_k:
            raise InputError("second_best_k must exist and differ from best_k")
        if self.second_best_k not in by_k:
            raise InputError("second_best_k is not in the series")
        rest = [ch for k, ch in by_k.items() if k not in (self.best_k, self.second_best_k)]
        if by_k[self.best_k] < by_k[self.second_best_k]:
            raise InputError("best_k must carry the maximal CH value")
        if rest and by_k[self.second_best_k] < max(rest):
            raise InputError("second_best_k must carry the second-maximal CH value")

    @classmethod
    def from_entries(cls, entries) -> "FStatSeries":
        entries = tuple(entries)
        best, second = select_best(entries)
        return cls(entries=entries, best_k=best, second_best_k=second)

    def entry(self, k: int) -> FStatEntry:
        for e in self.entries:
            if e.k == k:
                return e
        raise InputError(f"k={k} not in series")


def calinski_harabasz(features, assignment) -> float:
    """Variance-ratio criterion for a grouping of the feature rows.

    Parameters
    ----------
    features : FeatureMatrix or array-like
    assignment : sequence of group labels, one per row

    Returns
    -------
    float
        (B / (k - 1)) / (W / (n - k)). Zero when there is no
        between-group variance; +inf when W = 0 with B > 0 (degenerate
        perfect separation, flagged downstream).
    """
    values = as_feature_values(features)
    n = values.shape[0]
    labels = check_labels(assignment, n)
    groups = _group_indices(labels)
    k = len(groups)
    if k < 2 or k > n - 1:
        raise InputError(f"Calinski-Harabasz is undefined for k={k} with n={n}")

    total = _ssd_rows(values, np.arange(n))
    # all rows identical up to rounding noise: no variance to explain
    if total <= float((values * values).sum()) * 1e-24:
        return 0.0
    within = sum(_ssd_rows(values, idx) for idx in groups)
    between = max(total - within, 0.0)
    if between == 0.0:
        return 0.0
    if within == 0.0:
        return math.inf
    return (between / (k - 1)) / (within / (n - k))


def _group_indices(labels: np.ndarray) -> list[np.ndarray]:
    return [np.flatnonzero(labels == lab) for lab in np.unique(labels)]


def select_best(series) -> tuple[int, int | None]:
    """Best and second-best k by CH value, ties resolved toward smaller k.

    Accepts an FStatSeries or a sequence of FStatEntry. +inf entries
    outrank every finite value. Returns (best_k, second_best_k), the
    second being None for a single-entry series.
    """
    entries = list(series.entries if isinstance(series, FStatSeries) else series)
    if not entries:
        raise InputError("empty series")
    ranked = sorted(entries, key=lambda e: (-e.ch, e.k))
    best = ranked[0].k
    second = ranked[1].k if len(ranked) > 1 else None
    return best, second


def series_from_partitions(features, partitions: list[Partition], k_min: int, k_max: int) -> FStatSeries:
    """Evaluate CH on nested partitions for each k in [k_min, k_max]."""
    entries = []
    for k in range(k_min, k_max + 1):
        part = partitions[k - 1]
        if part.k != k:
            raise InputError("partitions are not the nested 1..k_max sequence")
        ch = calinski_harabasz(features, part.assignment)
        entries.append(FStatEntry(k=k, ch=ch, within_ssd=part.within_ssd))
        if math.isinf(ch):
            logger.warning("k=%d: zero within-group SSD, CH degenerate (+inf)", k)
    return FStatSeries.from_entries(entries)


def scan_k(graph: ContiguityGraph, features, k_min: int = DEFAULT_K_MIN,
           k_max: int = DEFAULT_K_MAX) -> FStatSeries:
    """Run one greedy cut sequence to k_max and score every k in range.

    Partitions are nested by design (each k refines the previous one by a
    single cut), so the whole scan costs one grouping pass.
    """
    values = as_feature_values(features)
    n = values.shape[0]
    if not (2 <= k_min <= k_max <= n - 1):
        raise InputError(f"need 2 <= k_min <= k_max <= n - 1; got [{k_min}, {k_max}] with n={n}")
    parts = nested_partitions(graph, features, k_max)
    return series_from_partitions(features, parts, k_min, k_max)
