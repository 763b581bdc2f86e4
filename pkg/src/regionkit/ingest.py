"""Loading and normalization of per-region activity count tables.

The wide count-table format has one row per region: a ``region`` key
column, a ``total`` column covering all activities observed in that
region, and one integer column per named game. Optional ``name``,
``province``, ``cx`` and ``cy`` columns carry display metadata and
planar centroid coordinates. Rows are normalized into per-game
proportions of the region total.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InputError, ParseError

logger = logging.getLogger("regionkit.ingest")

RESERVED_COLUMNS = {"region", "total", "name", "province", "cx", "cy"}


@dataclass(frozen=True)
class RegionRecord:
    """Identity and optional metadata for one region."""

    region_id: str
    name: str = ""
    province: str | None = None
    centroid: tuple[float, float] | None = None

    def __post_init__(self):
        if not self.region_id:
            raise InputError("region_id must be non-empty")
        if self.centroid is not None and not all(math.isfinite(c) for c in self.centroid):
            raise InputError(f"region {self.region_id!r}: centroid has non-finite coordinates")


@dataclass(frozen=True)
class RegionNote:
    """Structured warning attached to a dropped or excluded region."""

    region_id: str
    reason: str


@dataclass(frozen=True)
class CountTable:
    """Per-region totals plus per-(region, game) play counts.

    ``totals[i]`` covers all activity in region i, listed games or not,
    so each individual count is bounded by it.
    """

    regions: tuple[RegionRecord, ...]
    games: tuple[str, ...]
    totals: np.ndarray
    counts: np.ndarray
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        n, m = len(self.regions), len(self.games)
        ids = [r.region_id for r in self.regions]
        if len(set(ids)) != n:
            raise InputError("duplicate region_id in count table")
        if self.totals.shape != (n,) or self.counts.shape != (n, m):
            raise InputError("count table arrays do not match regions/games")
        if n and (self.totals.min(initial=0) < 0 or self.counts.min(initial=0) < 0):
            raise InputError("counts and totals must be non-negative")
        if n and m and np.any(self.counts.max(axis=1) > self.totals):
            raise InputError("count exceeds total")
        self.totals.setflags(write=False)
        self.counts.setflags(write=False)

    @property
    def region_ids(self) -> tuple[str, ...]:
        return tuple(r.region_id for r in self.regions)

    def centroids(self) -> dict[str, tuple[float, float]]:
        return {r.region_id: r.centroid for r in self.regions if r.centroid is not None}


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """n regions x m selected games, rows are play-count proportions in [0, 1]."""

    region_ids: tuple[str, ...]
    feature_names: tuple[str, ...]
    values: np.ndarray
    dropped: tuple[RegionNote, ...] = field(default=())
    excluded: tuple[RegionNote, ...] = field(default=())
    provenance: tuple[str, ...] = field(default=())

    def __post_init__(self):
        n, m = len(self.region_ids), len(self.feature_names)
        if self.values.shape != (n, m):
            raise InputError("feature values do not match region_ids/feature_names")
        if n and m:
            if not np.all(np.isfinite(self.values)):
                raise InputError("feature values contain non-finite entries")
            if self.values.min() < 0.0 or self.values.max() > 1.0:
                raise InputError("proportions must lie in [0, 1]")
            sums = self.values.sum(axis=1)
            if np.any(sums > 1.0 + 1e-12):
                bad = self.region_ids[int(np.argmax(sums))]
                raise InputError(f"region {bad!r}: selected-game counts exceed the region total")
        self.values.setflags(write=False)

    def __eq__(self, other):
        if not isinstance(other, FeatureMatrix):
            return NotImplemented
        return (
            self.region_ids == other.region_ids
            and self.feature_names == other.feature_names
            and np.array_equal(self.values, other.values)
        )

    @property
    def n_regions(self) -> int:
        return len(self.region_ids)


def _parse_int(text: str, what: str, line: int) -> int:
    text = text.strip()
    if text == "":
        return 0  # absent cell: no players observed
    try:
        value = int(text)
    except ValueError:
        raise ParseError(f"non-integer count {text!r} in {what}", line) from None
    if value < 0:
        raise ParseError(f"negative count {value} in {what}", line)
    return value


def _parse_float(text: str, what: str, line: int) -> float | None:
    text = text.strip()
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"malformed coordinate {text!r} in {what}", line) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite coordinate in {what}", line)
    return value


def load_counts(path) -> CountTable:
    """Load a wide count-table CSV into a CountTable.

    Parameters
    ----------
    path : str or Path
        UTF-8 comma-separated file with header
        ``region,total,<game1>,<game2>,...``. Optional reserved columns
        ``name``, ``province``, ``cx``, ``cy`` are recognized anywhere in
        the header. Empty game cells are materialized as count 0.

    Returns
    -------
    CountTable

    Raises
    ------
    ParseError
        On a malformed row, duplicate region_id, negative count or
        non-integer count; the message names the offending line.
    InputError
        If the file cannot be read or the header is unusable.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f"counts file not found: {path}")
    with path.open(encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("empty counts file", 1)

    header = [h.strip() for h in rows[0]]
    if not header or header[0] != "region":
        raise ParseError('header must start with a "region" column', 1)
    if len(set(header)) != len(header):
        raise ParseError("duplicate column name in header", 1)
    if ("cx" in header) != ("cy" in header):
        raise ParseError('centroid columns "cx" and "cy" must appear together', 1)

    col = {name: i for i, name in enumerate(header)}
    game_names = [h for h in header if h not in RESERVED_COLUMNS]
    game_cols = [col[g] for g in game_names]
    has_total = "total" in col

    provenance: list[str] = []
    if not has_total:
        provenance.append("total column absent; totals fall back to row sums over listed games")

    regions: list[RegionRecord] = []
    seen: dict[str, int] = {}
    totals: list[int] = []
    counts: list[list[int]] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(f.strip() == "" for f in row):
            continue
        if len(row) != len(header):
            raise ParseError(
                f"malformed row: expected {len(header)} fields, got {len(row)}", lineno
            )
        region_id = row[col["region"]].strip()
        if not region_id:
            raise ParseError("malformed row: empty region id", lineno)
        if region_id in seen:
            raise ParseError(
                f"duplicate region_id {region_id!r} (first seen on line {seen[region_id]})", lineno
            )
        seen[region_id] = lineno

        row_counts = [_parse_int(row[c], f"game {header[c]!r}", lineno) for c in game_cols]
        if has_total:
            total = _parse_int(row[col["total"]], "total", lineno)
            if row_counts and max(row_counts) > total:
                raise ParseError(
                    f"count exceeds total for region {region_id!r} "
                    f"({max(row_counts)} > {total})",
                    lineno,
                )
        else:
            total = sum(row_counts)

        cx = _parse_float(row[col["cx"]], "cx", lineno) if "cx" in col else None
        cy = _parse_float(row[col["cy"]], "cy", lineno) if "cy" in col else None
        if (cx is None) != (cy is None):
            raise ParseError(f"region {region_id!r} has only one centroid coordinate", lineno)
        regions.append(
            RegionRecord(
                region_id=region_id,
                name=row[col["name"]].strip() if "name" in col else "",
                province=(row[col["province"]].strip() or None) if "province" in col else None,
                centroid=(cx, cy) if cx is not None else None,
            )
        )
        totals.append(total)
        counts.append(row_counts)

    if not regions:
        raise ParseError("counts file contains no data rows", len(rows))
    logger.info("loaded %d regions x %d games from %s", len(regions), len(game_names), path)
    return CountTable(
        regions=tuple(regions),
        games=tuple(game_names),
        totals=np.asarray(totals, dtype=np.int64),
        counts=np.asarray(counts, dtype=np.int64).reshape(len(regions), len(game_names)),
        provenance=tuple(provenance),
    )


def normalize(table: CountTable, selected_games) -> FeatureMatrix:
    """Divide each region's selected-game counts by the region's total.

    Regions with a zero total carry no proportion information; they are
    dropped and recorded as structured warnings on the returned matrix
    rather than raising.

    Parameters
    ----------
    table : CountTable
    selected_games : sequence of str
        Games to keep as feature columns, in output column order. Every
        name must appear in ``table.games``.

    Returns
    -------
    FeatureMatrix
    """
    selected = list(selected_games)
    if not selected:
        raise InputError("no games selected")
    if len(set(selected)) != len(selected):
        raise InputError("selected games contain duplicates")
    game_index = {g: j for j, g in enumerate(table.games)}
    missing = [g for g in selected if g not in game_index]
    if missing:
        raise InputError(f"unknown selected game(s): {', '.join(repr(g) for g in missing)}")

    cols = [game_index[g] for g in selected]
    keep = table.totals > 0
    dropped = tuple(
        RegionNote(region_id=r.region_id, reason="zero total")
        for r, ok in zip(table.regions, keep)
        if not ok
    )
    for note in dropped:
        logger.warning("dropping region %s: %s", note.region_id, note.reason)
    if not keep.any():
        raise InputError("all regions have zero totals; nothing to normalize")

    sub_counts = table.counts[np.ix_(keep.nonzero()[0], cols)].astype(float)
    sub_totals = table.totals[keep].astype(float)
    values = sub_counts / sub_totals[:, None]
    region_ids = tuple(r.region_id for r, ok in zip(table.regions, keep) if ok)
    return FeatureMatrix(
        region_ids=region_ids,
        feature_names=tuple(selected),
        values=values,
        dropped=dropped,
        provenance=table.provenance,
    )


def filter_regions(matrix: FeatureMatrix, exclude) -> FeatureMatrix:
    """Remove rows whose region_id is in ``exclude``, preserving row order.

    Ids not present in the matrix are recorded as "not found" warnings,
    not errors. Removing every row is an error.
    """
    exclude_list = list(exclude)
    exclude_set = set(exclude_list)
    present = set(matrix.region_ids)
    notes = [RegionNote(rid, "excluded") for rid in matrix.region_ids if rid in exclude_set]
    notes += [
        RegionNote(rid, "not found")
        for rid in dict.fromkeys(exclude_list)  # preserve order, dedup
        if rid not in present
    ]
    for note in notes:
        if note.reason == "not found":
            logger.warning("exclusion id %s not found in matrix", note.region_id)

    keep = [i for i, rid in enumerate(matrix.region_ids) if rid not in exclude_set]
    if not keep:
        raise InputError("empty matrix: exclusion list removes every region")
    return FeatureMatrix(
        region_ids=tuple(matrix.region_ids[i] for i in keep),
        feature_names=matrix.feature_names,
        values=matrix.values[keep].copy(),
        dropped=matrix.dropped,
        excluded=matrix.excluded + tuple(notes),
        provenance=matrix.provenance,
    )


def read_name_list(path) -> list[str]:
    """Read one name per line; blank lines and ``#`` comments are skipped."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"list file not found: {path}")
    names = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        entry = raw.split("#", 1)[0].strip()
        if entry:
            names.append(entry)
    return names
