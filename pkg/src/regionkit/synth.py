"""Planted-partition grids for desk-scale verification of the pipeline.

A scenario plants k_true contiguous rectangular blocks on a w x h grid
of unit-square cells. Every block owns a few signature games; each cell
draws a total around ``base_total`` and splits it multinomially, putting
``concentration`` probability mass uniformly on its own block's
signature games and the remainder uniformly on all other games. Recovery
is scored with the adjusted Rand index.

Randomness comes from NumPy's ``default_rng`` (PCG64) with explicit
seeding, so a scenario regenerates bit-identically from its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .geometry import RegionShape, unit_square_shape
from .ingest import CountTable, RegionRecord

GENERATOR_NAME = "numpy.random.default_rng (PCG64)"


@dataclass(frozen=True)
class PlantedScenario:
    """Parameters of one synthetic planted-partition dataset."""

    grid: tuple[int, int]
    k_true: int
    signature_games_per_group: int = 2
    base_total: int = 10_000
    concentration: float = 0.8
    seed: int = 0

    def __post_init__(self):
        width, height = self.grid
        if width < 1 or height < 1:
            raise InputError("grid dimensions must be positive")
        if self.k_true < 1:
            raise InputError("k_true must be >= 1")
        if width * height < self.k_true:
            raise InputError("degenerate scenario: fewer grid cells than planted groups")
        if self.signature_games_per_group < 1:
            raise InputError("signature_games_per_group must be >= 1")
        if self.base_total < 1:
            raise InputError("base_total must be >= 1")
        uniform_share = 1.0 / self.k_true  # own-signature mass under a uniform split
        if not (uniform_share < self.concentration <= 1.0):
            raise InputError(
                f"concentration must lie in ({uniform_share:.4g}, 1], got {self.concentration}"
            )
        _plan_blocks(width, height, self.k_true)  # fail fast on infeasible layouts

    @property
    def n_cells(self) -> int:
        return self.grid[0] * self.grid[1]

    @property
    def games(self) -> tuple[str, ...]:
        s = self.signature_games_per_group
        return tuple(
            f"g{g:02d}_game{j:02d}" for g in range(1, self.k_true + 1) for j in range(s)
        )


@dataclass(frozen=True)
class PlantedDataset:
    """Generated scenario realization: geometry, counts and ground truth."""

    scenario: PlantedScenario
    shapes: tuple[RegionShape, ...]
    table: CountTable
    truth: np.ndarray

    def __post_init__(self):
        self.truth.setflags(write=False)

    def truth_by_id(self) -> dict[str, int]:
        return {r.region_id: int(t) for r, t in zip(self.table.regions, self.truth)}


def _split_even(total: int, parts: int) -> list[int]:
    base, rem = divmod(total, parts)
    return [base + 1 if i < rem else base for i in range(parts)]


def _plan_blocks(width: int, height: int, k: int) -> list[tuple[int, int, int, int]]:
    """Axis-aligned rectangles (r0, r1, c0, c1), band-major, covering the grid."""
    n_bands = min(max(int(round(math.sqrt(k))), 1), k)
    if n_bands > height:
        n_bands = height
    per_band = _split_even(k, n_bands)
    if max(per_band) > width:
        raise InputError(
            f"degenerate scenario: cannot tile a {width}x{height} grid with {k} blocks"
        )
    blocks = []
    r0 = 0
    for band, count in zip(_split_even(height, n_bands), per_band):
        c0 = 0
        for strip in _split_even(width, count):
            blocks.append((r0, r0 + band, c0, c0 + strip))
            c0 += strip
        r0 += band
    return blocks


def planted_labels(scenario: PlantedScenario) -> np.ndarray:
    """Ground-truth group label (1..k_true) per cell, row-major cell order."""
    width, height = scenario.grid
    blocks = _plan_blocks(width, height, scenario.k_true)
    labels = np.zeros(height * width, dtype=int)
    for gi, (r0, r1, c0, c1) in enumerate(blocks, start=1):
        for r in range(r0, r1):
            for c in range(c0, c1):
                labels[r * width + c] = gi
    return labels


def generate(scenario: PlantedScenario) -> PlantedDataset:
    """Realize a scenario into grid polygons, a count table and truth labels.

    Cell totals are Poisson draws around ``base_total`` (floored at 1);
    counts are one multinomial draw per cell. In the noiseless limit
    (concentration exactly 1.0) the total is instead rounded up to a
    multiple of the signature count and split evenly across the cell's
    own signature games, so rows within a group are identical proportions.
    """
    width, height = scenario.grid
    rng = np.random.default_rng(scenario.seed)
    truth = planted_labels(scenario)
    games = scenario.games
    s = scenario.signature_games_per_group
    m = len(games)

    probs = np.zeros((scenario.k_true, m))
    for g in range(scenario.k_true):
        own = slice(g * s, (g + 1) * s)
        probs[g, own] = scenario.concentration / s
        if m > s:
            rest = (1.0 - scenario.concentration) / (m - s)
            probs[g, :] += rest
            probs[g, own] -= rest
    noiseless = scenario.concentration == 1.0

    records = []
    shapes = []
    totals = np.zeros(height * width, dtype=np.int64)
    counts = np.zeros((height * width, m), dtype=np.int64)
    for r in range(height):
        for c in range(width):
            i = r * width + c
            region_id = f"r{r:02d}c{c:02d}"
            group = int(truth[i])
            total = max(int(rng.poisson(scenario.base_total)), 1)
            if noiseless:
                total = ((total + s - 1) // s) * s
                row = np.zeros(m, dtype=np.int64)
                row[(group - 1) * s:group * s] = total // s
            else:
                row = rng.multinomial(total, probs[group - 1])
            totals[i] = total
            counts[i] = row
            records.append(
                RegionRecord(region_id=region_id, centroid=(c + 0.5, r + 0.5))
            )
            shapes.append(unit_square_shape(region_id, col=c, row=r))

    table = CountTable(
        regions=tuple(records), games=games, totals=totals, counts=counts
    )
    return PlantedDataset(scenario=scenario, shapes=tuple(shapes), table=table, truth=truth)


def adjusted_rand_index(truth, predicted) -> float:
    """Chance-corrected pair-counting agreement between two labelings.

    Computed from the contingency table:
    ARI = (Index - ExpectedIndex) / (MaxIndex - ExpectedIndex).
    Returns 1.0 for identical partitions (up to label permutation) and
    values near 0 for chance-level agreement.
    """
    a = list(truth)
    b = list(predicted)
    if len(a) != len(b):
        raise InputError(f"label vectors differ in length: {len(a)} vs {len(b)}")
    n = len(a)
    if n < 2:
        raise InputError("need at least 2 observations")

    table: dict[tuple, int] = {}
    row_sums: dict[object, int] = {}
    col_sums: dict[object, int] = {}
    for x, y in zip(a, b):
        table[(x, y)] = table.get((x, y), 0) + 1
        row_sums[x] = row_sums.get(x, 0) + 1
        col_sums[y] = col_sums.get(y, 0) + 1

    index = sum(math.comb(v, 2) for v in table.values())
    sum_rows = sum(math.comb(v, 2) for v in row_sums.values())
    sum_cols = sum(math.comb(v, 2) for v in col_sums.values())
    expected = sum_rows * sum_cols / math.comb(n, 2)
    max_index = (sum_rows + sum_cols) / 2.0
    if max_index == expected:
        # both labelings are the same trivial partition; perfect agreement
        return 1.0
    return (index - expected) / (max_index - expected)
