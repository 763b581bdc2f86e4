#!/usr/bin/env python3
"""Regenerate the bundled planted-5 fixture.

The fixture must keep satisfying the recovery checks (ARI 1.0 at k=5 and
best_k=5 over a [2, 10] scan); this script verifies both before writing.
"""

from pathlib import Path

from regionkit import (
    PlantedScenario,
    adjusted_rand_index,
    generate,
    nested_partitions,
    normalize,
    rook_adjacency,
)
from regionkit.cli import main
from regionkit.model_select import series_from_partitions

HERE = Path(__file__).parent
SEED = 7


def verify() -> None:
    scenario = PlantedScenario(
        grid=(12, 12), k_true=5, signature_games_per_group=2,
        base_total=10_000, concentration=0.8, seed=SEED,
    )
    dataset = generate(scenario)
    matrix = normalize(dataset.table, list(dataset.table.games))
    graph = rook_adjacency(dataset.shapes)
    parts = nested_partitions(graph, matrix, 10)
    series = series_from_partitions(matrix, parts, 2, 10)
    ari = adjusted_rand_index(dataset.truth, parts[4].assignment)
    assert ari == 1.0, f"fixture seed no longer recovers truth (ARI={ari})"
    assert series.best_k == 5, f"fixture seed no longer selects k=5 (best={series.best_k})"


def regenerate() -> None:
    out = HERE / "planted5"
    out.mkdir(parents=True, exist_ok=True)
    code = main(
        [
            "synth", "--grid", "12x12", "--k-true", "5", "--signature-games", "2",
            "--base-total", "10000", "--concentration", "0.8", "--seed", str(SEED),
            "--counts-out", str(out / "counts.csv"),
            "--geojson-out", str(out / "grid.geojson"),
            "--truth-out", str(out / "truth.csv"),
            "--manifest-out", str(out / "manifest.json"),
        ]
    )
    assert code == 0


if __name__ == "__main__":
    verify()
    regenerate()
    print("fixture regenerated and verified")
