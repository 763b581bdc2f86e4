"""Command-line interface: ``regionkit cluster | synth | score``.

Exit codes: 0 success, 2 invalid input, 3 infeasible problem
(disconnected graph with repair unavailable or disabled), 4 internal
error. Failures emit a single structured error line on stderr and remove
any partially written outputs. Set REGIONKIT_LOG=info|debug for
progress logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from pathlib import Path

from .contiguity import (
    from_adjacency_list,
    knn_augment,
    load_adjacency_pairs,
    repair_connectivity,
    rook_adjacency,
)
from .errors import InfeasibleError, InputError
from .geometry import load_geojson_with_raw, shapes_to_feature_collection
from .ingest import filter_regions, load_counts, normalize, read_name_list
from .model_select import DEFAULT_K_MAX, DEFAULT_K_MIN, series_from_partitions
from .plotting import render_fstat_svg
from .report import (
    SYNTH_MANIFEST_SCHEMA_ID,
    assignment_csv,
    build_report,
    export_geojson,
    geojson_text,
    report_json,
    write_text_atomic,
)
from .skater import nested_partitions, partition_is_contiguous
from .synth import GENERATOR_NAME, PlantedScenario, adjusted_rand_index, generate

logger = logging.getLogger("regionkit.cli")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_INTERNAL = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regionkit",
        description="Cluster regions into contiguous groups from per-region activity counts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cluster = sub.add_parser("cluster", help="run the full grouping pipeline")
    cluster.add_argument("--counts", required=True, help="wide count-table CSV")
    cluster.add_argument("--games", help="game-selection file, one name per line (default: all)")
    cluster.add_argument("--exclude", help="region exclusion file, one region_id per line")
    source = cluster.add_mutually_exclusive_group(required=True)
    source.add_argument("--geojson-in", help="GeoJSON FeatureCollection of region polygons")
    source.add_argument("--adjacency", help='explicit adjacency CSV "region_a,region_b"')
    cluster.add_argument("--queen", action="store_true",
                         help="queen contiguity (shared vertices) instead of rook")
    cluster.add_argument("--k", type=int, help="fixed group count (skips the pseudo-F scan)")
    cluster.add_argument("--k-min", type=int, help=f"scan lower bound (default {DEFAULT_K_MIN})")
    cluster.add_argument("--k-max", type=int, help=f"scan upper bound (default {DEFAULT_K_MAX})")
    cluster.add_argument("--neighbors", type=int, default=0,
                         help="augment every node to at least N neighbours (0 = off)")
    cluster.add_argument("--no-repair", action="store_true",
                         help="do not reconnect a fragmented contiguity graph")
    cluster.add_argument("--out", required=True, help="run-report JSON path")
    cluster.add_argument("--geojson-out", help="labeled GeoJSON output path")
    cluster.add_argument("--assignments", help='assignment CSV output ("region_id,cluster")')
    cluster.add_argument("--plot", help="pseudo-F SVG plot path (scan mode only)")
    cluster.set_defaults(func=_cmd_cluster)

    synth = sub.add_parser("synth", help="generate a planted-partition benchmark dataset")
    synth.add_argument("--grid", required=True, help="grid size as WIDTHxHEIGHT, e.g. 12x12")
    synth.add_argument("--k-true", required=True, type=int, help="planted group count")
    synth.add_argument("--signature-games", type=int, default=2,
                       help="signature games per group (default 2)")
    synth.add_argument("--base-total", type=int, default=10_000,
                       help="mean players per cell (default 10000)")
    synth.add_argument("--concentration", type=float, default=0.8,
                       help="probability mass on own-group signature games (default 0.8)")
    synth.add_argument("--seed", type=int, default=0, help="random seed")
    synth.add_argument("--counts-out", required=True, help="count-table CSV output path")
    synth.add_argument("--geojson-out", required=True, help="grid GeoJSON output path")
    synth.add_argument("--truth-out", required=True, help='truth labels CSV ("region_id,group")')
    synth.add_argument("--manifest-out", help="optional scenario manifest JSON")
    synth.set_defaults(func=_cmd_synth)

    score = sub.add_parser("score", help="adjusted Rand index between two label files")
    score.add_argument("--truth", required=True, help='label CSV ("region_id,group")')
    score.add_argument("--predicted", required=True, help='label CSV ("region_id,cluster")')
    score.set_defaults(func=_cmd_score)
    return parser


def _cmd_cluster(args, written: list[Path]) -> int:
    if args.queen and not args.geojson_in:
        raise InputError("--queen requires --geojson-in (polygon contiguity)")
    if args.geojson_out and not args.geojson_in:
        raise InputError("--geojson-out requires --geojson-in")
    if args.k is not None and (args.k_min is not None or args.k_max is not None):
        raise InputError("choose either --k or a --k-min/--k-max scan range")
    if args.plot and args.k is not None:
        raise InputError("--plot requires a pseudo-F scan; drop --k or the plot")
    if args.neighbors < 0:
        raise InputError("--neighbors must be >= 0")

    table = load_counts(args.counts)
    selected = read_name_list(args.games) if args.games else list(table.games)
    matrix = normalize(table, selected)
    if args.exclude:
        matrix = filter_regions(matrix, read_name_list(args.exclude))

    raw_doc = None
    if args.geojson_in:
        shapes, raw_doc = load_geojson_with_raw(args.geojson_in)
        by_id = {s.region_id: s for s in shapes}
        missing = [rid for rid in matrix.region_ids if rid not in by_id]
        if missing:
            raise InputError(
                "regions missing from geometry: " + ", ".join(missing[:5])
                + ("..." if len(missing) > 5 else "")
            )
        ordered = [by_id[rid] for rid in matrix.region_ids]
        graph = rook_adjacency(ordered, queen=args.queen)
        centroids = {s.region_id: s.centroid() for s in ordered}
    else:
        pairs = load_adjacency_pairs(args.adjacency)
        known = set(table.region_ids)
        study = set(matrix.region_ids)
        kept = []
        for a, b in pairs:
            if a not in known:
                raise InputError(f"unknown region_id {a!r} in adjacency pairs")
            if b not in known:
                raise InputError(f"unknown region_id {b!r} in adjacency pairs")
            if a in study and b in study:
                kept.append((a, b))
            else:
                logger.info("dropping adjacency pair (%s, %s): outside study set", a, b)
        graph = from_adjacency_list(kept, matrix.region_ids)
        centroids = table.centroids()

    if args.neighbors:
        graph = knn_augment(graph, centroids, args.neighbors)
    if not args.no_repair:
        graph = repair_connectivity(graph, centroids)
    if not graph.is_connected:
        raise InfeasibleError(
            "contiguity graph is disconnected and --no-repair is set"
        )

    if args.k is not None:
        parts = nested_partitions(graph, matrix, args.k)
        primary = parts[args.k - 1]
        series = None
        assignments = {args.k: primary.assignment}
    else:
        k_min = args.k_min if args.k_min is not None else DEFAULT_K_MIN
        k_max = args.k_max if args.k_max is not None else DEFAULT_K_MAX
        n = matrix.n_regions
        if not (2 <= k_min <= k_max <= n - 1):
            raise InputError(
                f"scan range must satisfy 2 <= k_min <= k_max <= n - 1; "
                f"got [{k_min}, {k_max}] with n={n}"
            )
        parts = nested_partitions(graph, matrix, k_max)
        series = series_from_partitions(matrix, parts, k_min, k_max)
        primary = parts[series.best_k - 1]
        assignments = {series.best_k: primary.assignment}
        if series.second_best_k is not None:
            assignments[series.second_best_k] = parts[series.second_best_k - 1].assignment

    # final gate: every emitted cluster must be connected in the effective graph
    for k, labels in assignments.items():
        if not partition_is_contiguous(graph, labels):
            raise RuntimeError(f"internal error: k={k} grouping violates contiguity")

    config_echo = {
        "command": "cluster",
        "counts": args.counts,
        "games": args.games,
        "exclude": args.exclude,
        "geojson_in": args.geojson_in,
        "adjacency": args.adjacency,
        "queen": args.queen,
        "k": args.k,
        "k_min": args.k_min,
        "k_max": args.k_max,
        "neighbors": args.neighbors,
        "no_repair": args.no_repair,
        "out": args.out,
        "geojson_out": args.geojson_out,
        "assignments": args.assignments,
        "plot": args.plot,
    }
    report = build_report(
        matrix=matrix, graph=graph, series=series,
        assignments=assignments, config_echo=config_echo,
    )

    outputs: list[tuple[str, str]] = [(args.out, report_json(report))]
    if args.assignments:
        outputs.append((args.assignments, assignment_csv(matrix.region_ids, primary.assignment)))
    if args.geojson_out:
        study = set(matrix.region_ids)
        subset = dict(raw_doc)
        subset["features"] = [
            f for f in raw_doc.get("features", [])
            if (f.get("properties") or {}).get("region_id") in study
        ]
        labeled = export_geojson(subset, dict(zip(matrix.region_ids, primary.assignment)))
        outputs.append((args.geojson_out, geojson_text(labeled)))
    if args.plot:
        outputs.append((args.plot, render_fstat_svg(series)))

    for path, text in outputs:
        write_text_atomic(path, text)
        written.append(Path(path))

    summary = {"n_regions": matrix.n_regions, "k": primary.k, "out": args.out}
    if series is not None:
        summary["best_k"] = series.best_k
        summary["second_best_k"] = series.second_best_k
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def _parse_grid(text: str) -> tuple[int, int]:
    match = re.fullmatch(r"(\d+)x(\d+)", text.strip())
    if not match:
        raise InputError(f'bad --grid {text!r}: expected WIDTHxHEIGHT, e.g. "12x12"')
    return int(match.group(1)), int(match.group(2))


def _counts_csv(dataset) -> str:
    table = dataset.table
    header = ["region", "total", "cx", "cy"] + list(table.games)
    lines = [",".join(header)]
    for i, record in enumerate(table.regions):
        cx, cy = record.centroid
        row = [record.region_id, str(int(table.totals[i])), f"{cx:g}", f"{cy:g}"]
        row += [str(int(c)) for c in table.counts[i]]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _truth_csv(dataset) -> str:
    lines = ["region_id,group"]
    lines += [
        f"{r.region_id},{int(t)}" for r, t in zip(dataset.table.regions, dataset.truth)
    ]
    return "\n".join(lines) + "\n"


def _cmd_synth(args, written: list[Path]) -> int:
    scenario = PlantedScenario(
        grid=_parse_grid(args.grid),
        k_true=args.k_true,
        signature_games_per_group=args.signature_games,
        base_total=args.base_total,
        concentration=args.concentration,
        seed=args.seed,
    )
    dataset = generate(scenario)

    outputs = [
        (args.counts_out, _counts_csv(dataset)),
        (args.geojson_out, geojson_text(shapes_to_feature_collection(dataset.shapes))),
        (args.truth_out, _truth_csv(dataset)),
    ]
    if args.manifest_out:
        manifest = {
            "schema": SYNTH_MANIFEST_SCHEMA_ID,
            "rng": GENERATOR_NAME,
            "scenario": {
                "grid": list(scenario.grid),
                "k_true": scenario.k_true,
                "signature_games_per_group": scenario.signature_games_per_group,
                "base_total": scenario.base_total,
                "concentration": scenario.concentration,
                "seed": scenario.seed,
            },
        }
        outputs.append((args.manifest_out, json.dumps(manifest, indent=2, sort_keys=True) + "\n"))
    for path, text in outputs:
        write_text_atomic(path, text)
        written.append(Path(path))
    print(json.dumps({"cells": scenario.n_cells, "k_true": scenario.k_true,
                      "counts": args.counts_out}, sort_keys=True))
    return EXIT_OK


def _read_label_file(path) -> dict[str, str]:
    import csv as _csv

    path = Path(path)
    if not path.is_file():
        raise InputError(f"label file not found: {path}")
    with path.open(encoding="utf-8", newline="") as fh:
        rows = list(_csv.reader(fh))
    if not rows or len(rows[0]) != 2 or rows[0][0].strip() != "region_id":
        raise InputError(f'{path}: expected a two-column CSV with a "region_id" header')
    labels = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(f.strip() == "" for f in row):
            continue
        if len(row) != 2 or not row[0].strip():
            raise InputError(f"{path} line {lineno}: malformed label row")
        rid = row[0].strip()
        if rid in labels:
            raise InputError(f"{path} line {lineno}: duplicate region_id {rid!r}")
        labels[rid] = row[1].strip()
    if not labels:
        raise InputError(f"{path}: no label rows")
    return labels


def _cmd_score(args, written: list[Path]) -> int:
    truth = _read_label_file(args.truth)
    predicted = _read_label_file(args.predicted)
    if set(truth) != set(predicted):
        only_t = sorted(set(truth) - set(predicted))[:3]
        only_p = sorted(set(predicted) - set(truth))[:3]
        raise InputError(
            f"label files cover different regions (e.g. truth-only {only_t}, "
            f"predicted-only {only_p})"
        )
    ids = sorted(truth)
    ari = adjusted_rand_index([truth[i] for i in ids], [predicted[i] for i in ids])
    print(f"{ari:.6f}")
    return EXIT_OK


def _configure_logging() -> None:
    level_name = os.environ.get("REGIONKIT_LOG", "").strip().upper()
    if level_name:
        level = getattr(logging, level_name, None)
        if isinstance(level, int):
            logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _error_line(message: str, code: int) -> None:
    print(json.dumps({"error": message, "exit_code": code}, sort_keys=True), file=sys.stderr)


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    written: list[Path] = []
    try:
        return args.func(args, written)
    except InputError as exc:
        _cleanup(written)
        _error_line(str(exc), EXIT_INPUT)
        return EXIT_INPUT
    except InfeasibleError as exc:
        _cleanup(written)
        _error_line(str(exc), EXIT_INFEASIBLE)
        return EXIT_INFEASIBLE
    except Exception as exc:  # pragma: no cover - defensive
        _cleanup(written)
        _error_line(f"internal error: {exc}", EXIT_INTERNAL)
        return EXIT_INTERNAL


def _cleanup(written: list[Path]) -> None:
    for path in written:
        try:
            path.unlink()
        except OSError:
            pass


if __name__ == "__main__":
    sys.exit(main())
