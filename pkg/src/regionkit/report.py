"""Run-report assembly, labeled GeoJSON export and atomic file writes."""

from __future__ import annotations

import copy
import json
import math
import os
import tempfile
from pathlib import Path

from .errors import InputError
from .model_select import FStatSeries

REPORT_SCHEMA_ID = "regionkit/run-report/v1"
SYNTH_MANIFEST_SCHEMA_ID = "regionkit/synth-manifest/v1"


def write_text_atomic(path, text: str) -> None:
    """Write text via a temp file and rename, so readers never see partials."""
    path = Path(path)
    if path.parent and not path.parent.is_dir():
        raise InputError(f"output directory does not exist: {path.parent}")
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def series_payload(series: FStatSeries | None) -> dict | None:
    """JSON-safe view of a pseudo-F series; +inf becomes null + degenerate flag."""
    if series is None:
        return None
    entries = []
    for e in series.entries:
        entries.append(
            {
                "k": e.k,
                "ch": None if math.isinf(e.ch) else e.ch,
                "within_ssd": e.within_ssd,
                "degenerate": e.degenerate,
            }
        )
    return {
        "k_min": series.entries[0].k,
        "k_max": series.entries[-1].k,
        "best_k": series.best_k,
        "second_best_k": series.second_best_k,
        "entries": entries,
    }


def build_report(*, matrix, graph, series, assignments, config_echo) -> dict:
    """Assemble the machine-readable run report.

    ``assignments`` maps k -> label sequence aligned with
    ``matrix.region_ids``; ``config_echo`` must suffice to reproduce the
    run bit-identically.
    """
    return {
        "schema": REPORT_SCHEMA_ID,
        "n_regions": matrix.n_regions,
        "n_features": len(matrix.feature_names),
        "region_ids": list(matrix.region_ids),
        "feature_names": list(matrix.feature_names),
        "dropped_regions": [
            {"region_id": n.region_id, "reason": n.reason} for n in matrix.dropped
        ],
        "excluded_regions": [
            {"region_id": n.region_id, "reason": n.reason} for n in matrix.excluded
        ],
        "provenance_notes": list(matrix.provenance),
        "graph": {
            "n_nodes": graph.n_nodes,
            "n_edges": len(graph.edges),
            "repair_edges": [list(e) for e in graph.edges_tagged("repair")],
            "knn_edges": [list(e) for e in graph.edges_tagged("knn")],
        },
        "series": series_payload(series),
        "assignments": {str(k): [int(x) for x in labels] for k, labels in assignments.items()},
        "config_echo": config_echo,
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def export_geojson(geometry: dict, assignment) -> dict:
    """Attach integer "cluster" properties to a FeatureCollection.

    Parameters
    ----------
    geometry : dict
        Parsed GeoJSON FeatureCollection; geometry coordinates are
        carried through untouched.
    assignment : mapping region_id -> group label (1..k)

    Raises
    ------
    InputError
        If a feature lacks a region_id or has no label in ``assignment``.
    """
    if geometry.get("type") != "FeatureCollection":
        raise InputError("export expects a GeoJSON FeatureCollection")
    out = copy.deepcopy(geometry)
    for feature in out.get("features", []):
        props = feature.setdefault("properties", {})
        rid = props.get("region_id")
        if not rid:
            raise InputError('GeoJSON feature is missing the "region_id" property')
        if rid not in assignment:
            raise InputError(f"region {rid!r} has no cluster assignment")
        props["cluster"] = int(assignment[rid])
    return out


def geojson_text(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True) + "\n"


def assignment_csv(region_ids, labels) -> str:
    lines = ["region_id,cluster"]
    lines += [f"{rid},{int(lab)}" for rid, lab in zip(region_ids, labels)]
    return "\n".join(lines) + "\n"
