"""Polygon geometry: GeoJSON ingestion, ring checks and planar centroids."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import InputError

Ring = tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class RegionShape:
    """One region's polygon geometry: per polygon an exterior ring plus holes."""

    region_id: str
    polygons: tuple[tuple[Ring, ...], ...]
    name: str = ""
    province: str | None = None

    def __post_init__(self):
        if not self.polygons:
            raise InputError(f"region {self.region_id!r} has no polygon geometry")
        for rings in self.polygons:
            if not rings:
                raise InputError(f"region {self.region_id!r} has a polygon without rings")
            for ring in rings:
                _check_ring(ring, self.region_id)

    def rings(self):
        """All boundary rings (exteriors and holes)."""
        for rings in self.polygons:
            yield from rings

    def centroid(self) -> tuple[float, float]:
        """Area-weighted centroid of the largest exterior ring (planar formula)."""
        largest = max((rings[0] for rings in self.polygons), key=lambda r: abs(ring_area(r)))
        return ring_centroid(largest)


def _check_ring(ring: Ring, region_id: str) -> None:
    if len(ring) < 4:
        raise InputError(f"region {region_id!r}: ring has fewer than 4 coordinate pairs")
    for x, y in ring:
        if not (math.isfinite(x) and math.isfinite(y)):
            raise InputError(f"region {region_id!r}: non-finite coordinate in ring")
    if ring[0] != ring[-1]:
        raise InputError(f"region {region_id!r}: unclosed ring")


def ring_area(ring: Ring) -> float:
    """Signed shoelace area of a closed ring."""
    area = 0.0
    for (x0, y0), (x1, y1) in zip(ring, ring[1:]):
        area += x0 * y1 - x1 * y0
    return area / 2.0


def ring_centroid(ring: Ring) -> tuple[float, float]:
    """Planar area-weighted centroid of a closed ring.

    Falls back to the vertex mean for degenerate (zero-area) rings.
    """
    area = ring_area(ring)
    if area == 0.0:
        xs = [p[0] for p in ring[:-1]]
        ys = [p[1] for p in ring[:-1]]
        return (sum(xs) / len(xs), sum(ys) / len(ys))
    cx = cy = 0.0
    for (x0, y0), (x1, y1) in zip(ring, ring[1:]):
        cross = x0 * y1 - x1 * y0
        cx += (x0 + x1) * cross
        cy += (y0 + y1) * cross
    return (cx / (6.0 * area), cy / (6.0 * area))


def _coerce_ring(coords, region_id: str) -> Ring:
    try:
        ring = tuple((float(p[0]), float(p[1])) for p in coords)
    except (TypeError, ValueError, IndexError):
        raise InputError(f"region {region_id!r}: malformed ring coordinates") from None
    return ring


def shape_from_geojson_feature(feature: dict) -> RegionShape:
    """Build a RegionShape from one GeoJSON Feature dict."""
    props = feature.get("properties") or {}
    region_id = props.get("region_id")
    if not region_id:
        raise InputError('GeoJSON feature is missing the "region_id" property')
    region_id = str(region_id)
    geom = feature.get("geometry") or {}
    gtype = geom.get("type")
    coords = geom.get("coordinates")
    if gtype == "Polygon":
        poly_list = [coords]
    elif gtype == "MultiPolygon":
        poly_list = coords
    else:
        raise InputError(
            f"region {region_id!r}: unsupported geometry type {gtype!r} "
            "(expected Polygon or MultiPolygon)"
        )
    if not poly_list:
        raise InputError(f"region {region_id!r}: empty geometry")
    polygons = tuple(
        tuple(_coerce_ring(ring, region_id) for ring in poly) for poly in poly_list
    )
    return RegionShape(
        region_id=region_id,
        polygons=polygons,
        name=str(props.get("name", "") or ""),
        province=props.get("province"),
    )


def load_geojson(path) -> list[RegionShape]:
    """Load a GeoJSON FeatureCollection of region polygons.

    Each feature must carry a ``region_id`` property; ``name`` and
    ``province`` are picked up when present. Duplicate region_ids are
    rejected.
    """
    shapes, _ = load_geojson_with_raw(path)
    return shapes


def load_geojson_with_raw(path) -> tuple[list[RegionShape], dict]:
    """Like load_geojson but also returns the parsed document for re-export."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"GeoJSON file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid GeoJSON in {path}: {exc}") from None
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise InputError(f"{path}: expected a GeoJSON FeatureCollection")
    shapes = [shape_from_geojson_feature(f) for f in doc.get("features", [])]
    seen = set()
    for shape in shapes:
        if shape.region_id in seen:
            raise InputError(f"duplicate region_id {shape.region_id!r} in {path}")
        seen.add(shape.region_id)
    return shapes, doc


def unit_square_shape(region_id: str, col: int, row: int, name: str = "") -> RegionShape:
    """Axis-aligned unit-square cell with lower-left corner at (col, row)."""
    x, y = float(col), float(row)
    ring = ((x, y), (x + 1.0, y), (x + 1.0, y + 1.0), (x, y + 1.0), (x, y))
    return RegionShape(region_id=region_id, polygons=((ring,),), name=name)


def shapes_to_feature_collection(shapes) -> dict:
    """Serialize RegionShapes into a GeoJSON FeatureCollection dict."""
    features = []
    for shape in shapes:
        multi = [[list(list(pt) for pt in ring) for ring in poly] for poly in shape.polygons]
        if len(multi) == 1:
            geometry = {"type": "Polygon", "coordinates": multi[0]}
        else:
            geometry = {"type": "MultiPolygon", "coordinates": multi}
        props = {"region_id": shape.region_id}
        if shape.name:
            props["name"] = shape.name
        if shape.province is not None:
            props["province"] = shape.province
        features.append({"type": "Feature", "properties": props, "geometry": geometry})
    return {"type": "FeatureCollection", "features": features}
