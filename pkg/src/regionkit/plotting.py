"""Deterministic SVG rendering of the pseudo-F model-selection curve.

The plot is written by hand rather than through a plotting library so
identical inputs yield byte-identical files, which keeps golden tests
honest and diffs readable.
"""

from __future__ import annotations

import math

from .errors import InputError
from .model_select import FStatSeries

WIDTH, HEIGHT = 640, 400
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 72, 24, 24, 56


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def render_fstat_svg(series: FStatSeries) -> str:
    """Render the series as an SVG document string.

    Every candidate k gets a hollow marker; the best k gets the single
    solid marker. Degenerate (+inf) entries are pinned to the top of the
    axis and labelled "inf".
    """
    entries = series.entries
    ks = [e.k for e in entries]
    finite = [e.ch for e in entries if math.isfinite(e.ch)]
    k_lo, k_hi = min(ks), max(ks)
    if k_lo == k_hi:
        k_lo, k_hi = k_lo - 1, k_hi + 1
    y_hi = max(finite) * 1.08 if finite and max(finite) > 0 else 1.0

    x0, x1 = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    y0, y1 = HEIGHT - MARGIN_BOTTOM, MARGIN_TOP

    def sx(k: float) -> float:
        return x0 + (k - k_lo) / (k_hi - k_lo) * (x1 - x0)

    def sy(ch: float) -> float:
        if math.isinf(ch):
            return float(y1)
        return y0 - ch / y_hi * (y0 - y1)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="#000000"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="#000000"/>',
    ]

    step = 1 if len(ks) <= 20 else 2
    for k in range(k_lo, k_hi + 1):
        if (k - k_lo) % step:
            continue
        x = _fmt(sx(k))
        parts.append(f'<line x1="{x}" y1="{y0}" x2="{x}" y2="{y0 + 5}" stroke="#000000"/>')
        parts.append(
            f'<text x="{x}" y="{y0 + 20}" font-family="sans-serif" font-size="12" '
            f'text-anchor="middle">{k}</text>'
        )
    for i in range(5):
        ch = y_hi * i / 4
        y = _fmt(sy(ch))
        parts.append(f'<line x1="{x0 - 5}" y1="{y}" x2="{x0}" y2="{y}" stroke="#000000"/>')
        parts.append(
            f'<text x="{x0 - 9}" y="{y}" font-family="sans-serif" font-size="12" '
            f'text-anchor="end" dominant-baseline="middle">{ch:.4g}</text>'
        )
    parts.append(
        f'<text x="{(x0 + x1) / 2:.1f}" y="{HEIGHT - 16}" font-family="sans-serif" '
        f'font-size="13" text-anchor="middle">number of groups (k)</text>'
    )
    parts.append(
        f'<text x="18" y="{(y0 + y1) / 2:.1f}" font-family="sans-serif" font-size="13" '
        f'text-anchor="middle" transform="rotate(-90 18 {(y0 + y1) / 2:.1f})">'
        "Calinski-Harabasz pseudo-F</text>"
    )

    points = " ".join(f"{_fmt(sx(e.k))},{_fmt(sy(e.ch))}" for e in entries)
    if len(entries) > 1:
        parts.append(f'<polyline points="{points}" fill="none" stroke="#888888"/>')

    for e in entries:
        solid = e.k == series.best_k
        fill = "#000000" if solid else "#ffffff"
        marker = "best" if solid else "candidate"
        parts.append(
            f'<circle class="{marker}" cx="{_fmt(sx(e.k))}" cy="{_fmt(sy(e.ch))}" r="5" '
            f'fill="{fill}" stroke="#000000"/>'
        )
        if e.degenerate:
            parts.append(
                f'<text x="{_fmt(sx(e.k))}" y="{y1 - 6}" font-family="sans-serif" '
                f'font-size="11" text-anchor="middle">inf</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def plot_fstat(series: FStatSeries, path) -> None:
    """Write the pseudo-F scan as an SVG file (atomically)."""
    from .report import write_text_atomic  # local import to avoid a cycle

    if not isinstance(series, FStatSeries) or not series.entries:
        raise InputError("plot_fstat needs a non-empty FStatSeries")
    write_text_atomic(path, render_fstat_svg(series))
