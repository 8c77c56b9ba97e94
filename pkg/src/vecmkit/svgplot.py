"""Self-contained SVG line charts, no plotting dependency.

Good enough for batch diagnostics: axes with tick labels, one polyline
per named series, and a legend.  Output is deterministic for identical
inputs so emitted files are byte-stable across runs.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Mapping, Sequence

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_MARGIN_LEFT = 72.0
_MARGIN_RIGHT = 18.0
_MARGIN_TOP = 36.0
_MARGIN_BOTTOM = 46.0


def _ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    magnitude = 10.0 ** math.floor(math.log10(raw))
    for factor in (1.0, 2.0, 5.0, 10.0):
        if raw <= factor * magnitude:
            step = factor * magnitude
            break
    first = step * math.ceil(lo / step)
    ticks = []
    value = first
    while value <= hi + 1e-9 * step:
        ticks.append(round(value, 12))
        value += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def write_line_chart(
    path: str | Path,
    x: Sequence[float],
    series: Mapping[str, Sequence[float]],
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    width: int = 720,
    height: int = 440,
) -> None:
    """Render one chart with a shared x axis to ``path``."""
    if not series:
        raise ValueError("at least one series is required")
    x = [float(v) for v in x]
    for name, values in series.items():
        if len(values) != len(x):
            raise ValueError(f"series {name!r} length {len(values)} != x length {len(x)}")
    if len(x) < 2:
        raise ValueError("need at least two points per series")

    x_lo, x_hi = min(x), max(x)
    all_y = [float(v) for values in series.values() for v in values]
    y_lo, y_hi = min(all_y), max(all_y)
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = width - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = height - _MARGIN_TOP - _MARGIN_BOTTOM

    def sx(v: float) -> float:
        return _MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v: float) -> float:
        return _MARGIN_TOP + (y_hi - v) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{_escape(title)}</text>'
        )

    # gridlines and axis ticks
    for tick in _ticks(y_lo, y_hi):
        ty = sy(tick)
        parts.append(
            f'<line x1="{_MARGIN_LEFT:.1f}" y1="{ty:.2f}" x2="{width - _MARGIN_RIGHT:.1f}" '
            f'y2="{ty:.2f}" stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_LEFT - 6:.1f}" y="{ty + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_fmt(tick)}</text>'
        )
    for tick in _ticks(x_lo, x_hi):
        tx = sx(tick)
        parts.append(
            f'<line x1="{tx:.2f}" y1="{height - _MARGIN_BOTTOM:.1f}" x2="{tx:.2f}" '
            f'y2="{height - _MARGIN_BOTTOM + 4:.1f}" stroke="#333333" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{tx:.2f}" y="{height - _MARGIN_BOTTOM + 17:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_fmt(tick)}</text>'
        )

    # axes
    parts.append(
        f'<line x1="{_MARGIN_LEFT:.1f}" y1="{_MARGIN_TOP:.1f}" x2="{_MARGIN_LEFT:.1f}" '
        f'y2="{height - _MARGIN_BOTTOM:.1f}" stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{_MARGIN_LEFT:.1f}" y1="{height - _MARGIN_BOTTOM:.1f}" '
        f'x2="{width - _MARGIN_RIGHT:.1f}" y2="{height - _MARGIN_BOTTOM:.1f}" '
        f'stroke="#333333" stroke-width="1"/>'
    )
    if x_label:
        parts.append(
            f'<text x="{(_MARGIN_LEFT + width - _MARGIN_RIGHT) / 2:.1f}" y="{height - 8:.1f}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="12">{_escape(x_label)}</text>'
        )
    if y_label:
        cy = (_MARGIN_TOP + height - _MARGIN_BOTTOM) / 2
        parts.append(
            f'<text x="14" y="{cy:.1f}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="12" transform="rotate(-90 14 {cy:.1f})">{_escape(y_label)}</text>'
        )

    for i, (name, values) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        points = " ".join(f"{sx(xv):.2f},{sy(float(yv)):.2f}" for xv, yv in zip(x, values))
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.6"/>'
        )

    # legend, top-right inside the plot area
    legend_x = width - _MARGIN_RIGHT - 150
    for i, name in enumerate(series):
        ly = _MARGIN_TOP + 12 + 16 * i
        color = PALETTE[i % len(PALETTE)]
        parts.append(
            f'<line x1="{legend_x:.1f}" y1="{ly:.1f}" x2="{legend_x + 22:.1f}" y2="{ly:.1f}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{legend_x + 28:.1f}" y="{ly + 4:.1f}" font-family="sans-serif" '
            f'font-size="11">{_escape(name)}</text>'
        )

    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
    )
