"""Minimal SVG emission for the per-target error bar chart.

Hand-rolled on purpose: the only figure the pipeline needs is one grouped
bar chart, and emitting the SVG directly keeps the output byte-stable.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

_WIDTH = 900
_PANEL_HEIGHT = 230
_MARGIN_LEFT = 70
_MARGIN_RIGHT = 20
_MARGIN_TOP = 34
_GAP = 46
_BAR_FILL = ("#4878a8", "#a85448")


def _panel(
    lines: list[str],
    labels: Sequence[str],
    values: Sequence[float],
    top: int,
    title: str,
    fill: str,
) -> None:
    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _PANEL_HEIGHT - _MARGIN_TOP
    vmax = max(values) if values and max(values) > 0 else 1.0
    n = len(values)
    slot = plot_w / n
    bar_w = slot * 0.62
    base_y = top + _PANEL_HEIGHT

    lines.append(
        f'<text x="{_MARGIN_LEFT}" y="{top + 18}" font-size="15" '
        f'font-family="sans-serif" fill="#222">{title}</text>'
    )
    lines.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{base_y}" x2="{_WIDTH - _MARGIN_RIGHT}" '
        f'y2="{base_y}" stroke="#444" stroke-width="1"/>'
    )
    for i, (label, value) in enumerate(zip(labels, values)):
        h = plot_h * (value / vmax)
        x = _MARGIN_LEFT + i * slot + (slot - bar_w) / 2
        y = base_y - h
        cx = x + bar_w / 2
        lines.append(
            f'<rect x="{x:.1f}" y="{y:.1f}" width="{bar_w:.1f}" height="{h:.1f}" fill="{fill}"/>'
        )
        lines.append(
            f'<text x="{cx:.1f}" y="{y - 5:.1f}" font-size="11" font-family="sans-serif" '
            f'text-anchor="middle" fill="#222">{value:.2f}</text>'
        )
        lines.append(
            f'<text x="{cx:.1f}" y="{base_y + 16}" font-size="11" font-family="sans-serif" '
            f'text-anchor="middle" fill="#222">{label}</text>'
        )


def error_bar_chart_svg(
    path: str | Path,
    labels: Sequence[str],
    mean_deg: Sequence[float],
    mean_px: Sequence[float],
) -> None:
    """Write a two-panel bar chart of per-target mean error (degrees, pixels)."""
    total_h = 2 * (_PANEL_HEIGHT + _GAP)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{total_h}" '
        f'viewBox="0 0 {_WIDTH} {total_h}">',
        f'<rect width="{_WIDTH}" height="{total_h}" fill="#ffffff"/>',
    ]
    _panel(lines, labels, list(mean_deg), 0, "Mean gaze error per target (degrees)", _BAR_FILL[0])
    _panel(
        lines,
        labels,
        list(mean_px),
        _PANEL_HEIGHT + _GAP,
        "Mean gaze error per target (pixels)",
        _BAR_FILL[1],
    )
    lines.append("</svg>")
    Path(path).write_text("\n".join(lines) + "\n")
