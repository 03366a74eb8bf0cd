"""Standalone SVG rendering of the surprise function.

The plot shows the surprise curve over the parameter grid, a dashed line at
the null surprise threshold, a marker at the null argmax, and the two
regions (above the threshold, at or below it) filled and labeled with their
posterior masses.  Output is self-contained SVG 1.1 with no external
dependencies, so it renders in any browser.
"""
from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .exceptions import InvalidParameterError

WIDTH = 720
HEIGHT = 440
MARGIN_LEFT = 66
MARGIN_RIGHT = 18
MARGIN_TOP = 44
MARGIN_BOTTOM = 52

ABOVE_FILL = "#4c72b0"
BELOW_FILL = "#dd8452"
CURVE_COLOR = "#222222"
FRAME_COLOR = "#888888"


def _nice_ticks(lo: float, hi: float, target: int) -> list:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / max(target, 1)
    power = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * power
        if span / step <= target:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * span:
        ticks.append(0.0 if abs(t) < 1e-12 * span else t)
        t += step
    return ticks


def _region_segments(grid, values, threshold, above: bool):
    """Contiguous curve segments where the region condition holds.

    Crossing points are interpolated so the filled areas meet the threshold
    line exactly.  Membership above the threshold is strict, matching the
    e-value's strict inequality.
    """
    member = values > threshold
    if not above:
        member = ~member
    segments = []
    xs, ys = [], []
    for i in range(grid.size):
        if i > 0 and member[i - 1] != member[i]:
            s0, s1 = values[i - 1], values[i]
            t = (threshold - s0) / (s1 - s0)
            xc = grid[i - 1] + t * (grid[i] - grid[i - 1])
            if member[i]:
                xs, ys = [xc], [threshold]
            else:
                xs.append(xc)
                ys.append(threshold)
                segments.append((xs, ys))
                xs, ys = [], []
        if member[i]:
            xs.append(grid[i])
            ys.append(values[i])
    if xs:
        segments.append((xs, ys))
    return segments


def surprise_plot_svg(
    grid,
    surprise,
    threshold,
    mass_above,
    mass_below,
    marker=None,
    title=None,
    xlabel="parameter",
    ylabel="surprise",
) -> str:
    """Render the surprise plot and return the SVG document as a string."""
    grid = np.asarray(grid, dtype=float)
    surprise = np.asarray(surprise, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or grid.shape != surprise.shape:
        raise InvalidParameterError("grid and surprise must be matching 1-d arrays")
    threshold = float(threshold)

    x0, x1 = float(grid[0]), float(grid[-1])
    ymax = max(float(surprise.max()), threshold, 1e-300) * 1.06
    inner_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    inner_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(x):
        return MARGIN_LEFT + (x - x0) / (x1 - x0) * inner_w

    def sy(y):
        return HEIGHT - MARGIN_BOTTOM - y / ymax * inner_h

    def points(xs, ys):
        return " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]

    for above, color, opacity in ((True, ABOVE_FILL, "0.45"), (False, BELOW_FILL, "0.30")):
        for xs, ys in _region_segments(grid, surprise, threshold, above):
            pts = points(
                [xs[0]] + list(xs) + [xs[-1]],
                [0.0] + list(ys) + [0.0],
            )
            out.append(f'<polygon points="{pts}" fill="{color}" fill-opacity="{opacity}"/>')

    out.append(
        f'<polyline points="{points(grid, surprise)}" fill="none" '
        f'stroke="{CURVE_COLOR}" stroke-width="1.5"/>'
    )
    out.append(
        f'<line x1="{sx(x0):.2f}" y1="{sy(threshold):.2f}" x2="{sx(x1):.2f}" '
        f'y2="{sy(threshold):.2f}" stroke="#555555" stroke-width="1.2" '
        'stroke-dasharray="6 4"/>'
    )
    if marker is not None and x0 <= float(marker) <= x1:
        out.append(
            f'<circle cx="{sx(float(marker)):.2f}" cy="{sy(threshold):.2f}" r="4.5" '
            f'fill="white" stroke="{CURVE_COLOR}" stroke-width="1.5"/>'
        )

    # frame and ticks
    out.append(
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{inner_w}" '
        f'height="{inner_h}" fill="none" stroke="{FRAME_COLOR}" stroke-width="1"/>'
    )
    base = HEIGHT - MARGIN_BOTTOM
    for t in _nice_ticks(x0, x1, 6):
        px = sx(t)
        out.append(
            f'<line x1="{px:.2f}" y1="{base}" x2="{px:.2f}" y2="{base + 5}" '
            f'stroke="{FRAME_COLOR}" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{px:.2f}" y="{base + 18}" font-size="12" '
            f'font-family="sans-serif" text-anchor="middle">{t:g}</text>'
        )
    for t in _nice_ticks(0.0, ymax, 5):
        py = sy(t)
        out.append(
            f'<line x1="{MARGIN_LEFT - 5}" y1="{py:.2f}" x2="{MARGIN_LEFT}" '
            f'y2="{py:.2f}" stroke="{FRAME_COLOR}" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{MARGIN_LEFT - 9}" y="{py + 4:.2f}" font-size="12" '
            f'font-family="sans-serif" text-anchor="end">{t:g}</text>'
        )

    out.append(
        f'<text x="{MARGIN_LEFT + inner_w / 2:.2f}" y="{HEIGHT - 14}" font-size="13" '
        f'font-family="sans-serif" text-anchor="middle">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="18" y="{MARGIN_TOP + inner_h / 2:.2f}" font-size="13" '
        f'font-family="sans-serif" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_TOP + inner_h / 2:.2f})">{escape(ylabel)}</text>'
    )
    if title:
        out.append(
            f'<text x="{WIDTH / 2:.2f}" y="24" font-size="15" '
            f'font-family="sans-serif" text-anchor="middle">{escape(title)}</text>'
        )

    # legend with the two region masses
    lx = MARGIN_LEFT + 10
    ly = MARGIN_TOP + 12
    for color, label in (
        (ABOVE_FILL, f"mass above threshold: {mass_above:.3f}"),
        (BELOW_FILL, f"mass at or below: {mass_below:.3f}"),
    ):
        out.append(
            f'<rect x="{lx}" y="{ly - 9}" width="12" height="12" fill="{color}" '
            'fill-opacity="0.6"/>'
        )
        out.append(
            f'<text x="{lx + 18}" y="{ly + 2}" font-size="12" '
            f'font-family="sans-serif">{escape(label)}</text>'
        )
        ly += 18

    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_surprise_plot(path, *args, **kwargs) -> None:
    Path(path).write_text(surprise_plot_svg(*args, **kwargs), encoding="utf-8")
