"""Minimal deterministic SVG line plots.

Hand-emitted polyline plus axes, no plotting dependency: identical inputs
produce byte-identical files.
"""

from __future__ import annotations

import numpy as np

_WIDTH, _HEIGHT = 720.0, 480.0
_MARGIN = 64.0


def _fmt(v: float) -> str:
    return format(float(v), ".6f")


def line_plot_svg(xs, ys, title: str, xlabel: str = "x", ylabel: str = "") -> str:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    xspan = (x1 - x0) or 1.0
    yspan = (y1 - y0) or 1.0
    inner_w = _WIDTH - 2 * _MARGIN
    inner_h = _HEIGHT - 2 * _MARGIN

    def px(x):
        return _MARGIN + (x - x0) / xspan * inner_w

    def py(y):
        return _HEIGHT - _MARGIN - (y - y0) / yspan * inner_h

    points = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(xs, ys))
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH:g}" height="{_HEIGHT:g}" '
        f'viewBox="0 0 {_WIDTH:g} {_HEIGHT:g}">',
        f'<rect x="0" y="0" width="{_WIDTH:g}" height="{_HEIGHT:g}" fill="#ffffff"/>',
        f'<rect x="{_fmt(_MARGIN)}" y="{_fmt(_MARGIN)}" width="{_fmt(inner_w)}" '
        f'height="{_fmt(inner_h)}" fill="none" stroke="#333333" stroke-width="1"/>',
        f'<text x="{_fmt(_WIDTH / 2)}" y="{_fmt(_MARGIN / 2)}" text-anchor="middle" '
        f'font-family="monospace" font-size="16">{title}</text>',
        f'<text x="{_fmt(_WIDTH / 2)}" y="{_fmt(_HEIGHT - 12.0)}" text-anchor="middle" '
        f'font-family="monospace" font-size="12">{xlabel}</text>',
        f'<text x="{_fmt(_MARGIN)}" y="{_fmt(_HEIGHT - _MARGIN + 16.0)}" text-anchor="middle" '
        f'font-family="monospace" font-size="11">{format(x0, ".6g")}</text>',
        f'<text x="{_fmt(_WIDTH - _MARGIN)}" y="{_fmt(_HEIGHT - _MARGIN + 16.0)}" '
        f'text-anchor="middle" font-family="monospace" font-size="11">{format(x1, ".6g")}</text>',
        f'<text x="{_fmt(_MARGIN - 6.0)}" y="{_fmt(_HEIGHT - _MARGIN)}" text-anchor="end" '
        f'font-family="monospace" font-size="11">{format(y0, ".6g")}</text>',
        f'<text x="{_fmt(_MARGIN - 6.0)}" y="{_fmt(_MARGIN + 4.0)}" text-anchor="end" '
        f'font-family="monospace" font-size="11">{format(y1, ".6g")}</text>',
        f'<polyline points="{points}" fill="none" stroke="#1f4e9c" stroke-width="1.5"/>',
        "</svg>",
        "",
    ]
    return "\n".join(lines)
