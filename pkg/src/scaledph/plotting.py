"""Persistence-diagram plots as standalone SVG.

Birth on the horizontal axis, death on the vertical, the diagonal drawn
through the finite square, and points with infinite death raised into a
separate band above an axis break.  Coincident diagram points get a
single marker with a multiplicity label.  Marker shape and colour vary
by homology dimension.

No drawing library is involved; the output is a few dozen SVG elements
assembled by hand, which keeps renders byte-deterministic for a given
diagram.
"""

from __future__ import annotations

import math
import os
from collections import Counter

from .persistence import PersistenceDiagram

__all__ = ["diagram_svg", "write_diagram_svg"]

# layout constants (pixels)
_SIDE = 380.0
_ML, _MR, _MT, _MB = 62.0, 20.0, 20.0, 48.0
_BAND = 30.0
_GAP = 12.0

_SHAPES = ("circle", "square", "triangle", "diamond")
_COLORS = ("#2b6cb0", "#c05621", "#2f855a", "#6b46c1")


def _fmt(x: float) -> str:
    return format(float(x), ".6g")


def _tick_label(x: float) -> str:
    return format(float(x), ".4g")


def _marker(shape: str, cx: float, cy: float, color: str) -> str:
    r = 4.0
    if shape == "circle":
        return (
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" '
            f'fill="{color}"/>'
        )
    if shape == "square":
        return (
            f'<rect x="{_fmt(cx - r)}" y="{_fmt(cy - r)}" '
            f'width="{_fmt(2 * r)}" height="{_fmt(2 * r)}" fill="{color}"/>'
        )
    if shape == "triangle":
        pts = (
            f"{_fmt(cx)},{_fmt(cy - r - 1)} {_fmt(cx - r - 1)},{_fmt(cy + r)} "
            f"{_fmt(cx + r + 1)},{_fmt(cy + r)}"
        )
        return f'<polygon points="{pts}" fill="{color}"/>'
    pts = (
        f"{_fmt(cx)},{_fmt(cy - r - 1)} {_fmt(cx + r + 1)},{_fmt(cy)} "
        f"{_fmt(cx)},{_fmt(cy + r + 1)} {_fmt(cx - r - 1)},{_fmt(cy)}"
    )
    return f'<polygon points="{pts}" fill="{color}"/>'


def diagram_svg(diagram: PersistenceDiagram, title: str = "") -> str:
    """Render ``diagram`` to SVG text."""
    pts = Counter(
        (int(q), float(b), float(v))
        for q, b, v in zip(diagram.dims, diagram.births, diagram.deaths)
    )
    has_inf = any(math.isinf(v) for (_, _, v) in pts)

    finite_vals = [b for (_, b, _) in pts]
    finite_vals += [v for (_, _, v) in pts if math.isfinite(v)]
    vmax = max(finite_vals) if finite_vals else 1.0
    if vmax <= 0.0:
        vmax = 1.0
    vmax *= 1.05

    band = _BAND + _GAP if has_inf else 0.0
    width = _ML + _SIDE + _MR
    height = _MT + band + _SIDE + _MB
    x0, y0 = _ML, _MT + band + _SIDE  # data origin in pixels

    def px(b: float) -> float:
        return x0 + (b / vmax) * _SIDE

    def py(v: float) -> float:
        if math.isinf(v):
            return _MT + _BAND / 2.0
        return y0 - (v / vmax) * _SIDE

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}" '
        'font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" '
        'fill="white"/>',
    ]
    if title:
        esc = (
            title.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        )
        out.append(
            f'<text x="{_fmt(x0 + _SIDE / 2)}" y="14" text-anchor="middle">'
            f"{esc}</text>"
        )

    # axes
    out.append(
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x0 + _SIDE)}" '
        f'y2="{_fmt(y0)}" stroke="black"/>'
    )
    out.append(
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x0)}" '
        f'y2="{_fmt(_MT + band)}" stroke="black"/>'
    )
    # diagonal across the finite square
    out.append(
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(px(vmax))}" '
        f'y2="{_fmt(py(vmax))}" stroke="#999999" stroke-dasharray="4 3"/>'
    )

    for i in range(5):
        t = vmax * i / 4.0
        out.append(
            f'<line x1="{_fmt(px(t))}" y1="{_fmt(y0)}" x2="{_fmt(px(t))}" '
            f'y2="{_fmt(y0 + 4)}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_fmt(px(t))}" y="{_fmt(y0 + 16)}" '
            f'text-anchor="middle">{_tick_label(t)}</text>'
        )
        out.append(
            f'<line x1="{_fmt(x0 - 4)}" y1="{_fmt(py(t))}" x2="{_fmt(x0)}" '
            f'y2="{_fmt(py(t))}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_fmt(x0 - 7)}" y="{_fmt(py(t) + 4)}" '
            f'text-anchor="end">{_tick_label(t)}</text>'
        )
    out.append(
        f'<text x="{_fmt(x0 + _SIDE / 2)}" y="{_fmt(height - 12)}" '
        'text-anchor="middle">birth</text>'
    )
    out.append(
        f'<text x="16" y="{_fmt(y0 - _SIDE / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 16 {_fmt(y0 - _SIDE / 2)})">death</text>'
    )

    if has_inf:
        # axis break below the infinity band
        ybreak = _MT + _BAND + _GAP / 2.0
        out.append(
            f'<line x1="{_fmt(x0)}" y1="{_fmt(ybreak)}" '
            f'x2="{_fmt(x0 + _SIDE)}" y2="{_fmt(ybreak)}" stroke="#999999" '
            'stroke-dasharray="2 4"/>'
        )
        out.append(
            f'<text x="{_fmt(x0 - 7)}" y="{_fmt(_MT + _BAND / 2 + 4)}" '
            'text-anchor="end">&#8734;</text>'
        )

    dims_present = sorted({q for (q, _, _) in pts})
    for q, b, v in sorted(pts):
        shape = _SHAPES[min(q, len(_SHAPES) - 1)]
        color = _COLORS[min(q, len(_COLORS) - 1)]
        cx, cy = px(b), py(v)
        out.append(_marker(shape, cx, cy, color))
        mult = pts[(q, b, v)]
        if mult >= 2:
            out.append(
                f'<text x="{_fmt(cx + 6)}" y="{_fmt(cy - 5)}" '
                f'fill="{color}">{mult}</text>'
            )

    # small legend, one entry per dimension present
    for j, q in enumerate(dims_present):
        lx = x0 + _SIDE - 58
        ly = _MT + band + 14 + 16 * j
        shape = _SHAPES[min(q, len(_SHAPES) - 1)]
        color = _COLORS[min(q, len(_COLORS) - 1)]
        out.append(_marker(shape, lx, ly - 4, color))
        out.append(f'<text x="{_fmt(lx + 9)}" y="{_fmt(ly)}">H{q}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_diagram_svg(
    path: str | os.PathLike[str], diagram: PersistenceDiagram, title: str = ""
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(diagram_svg(diagram, title=title))
