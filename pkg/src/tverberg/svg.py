"""Deterministic SVG 1.1 rendering of planar point sets, graphs, disk
families, witness points, and radial projections."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .cycles import GeoGraph
from .geometry import PointSet


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def render_svg(
    points: PointSet,
    graph: Optional[GeoGraph] = None,
    witness=None,
    draw_disks: bool = True,
    radial_center=None,
    width: int = 640,
    labels: bool = False,
) -> str:
    """Render the scene as an SVG document string.

    Draws input points, graph edges, optionally each edge's diametral circle,
    a witness marker, and (when ``radial_center`` is given) the unit circle
    around it with the radial projections of all points.  Output is byte
    identical for identical inputs.
    """
    if points.dim != 2:
        raise ValueError("SVG rendering is planar")
    P = points.coords

    xs = [P[:, 0].min(), P[:, 0].max()]
    ys = [P[:, 1].min(), P[:, 1].max()]
    extras = []
    if graph is not None and draw_disks:
        for a, b in graph.edges:
            c = (P[a] + P[b]) / 2.0
            r = float(np.linalg.norm(P[b] - P[a])) / 2.0
            extras.append((c[0] - r, c[1] - r))
            extras.append((c[0] + r, c[1] + r))
    if witness is not None:
        w = np.asarray(witness, dtype=float)
        extras.append((w[0], w[1]))
    if radial_center is not None:
        c = np.asarray(radial_center, dtype=float)
        extras.append((c[0] - 1.0, c[1] - 1.0))
        extras.append((c[0] + 1.0, c[1] + 1.0))
    for ex, ey in extras:
        xs = [min(xs[0], ex), max(xs[1], ex)]
        ys = [min(ys[0], ey), max(ys[1], ey)]

    span = max(xs[1] - xs[0], ys[1] - ys[0], 1e-9)
    pad = 0.06 * span
    x0, y0 = xs[0] - pad, ys[0] - pad
    view = span + 2.0 * pad
    scale = width / view
    height = width

    def px(p) -> tuple[float, float]:
        # Flip y so the y-axis points up on screen.
        return ((p[0] - x0) * scale, height - (p[1] - y0) * scale)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]

    if graph is not None and draw_disks:
        for a, b in graph.edges:
            c = (P[a] + P[b]) / 2.0
            r = float(np.linalg.norm(P[b] - P[a])) / 2.0
            cx, cy = px(c)
            out.append(
                f'<circle class="disk" cx="{_fmt(cx)}" cy="{_fmt(cy)}" '
                f'r="{_fmt(r * scale)}" fill="none" stroke="#9ecae1" stroke-width="1"/>'
            )
    if radial_center is not None:
        c = np.asarray(radial_center, dtype=float)
        cx, cy = px(c)
        out.append(
            f'<circle class="unit-circle" cx="{_fmt(cx)}" cy="{_fmt(cy)}" '
            f'r="{_fmt(scale)}" fill="none" stroke="#bbbbbb" stroke-dasharray="4 3"/>'
        )
        for p in P:
            v = p - c
            n = float(np.linalg.norm(v))
            if n == 0.0:
                continue
            proj = c + v / n
            qx, qy = px(proj)
            out.append(
                f'<circle class="proj" cx="{_fmt(qx)}" cy="{_fmt(qy)}" r="2.5" '
                f'fill="#888888"/>'
            )
    if graph is not None:
        for a, b in graph.edges:
            ax, ay = px(P[a])
            bx, by = px(P[b])
            out.append(
                f'<line class="edge" x1="{_fmt(ax)}" y1="{_fmt(ay)}" '
                f'x2="{_fmt(bx)}" y2="{_fmt(by)}" stroke="#333333" stroke-width="1.5"/>'
            )
    for i, p in enumerate(P):
        cx, cy = px(p)
        out.append(
            f'<circle class="pt" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" fill="#d62728"/>'
        )
        if labels:
            out.append(
                f'<text class="label" x="{_fmt(cx + 6)}" y="{_fmt(cy - 6)}" '
                f'font-size="12" font-family="sans-serif">{i}</text>'
            )
    if witness is not None:
        w = np.asarray(witness, dtype=float)
        wx, wy = px(w)
        out.append(
            f'<circle class="witness" cx="{_fmt(wx)}" cy="{_fmt(wy)}" r="5" '
            f'fill="none" stroke="#2ca02c" stroke-width="2.5"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
