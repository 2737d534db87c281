"""Minimal SVG rendering of unit-distance graphs.

Plane graphs draw in the complex plane; sphere graphs project
orthographically onto the xy-plane.  Edges between the two copies of a
rotated union (labels 1 and 2) get a distinct stroke.
"""

from __future__ import annotations

from .graphs import UnitDistanceGraph


def _positions(g: UnitDistanceGraph) -> list[tuple[float, float]]:
    out = []
    for p in g.vertices:
        if g.geometry == "plane":
            z = complex(p)
            out.append((z.real, z.imag))
        else:
            x, y, _ = p.mid()
            out.append((x, y))
    return out


def render_svg(g: UnitDistanceGraph, size: int = 900, margin: float = 0.06) -> str:
    pos = _positions(g)
    xs = [p[0] for p in pos]
    ys = [p[1] for p in pos]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span = max(x1 - x0, y1 - y0) or 1.0
    pad = span * margin
    x0 -= pad
    y0 -= pad
    span += 2 * pad

    def sx(x: float) -> float:
        return (x - x0) / span * size

    def sy(y: float) -> float:
        return size - (y - y0) / span * size

    labels = g.labels or [1] * g.n
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
             f'height="{size}" viewBox="0 0 {size} {size}">',
             '<rect width="100%" height="100%" fill="white"/>']
    cross = []
    for u, v in g.edges:
        a, b = pos[u], pos[v]
        seg = (f'M{sx(a[0]):.2f} {sy(a[1]):.2f} L{sx(b[0]):.2f} {sy(b[1]):.2f}')
        if labels[u] and labels[v] and labels[u] != labels[v]:
            cross.append(seg)
        else:
            lines.append(f'<path d="{seg}" stroke="#9a9a9a" stroke-width="0.7" fill="none"/>')
    for seg in cross:
        lines.append(f'<path d="{seg}" stroke="#d62728" stroke-width="1.8" fill="none"/>')
    for i, (x, y) in enumerate(pos):
        lines.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="1.6" fill="#1f3b73"/>')
    lines.append("</svg>")
    return "\n".join(lines)
