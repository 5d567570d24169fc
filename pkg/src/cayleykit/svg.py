"""Static SVG pictures of two-dimensional fans and polygons."""
from __future__ import annotations

import math
from typing import Sequence

from .cayley import DomainError
from .polyhedra import Cone, Fan, LatticePolytope, convex_hull, dot

SIZE = 400
MARGIN = 60


def _apply(matrix, v):
    if matrix is None:
        return tuple(v)
    return tuple(dot(row, v) for row in matrix)


def _fmt(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _header() -> list[str]:
    return [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
            f'viewBox="{-SIZE // 2} {-SIZE // 2} {SIZE} {SIZE}" font-family="sans-serif" font-size="11">']


def _fan_svg(fan: Fan, labels: dict | None) -> str:
    if fan.ambient_rank != 2 or fan.lineality:
        raise DomainError("fan is not two-dimensional after projection")
    r = SIZE // 2 - MARGIN
    out = _header()
    for c in sorted(fan.maximal_cones, key=lambda c: c.key):
        pts = []
        for ray in c.rays:
            n = math.hypot(*ray)
            pts.append((r * ray[0] / n, -r * ray[1] / n))
        if len(pts) == 2:
            out.append('<polygon points="0,0 {:.2f},{:.2f} {:.2f},{:.2f}" fill="#e8e8e8" stroke="none"/>'
                       .format(*pts[0], *pts[1]))
        if labels and c.key in labels and len(pts) == 2:
            mx, my = (pts[0][0] + pts[1][0]) / 2, (pts[0][1] + pts[1][1]) / 2
            n = math.hypot(mx, my) or 1.0
            out.append(f'<text x="{0.6 * r * mx / n:.2f}" y="{0.6 * r * my / n:.2f}" fill="blue" '
                       f'text-anchor="middle">{labels[c.key]}</text>')
    for ray in sorted(fan.rays):
        n = math.hypot(*ray)
        x, y = r * ray[0] / n, -r * ray[1] / n
        out.append(f'<line x1="0" y1="0" x2="{x:.2f}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{1.12 * x:.2f}" y="{1.12 * y:.2f}" text-anchor="middle">{_fmt(ray)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _polygon_svg(verts: Sequence, labels: Sequence) -> str:
    xs = [v[0] for v in verts]
    ys = [v[1] for v in verts]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1)
    scale = (SIZE - 2 * MARGIN) / span
    cx = (max(xs) + min(xs)) / 2
    cy = (max(ys) + min(ys)) / 2
    pos = [((x - cx) * scale, -(y - cy) * scale) for x, y in verts]
    # order around the centroid
    gx = sum(p[0] for p in pos) / len(pos)
    gy = sum(p[1] for p in pos) / len(pos)
    order = sorted(range(len(pos)), key=lambda k: math.atan2(pos[k][1] - gy, pos[k][0] - gx))
    out = _header()
    poly = " ".join(f"{pos[k][0]:.2f},{pos[k][1]:.2f}" for k in order)
    out.append(f'<polygon points="{poly}" fill="#d3d3d3" stroke="black"/>')
    for k in order:
        x, y = pos[k]
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="black"/>')
        out.append(f'<text x="{x:.2f}" y="{y - 6:.2f}" text-anchor="middle">{labels[k]}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(obj, projection: Sequence[Sequence[int]] | None = None, labels: dict | None = None) -> str:
    """SVG text for a fan, cone or polytope, after an optional integer projection."""
    if isinstance(obj, Cone):
        obj = Fan(obj.ambient_rank, [obj])
    if isinstance(obj, Fan):
        fan = obj.project(projection) if projection is not None else obj
        if labels and projection is not None:
            moved = {}
            for c in obj.maximal_cones:
                if c.key in labels:
                    moved[c.project(projection).key] = labels[c.key]
            labels = moved
        return _fan_svg(fan, labels)
    if isinstance(obj, LatticePolytope):
        verts = [_apply(projection, v) for v in obj.vertices]
        if len(verts[0]) != 2 or convex_hull(verts).dim != 2:
            raise DomainError("polytope is not two-dimensional after projection")
        keep = set(convex_hull(verts).vertices)
        pairs = [(v, o) for v, o in zip(verts, obj.vertices) if v in keep]
        pairs = list({v: o for v, o in pairs}.items())
        return _polygon_svg([v for v, _ in pairs], [_fmt(o) for _, o in pairs])
    raise TypeError(f"cannot draw {type(obj).__name__}")


def emit_svg(obj, path: str, projection: Sequence[Sequence[int]] | None = None,
             labels: dict | None = None) -> None:
    text = render(obj, projection, labels)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
