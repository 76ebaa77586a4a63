"""SVG rendering of result documents: curve, normals, tripod points.

Documents carry their own curve polyline (chart coordinates; spherical
results are drawn in orthographic projection from the hemisphere pole),
so rendering needs nothing but the JSON.  Output is a standalone SVG 1.1
document on a 1000 x 1000 viewBox.
"""

from __future__ import annotations

import numpy as np

from .geometry import get_geometry

_CONFIG_COLORS = ("#c0392b", "#2471a3", "#1e8449", "#af601a", "#6c3483", "#117864")


def _project(pts):
    pts = np.asarray(pts, dtype=float)
    return pts[..., :2]  # orthographic for the sphere, identity otherwise


def _geodesic_polyline(geometry_kind, base, direction, s_lo, s_hi, n=64):
    g = get_geometry(geometry_kind)
    line = g.line(np.asarray(base, dtype=float), np.asarray(direction, dtype=float))
    s = np.linspace(s_lo, s_hi, n)
    return _project(line.point_at(s))


class _Canvas:
    def __init__(self):
        self.elements = []
        self.points = []

    def add(self, tag, pts=None, **attrs):
        self.elements.append((tag, attrs))
        if pts is not None:
            self.points.append(np.asarray(pts, dtype=float).reshape(-1, 2))

    def bounds(self):
        if not self.points:
            return np.array([-1.0, -1.0]), np.array([1.0, 1.0])
        allp = np.concatenate(self.points, axis=0)
        return allp.min(axis=0), allp.max(axis=0)


def _fmt_pts(pts, tf):
    return " ".join(f"{x:.3f},{y:.3f}" for x, y in tf(pts))


def render_svg(doc) -> str:
    """Render a ResultDocument dict to SVG text."""
    geometry = doc.get("geometry", "euclidean")
    canvas = _Canvas()

    curve = doc.get("curve")
    if curve:
        canvas.add("curve", pts=_project(curve))
    if geometry == "hyperbolic_disk":
        canvas.add("disk_boundary", pts=[[-1.0, -1.0], [1.0, 1.0]])

    for i, cfg in enumerate(doc.get("configurations", [])):
        color = _CONFIG_COLORS[i % len(_CONFIG_COLORS)]
        tp = np.asarray(cfg["tripod_point"], dtype=float)
        for foot in cfg["feet"]:
            base = np.asarray(foot["point"], dtype=float)
            dirn = np.asarray(foot["normal_direction"], dtype=float)
            g = get_geometry(geometry)
            span = float(g.distance(base, tp))
            span = max(span, 1e-6)
            poly = _geodesic_polyline(geometry, base, dirn, -0.25 * span, 1.35 * span)
            # orient the sampling toward the tripod point
            if float(g.distance(g.line(base, dirn).point_at(span), tp)) > span * 0.5:
                poly = _geodesic_polyline(geometry, base, -dirn, -0.25 * span, 1.35 * span)
            canvas.add("normal", pts=poly, color=color, polyline=poly)
        canvas.add("tripod_point", pts=[tp], center=_project(tp), color=color)

    for tri in doc.get("triangles", []):
        pts = np.asarray(tri, dtype=float)
        canvas.add("triangle", pts=pts, polygon=pts)

    lo, hi = canvas.bounds()
    mid = 0.5 * (lo + hi)
    half = float(np.max(hi - lo)) * 0.55 + 1e-9

    def tf(pts):
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        out = (pts - mid) / half * 450.0
        return np.stack([out[:, 0] + 500.0, 500.0 - out[:, 1]], axis=-1)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 1000 1000">',
        '<rect width="1000" height="1000" fill="white"/>',
    ]
    for tag, attrs in canvas.elements:
        if tag == "curve":
            parts.append(
                f'<polygon points="{_fmt_pts(doc["curve"], tf)}" fill="none" stroke="black" stroke-width="2.5"/>'
            )
        elif tag == "disk_boundary":
            c = tf([[0.0, 0.0]])[0]
            r = 1.0 / half * 450.0
            parts.append(
                f'<circle cx="{c[0]:.3f}" cy="{c[1]:.3f}" r="{r:.3f}" fill="none" stroke="#888" stroke-dasharray="6 4" stroke-width="1.5"/>'
            )
        elif tag == "normal":
            parts.append(
                f'<polyline points="{_fmt_pts(attrs["polyline"], tf)}" fill="none" stroke="{attrs["color"]}" stroke-width="1.6"/>'
            )
        elif tag == "tripod_point":
            c = tf(attrs["center"])[0]
            parts.append(
                f'<circle cx="{c[0]:.3f}" cy="{c[1]:.3f}" r="6" fill="{attrs["color"]}"/>'
            )
        elif tag == "triangle":
            parts.append(
                f'<polygon points="{_fmt_pts(attrs["polygon"], tf)}" fill="none" stroke="#555" stroke-width="1.2" stroke-dasharray="3 3"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts)
