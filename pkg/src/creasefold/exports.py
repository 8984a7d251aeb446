"""Deterministic OBJ and SVG writers for folded states and patterns."""

import numpy as np

from .pattern import ruling_directions

CLASS_COLORS = {
    "planar": "#1f6fb2",
    "constant-fold-angle": "#c23b22",
    "planar+constant-fold-angle": "#7d3cb5",
    "both(straight)": "#7d3cb5",
    "generic": "#222222",
}


def _fmt(x):
    return format(float(x), ".17g")


def folded_state_to_obj(state, u_stations=9):
    """One OBJ object per patch (triangulated quads) plus crease polylines."""
    lines = ["# creasefold folded state"]
    offset = 0
    for idx, patch in enumerate(state.patches):
        pts = patch.surface_points(u_stations)
        n, m, _ = pts.shape
        lines.append(f"o patch_{idx}")
        for j in range(n):
            for k in range(m):
                p = pts[j, k]
                lines.append(f"v {_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}")
        for j in range(n - 1):
            for k in range(m - 1):
                a = offset + j * m + k + 1
                b = a + 1
                c = a + m + 1
                d = a + m
                lines.append(f"f {a} {b} {c}")
                lines.append(f"f {a} {c} {d}")
        offset += n * m
    for idx, crease in enumerate(state.creases, start=1):
        lines.append(f"o crease_{idx}")
        start = offset + 1
        for p in crease.points:
            lines.append(f"v {_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}")
        offset += crease.points.shape[0]
        polyline = " ".join(str(i) for i in range(start, offset + 1))
        lines.append(f"l {polyline}")
    return "\n".join(lines) + "\n"


def pattern_to_svg(pattern, classifications=None, ruling_stride=8, margin=0.05):
    """SVG 1.1 plot: creases colored by classification, every k-th ruling."""
    pts = np.vstack([c.points for c in pattern.curves])
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    pad = margin * float(np.max(span))
    width = span[0] + 2 * pad
    height = span[1] + 2 * pad

    def xy(p):
        # y grows upward in the pattern plane; SVG y is downward
        return (p[0] - lo[0] + pad, hi[1] - p[1] + pad)

    def polyline(points, stroke, width_frac=0.004, dashed=False):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in map(xy, points))
        dash = f' stroke-dasharray="{_fmt(8 * width_frac * span.max())}"' if dashed else ""
        return (f'<polyline fill="none" stroke="{stroke}" '
                f'stroke-width="{_fmt(width_frac * span.max())}"{dash} '
                f'points="{coords}"/>')

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}" '
        f'width="{_fmt(width)}" height="{_fmt(height)}">',
    ]
    for i in range(pattern.n_creases + 1):
        r = ruling_directions(pattern, i)
        lengths = pattern.ruling_lengths(i)
        for j in range(0, pattern.grid.n, ruling_stride):
            if i == 0 and pattern.outer_first_r is not None:
                p1 = pattern.curves[1].points[j]
                p0 = p1 - lengths[j] * r[j]
            elif i == pattern.n_creases and pattern.outer_last_l is not None:
                p0 = pattern.curves[i].points[j]
                p1 = p0 + lengths[j] * r[j]
            else:
                p0 = pattern.curves[i].points[j]
                p1 = pattern.curves[i + 1].points[j]
            parts.append(polyline([p0, p1], "#bbbbbb", 0.002))
    parts.append(polyline(pattern.curves[0].points, "#666666"))
    parts.append(polyline(pattern.curves[-1].points, "#666666"))
    for i in range(1, pattern.n_creases + 1):
        label = "generic"
        dashed = False
        if classifications is not None:
            cls = classifications[i - 1]
            label = cls.label
            dashed = cls.straight
        parts.append(polyline(pattern.curves[i].points,
                              CLASS_COLORS.get(label, "#222222"), 0.004, dashed))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
