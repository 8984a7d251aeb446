"""Crease-rule pattern model: loading, ruling extraction and validation.

A pattern is an ordered right-to-left family of planar curves on one shared
grid: boundary x_0, creases x_1..x_n, boundary x_{n+1}.  Patches live between
consecutive curves and their rulings join equal parameter values,

    r_{i,L}(t) = r_{i+1,R}(t) = (x_{i+1}(t) - x_i(t)) / |x_{i+1}(t) - x_i(t)|,

so every per-node array in a pattern file has the same length.  The two
boundary patches may instead carry explicit outer ruling-angle fields
("outer_angles" in the file): those are free design data that cannot be
recovered from the crease geometry, e.g. mirrored angles that make the
outermost creases constant fold-angle.  When outer angles are stored, the
stored boundary curve only delimits the material extent and the effective
outer rulings come from the angles.
"""

import json
from dataclasses import dataclass

import numpy as np

from .curves import Curve2D, analyze_curve_2d, rot90
from .errors import (BadDocument, DegenerateRuling, RulingTangentToCrease)
from .numerics import FuncGrid, Grid, resample_values

EPS_LEN = 1e-6
EPS_SIN = 1e-6
EPS_K_REL = 1e-6

KINDS = ("sampled", "cylinder-graph", "cone-radial")


def _graph_curve_cylinder(grid, length):
    """Curve (t, l(t)) with intrinsic data from the closed forms."""
    l = FuncGrid(grid, length)
    lp = l.node_derivatives
    q = 1.0 + lp * lp
    sp = np.sqrt(q)
    lpp = FuncGrid(grid, lp).node_derivatives
    points = np.column_stack([grid.nodes, l.values])
    tangents = np.column_stack([np.ones(grid.n), lp]) / sp[:, None]
    normals = rot90(tangents)
    k = lpp / (q * sp)
    return Curve2D(grid, FuncGrid(grid, sp), FuncGrid(grid, k),
                   points, tangents, normals)


def _graph_curve_cone(grid, length, apex):
    """Curve apex + l(t) (cos t, -sin t) with intrinsic data from closed forms."""
    t = grid.nodes
    u = np.column_stack([np.cos(t), -np.sin(t)])
    w = np.column_stack([-np.sin(t), -np.cos(t)])
    l = FuncGrid(grid, length)
    lp = l.node_derivatives
    lpp = FuncGrid(grid, lp).node_derivatives
    e = l.values ** 2 + lp ** 2
    sp = np.sqrt(e)
    f = l.values ** 2 + 2.0 * lp ** 2 - l.values * lpp
    points = apex[None, :] + l.values[:, None] * u
    tangents = (lp[:, None] * u + l.values[:, None] * w) / sp[:, None]
    normals = (l.values[:, None] * u - lp[:, None] * w) / sp[:, None]
    k = -f / (e * sp)
    return Curve2D(grid, FuncGrid(grid, sp), FuncGrid(grid, k),
                   points, tangents, normals)


@dataclass(frozen=True)
class CreaseRulePattern:
    grid: Grid
    kind: str
    curves: tuple          # Curve2D, right-to-left; curves[i] is x_i
    lengths: tuple | None  # per-curve length arrays for the graph kinds
    apex: np.ndarray | None
    outer_first_r: np.ndarray | None  # theta_{1R}(t)
    outer_last_l: np.ndarray | None   # theta_{nL}(t)

    @property
    def n_creases(self):
        return len(self.curves) - 2

    @property
    def n_patches(self):
        return len(self.curves) - 1

    def crease(self, i):
        """Crease x_i for 1 <= i <= n."""
        if not 1 <= i <= self.n_creases:
            raise IndexError(f"crease index {i} out of range")
        return self.curves[i]

    def diameter(self):
        pts = np.vstack([c.points for c in self.curves])
        return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))

    def ruling_lengths(self, i):
        """|x_{i+1} - x_i| per node for patch i."""
        d = self.curves[i + 1].points - self.curves[i].points
        return np.linalg.norm(d, axis=1)


def ruling_directions(pattern, i):
    """Unit ruling field of patch i (0 = right boundary patch, n = left).

    Interior patches always use the join of equal parameter values; boundary
    patches use the stored outer angles when present.
    """
    n = pattern.n_creases
    if not 0 <= i <= n:
        raise IndexError(f"patch index {i} out of range")
    if i == 0 and pattern.outer_first_r is not None:
        c = pattern.curves[1]
        th = pattern.outer_first_r
        return np.cos(th)[:, None] * c.tangents + np.sin(th)[:, None] * c.normals
    if i == n and pattern.outer_last_l is not None:
        c = pattern.curves[n]
        th = pattern.outer_last_l
        return np.cos(th)[:, None] * c.tangents + np.sin(th)[:, None] * c.normals
    d = pattern.curves[i + 1].points - pattern.curves[i].points
    lengths = np.linalg.norm(d, axis=1)
    if np.min(lengths) < EPS_LEN:
        raise DegenerateRuling(f"patch {i} ruling length below {EPS_LEN:g}")
    return d / lengths[:, None]


def _angle_against(curve, rulings):
    ts = np.einsum("ij,ij->i", curve.tangents, rulings)
    ns = np.einsum("ij,ij->i", curve.normals, rulings)
    theta = np.arctan2(ns, ts)
    if np.min(np.abs(np.sin(theta))) < EPS_SIN:
        raise RulingTangentToCrease("ruling angle reaches 0 or pi")
    return theta


def ruling_angles(pattern, i):
    """(theta_iL, theta_iR) for crease i, as FuncGrids normalized to (0, pi).

    Boundary-adjacent sides return the stored outer angle field when one is
    present; otherwise the angle comes from the boundary-curve join.
    """
    n = pattern.n_creases
    if not 1 <= i <= n:
        raise IndexError(f"crease index {i} out of range")
    crease = pattern.curves[i]
    if i == n and pattern.outer_last_l is not None:
        left = pattern.outer_last_l.copy()
        if np.min(np.abs(np.sin(left))) < EPS_SIN:
            raise RulingTangentToCrease("stored outer angle reaches 0 or pi")
    else:
        left = _angle_against(crease, ruling_directions(pattern, i))
    if i == 1 and pattern.outer_first_r is not None:
        right = pattern.outer_first_r.copy()
        if np.min(np.abs(np.sin(right))) < EPS_SIN:
            raise RulingTangentToCrease("stored outer angle reaches 0 or pi")
    else:
        right = _angle_against(crease, ruling_directions(pattern, i - 1))
    g = pattern.grid
    return FuncGrid(g, left), FuncGrid(g, right)


# ---------------------------------------------------------------------------
# construction

def build_cylinder_graph(t_max, samples, lengths, outer_first_r=None,
                         outer_last_l=None):
    grid = Grid(float(t_max), int(samples))
    lengths = tuple(np.asarray(a, dtype=float) for a in lengths)
    _check_lengths(grid, lengths)
    curves = tuple(_graph_curve_cylinder(grid, a) for a in lengths)
    return CreaseRulePattern(grid, "cylinder-graph", curves, lengths, None,
                             _as_angle_array(grid, outer_first_r),
                             _as_angle_array(grid, outer_last_l))


def build_cone_radial(apex, t_max, samples, lengths, outer_first_r=None,
                      outer_last_l=None):
    grid = Grid(float(t_max), int(samples))
    apex = np.asarray(apex, dtype=float)
    lengths = tuple(np.asarray(a, dtype=float) for a in lengths)
    _check_lengths(grid, lengths)
    if any(np.min(a) <= 0.0 for a in lengths):
        raise BadDocument("cone-radial length functions must stay positive")
    curves = tuple(_graph_curve_cone(grid, a, apex) for a in lengths)
    return CreaseRulePattern(grid, "cone-radial", curves, lengths, apex,
                             _as_angle_array(grid, outer_first_r),
                             _as_angle_array(grid, outer_last_l))


def build_sampled(t_max, samples, point_arrays, outer_first_r=None,
                  outer_last_l=None):
    grid = Grid(float(t_max), int(samples))
    curves = []
    for pts in point_arrays:
        pts = np.asarray(pts, dtype=float)
        if pts.shape != (grid.n, 2):
            raise BadDocument(f"expected {grid.n} 2D points per curve")
        curves.append(analyze_curve_2d(pts, grid))
    if len(curves) < 3:
        raise BadDocument("a pattern needs two boundaries and at least one crease")
    return CreaseRulePattern(grid, "sampled", tuple(curves), None, None,
                             _as_angle_array(grid, outer_first_r),
                             _as_angle_array(grid, outer_last_l))


def pattern_from_curves(grid, curves, outer_first_r=None, outer_last_l=None):
    """Wrap in-memory curves (right-to-left) as a sampled-kind pattern."""
    if len(curves) < 3:
        raise BadDocument("a pattern needs two boundaries and at least one crease")
    if any(c.grid != grid for c in curves):
        raise BadDocument("all curves must share the pattern grid")
    return CreaseRulePattern(grid, "sampled", tuple(curves), None, None,
                             _as_angle_array(grid, outer_first_r),
                             _as_angle_array(grid, outer_last_l))


def _check_lengths(grid, lengths):
    if len(lengths) < 3:
        raise BadDocument("a pattern needs two boundaries and at least one crease")
    for a in lengths:
        if a.shape != (grid.n,):
            raise BadDocument(f"length arrays must have {grid.n} samples")


def _as_angle_array(grid, arr):
    if arr is None:
        return None
    arr = np.asarray(arr, dtype=float)
    if arr.shape == ():
        arr = np.full(grid.n, float(arr))
    if arr.shape != (grid.n,):
        raise BadDocument(f"outer angle arrays must have {grid.n} samples")
    return arr


# ---------------------------------------------------------------------------
# file format

def load_pattern(document, samples=None):
    """Load a pattern document (dict, JSON string, or file path)."""
    doc = _coerce_document(document)
    for key in ("version", "t_max", "samples", "kind", "curves"):
        if key not in doc:
            raise BadDocument(f"missing required key {key!r}")
    if doc["version"] != 1:
        raise BadDocument(f"unsupported version {doc['version']!r}")
    kind = doc["kind"]
    if kind not in KINDS:
        raise BadDocument(f"unknown kind {kind!r}")
    try:
        t_max = float(doc["t_max"])
        n_src = int(doc["samples"])
    except (TypeError, ValueError) as exc:
        raise BadDocument(f"bad t_max/samples: {exc}") from exc
    n = int(samples) if samples is not None else n_src
    if n_src < 16 or n < 16:
        raise BadDocument("need at least 16 samples")

    roles = [c.get("role") for c in doc["curves"]]
    if len(roles) < 3 or roles[0] != "boundary" or roles[-1] != "boundary" \
            or any(r != "crease" for r in roles[1:-1]):
        raise BadDocument("curves must be boundary, crease..., boundary")

    def per_node(values, what):
        arr = np.asarray(values, dtype=float)
        if arr.ndim == 0 or arr.shape[0] != n_src:
            raise BadDocument(f"{what}: per-node arrays must have length {n_src}")
        if not np.all(np.isfinite(arr)):
            raise BadDocument(f"{what}: non-finite values")
        if arr.ndim == 1:
            return resample_values(arr, n_src, n, t_max)
        return np.column_stack([resample_values(arr[:, j], n_src, n, t_max)
                                for j in range(arr.shape[1])])

    outer = doc.get("outer_angles", {}) or {}
    first_r = per_node(outer["first_R"], "outer_angles.first_R") \
        if "first_R" in outer else None
    last_l = per_node(outer["last_L"], "outer_angles.last_L") \
        if "last_L" in outer else None

    if kind == "sampled":
        pts = []
        for idx, c in enumerate(doc["curves"]):
            if "points" not in c:
                raise BadDocument(f"curve {idx}: sampled kind requires points")
            arr = per_node(c["points"], f"curve {idx}")
            if arr.ndim != 2 or arr.shape[1] != 2:
                raise BadDocument(f"curve {idx}: points must be [x, y] pairs")
            pts.append(arr)
        return build_sampled(t_max, n, pts, first_r, last_l)

    lengths = []
    for idx, c in enumerate(doc["curves"]):
        if "length" not in c:
            raise BadDocument(f"curve {idx}: {kind} kind requires length arrays")
        lengths.append(per_node(c["length"], f"curve {idx}"))
    if kind == "cylinder-graph":
        return build_cylinder_graph(t_max, n, lengths, first_r, last_l)
    apex = doc.get("apex")
    if apex is None or len(apex) != 2:
        raise BadDocument("cone-radial kind requires an apex [x, y]")
    return build_cone_radial(apex, t_max, n, lengths, first_r, last_l)


def _coerce_document(document):
    if isinstance(document, dict):
        return document
    try:
        if isinstance(document, (str, bytes)) and "{" in str(document):
            return json.loads(document)
        with open(document, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise BadDocument(f"cannot read pattern document: {exc}") from exc


def save_pattern(pattern, path=None):
    """Serialize to the pattern document; returns the dict (and writes path)."""
    doc = {"version": 1, "t_max": pattern.grid.t_max, "samples": pattern.grid.n,
           "kind": pattern.kind}
    if pattern.apex is not None:
        doc["apex"] = list(pattern.apex)
    curves = []
    roles = ["boundary"] + ["crease"] * pattern.n_creases + ["boundary"]
    for idx, role in enumerate(roles):
        entry = {"role": role}
        if pattern.kind == "sampled":
            entry["points"] = pattern.curves[idx].points.tolist()
        else:
            entry["length"] = pattern.lengths[idx].tolist()
        curves.append(entry)
    doc["curves"] = curves
    outer = {}
    if pattern.outer_first_r is not None:
        outer["first_R"] = pattern.outer_first_r.tolist()
    if pattern.outer_last_l is not None:
        outer["last_L"] = pattern.outer_last_l.tolist()
    if outer:
        doc["outer_angles"] = outer
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh)
    return doc


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class PatternValidation:
    regular: bool
    candidate: bool
    t0_nodes: np.ndarray
    diagnostics: tuple

    @property
    def ok(self):
        return self.regular and self.candidate


def _segments_properly_cross(a0, a1, b0, b1):
    """Vectorized proper-crossing test for segment batches.

    Near-collinear configurations (shared ruling lines of radial or parallel
    patches) must not register as crossings, so orientations within round-off
    of zero are treated as degenerate.
    """
    def orient(p, q, r):
        return ((q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1])
                - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0]))

    o1 = orient(a0, a1, b0)
    o2 = orient(a0, a1, b1)
    o3 = orient(b0, b1, a0)
    o4 = orient(b0, b1, a1)
    la = np.einsum("...i,...i->...", a1 - a0, a1 - a0)
    lb = np.einsum("...i,...i->...", b1 - b0, b1 - b0)
    eps = 1e-12 * np.sqrt(la * lb)
    strict = (np.abs(o1) > eps) & (np.abs(o2) > eps) \
        & (np.abs(o3) > eps) & (np.abs(o4) > eps)
    return strict & (o1 * o2 < 0.0) & (o3 * o4 < 0.0)


def inflection_nodes(curve, eps_rel=EPS_K_REL):
    """Node indices where the signed curvature is (relatively) zero."""
    k = curve.curvature.values
    scale = np.max(np.abs(k))
    if scale < 1e-12:
        return np.arange(curve.grid.n)
    return np.where(np.abs(k) < eps_rel * scale)[0]


def validate(pattern, eps_len=EPS_LEN, eps_sin=EPS_SIN, eps_k_rel=EPS_K_REL):
    """Regularity and candidate checks with per-check diagnostics."""
    diags = []
    regular = True
    n = pattern.n_creases

    def fail(name, worst, where):
        nonlocal regular
        regular = False
        diags.append({"check": name, "worst": float(worst), "location": where})

    # left ordering and ruling lengths
    for i in range(n + 1):
        d = pattern.curves[i + 1].points - pattern.curves[i].points
        lengths = np.linalg.norm(d, axis=1)
        j = int(np.argmin(lengths))
        if lengths[j] < eps_len:
            fail("ruling-length", lengths[j], f"patch {i}, node {j}")
            continue
        side = np.einsum("ij,ij->i", pattern.curves[i].normals, d)
        j = int(np.argmin(side))
        if side[j] <= 0.0:
            fail("left-ordering", side[j], f"patch {i}, node {j}")

    # transversality against the boundary curves
    if regular:
        for i, curve in ((0, pattern.curves[0]), (n, pattern.curves[-1])):
            r = ruling_directions(pattern, i)
            cross = np.abs(curve.tangents[:, 0] * r[:, 1]
                           - curve.tangents[:, 1] * r[:, 0])
            j = int(np.argmin(cross))
            if cross[j] < eps_sin:
                fail("boundary-transversality", cross[j], f"patch {i}, node {j}")

    # ruling angles stay transversal at every crease
    if regular:
        for i in range(1, n + 1):
            try:
                ruling_angles(pattern, i)
            except RulingTangentToCrease as exc:
                fail("ruling-angle-range", 0.0, f"crease {i}: {exc}")

    # patch interiors disjoint at grid resolution
    if regular:
        segs = []
        for i in range(n + 1):
            a = pattern.curves[i].points
            b = pattern.curves[i + 1].points
            segs.append((a, b))
        for i in range(n + 1):
            a0, a1 = segs[i]
            hit = _segments_properly_cross(a0[:-1], a1[:-1], a0[1:], a1[1:])
            if np.any(hit):
                j = int(np.where(hit)[0][0])
                fail("ruling-crossing", 1.0, f"patch {i}, cells {j},{j + 1}")
                break
            for m in range(i + 1, n + 1):
                b0, b1 = segs[m]
                hit = _segments_properly_cross(a0[:, None], a1[:, None],
                                               b0[None, :], b1[None, :])
                if np.any(hit):
                    j, jj = np.argwhere(hit)[0]
                    fail("patch-overlap", 1.0,
                         f"patches {i}/{m}, nodes {int(j)},{int(jj)}")
                    break
            else:
                continue
            break

    # candidate: inflections of crease 1 shared by all creases
    t0 = inflection_nodes(pattern.curves[1], eps_k_rel) if n >= 1 else np.array([], int)
    candidate = True
    for i in range(2, n + 1):
        other = set(inflection_nodes(pattern.curves[i], eps_k_rel).tolist())
        missing = [int(j) for j in t0 if int(j) not in other]
        if missing:
            candidate = False
            diags.append({"check": "shared-inflections", "worst": float(len(missing)),
                          "location": f"crease {i}, nodes {missing[:8]}"})
    return PatternValidation(regular, candidate and regular, t0, tuple(diags))
