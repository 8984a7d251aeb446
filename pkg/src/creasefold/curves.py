"""Intrinsic curve data in 2D and 3D and frame integration.

Curves are carried by (parametrization speed, signed curvature[, torsion])
on the shared grid together with integrated points and orthonormal frames.
The 2D sign convention is counterclockwise-positive: the unit circle
traversed counterclockwise has curvature +1, and the normal is the tangent
rotated by +pi/2.  In 3D the curvature is signed as well (the frame is
transported continuously through curvature zeros).
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BadFrame, DegenerateCurve
from .numerics import FuncGrid, derivative

FRAME_DRIFT_BOUND = 1e-8


def rot90(v):
    """Rotate 2-vectors by +pi/2 (counterclockwise)."""
    v = np.asarray(v, dtype=float)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


@dataclass(frozen=True)
class Curve2D:
    grid: object
    speed: FuncGrid
    curvature: FuncGrid
    points: np.ndarray
    tangents: np.ndarray
    normals: np.ndarray

    def __post_init__(self):
        for arr in (self.points, self.tangents, self.normals):
            arr.flags.writeable = False

    @property
    def arc_length(self):
        from .numerics import cumulative_integral

        return cumulative_integral(self.speed)

    def derivatives(self):
        """x'(t) = s'(t) t(t) per node."""
        return self.speed.values[:, None] * self.tangents


@dataclass(frozen=True)
class Curve3D:
    grid: object
    speed: FuncGrid
    curvature: FuncGrid
    torsion: FuncGrid
    points: np.ndarray
    frame_t: np.ndarray
    frame_n: np.ndarray
    frame_b: np.ndarray

    def __post_init__(self):
        for arr in (self.points, self.frame_t, self.frame_n, self.frame_b):
            arr.flags.writeable = False

    def derivatives(self):
        return self.speed.values[:, None] * self.frame_t


def _check_unit(v, name):
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise BadFrame(f"{name} must be a unit vector")


def integrate_frame_2d(speed, curvature, x0=(0.0, 0.0), t0=(1.0, 0.0)):
    """Integrate x' = s' t, t' = s' k n from the given initial point/tangent."""
    if np.min(speed.values) <= 0.0:
        raise BadFrame("parametrization speed must be positive")
    x0 = np.asarray(x0, dtype=float)
    t0 = np.asarray(t0, dtype=float)
    _check_unit(t0, "initial tangent")
    pts, tan, nrm, drift = _kernels.rk4_frame_2d(
        speed.values, speed.midpoint_values(),
        curvature.values, curvature.midpoint_values(),
        speed.grid.h, x0, t0)
    if drift > FRAME_DRIFT_BOUND:
        raise BadFrame(f"tangent drift {drift:.3e} exceeds bound")
    return Curve2D(speed.grid, speed, curvature, pts, tan, nrm)


def integrate_frame_3d(speed, curvature, torsion, X0=(0.0, 0.0, 0.0),
                       frame0=None):
    """Transport the orthonormal frame (T, N, B) and integrate X' = s' T."""
    if np.min(speed.values) <= 0.0:
        raise BadFrame("parametrization speed must be positive")
    if frame0 is None:
        frame0 = (np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]),
                  np.array([0.0, 0.0, 1.0]))
    T0, N0, B0 = (np.asarray(v, dtype=float) for v in frame0)
    for v, name in ((T0, "T0"), (N0, "N0"), (B0, "B0")):
        _check_unit(v, name)
    if abs(T0 @ N0) > 1e-9 or np.linalg.norm(np.cross(T0, N0) - B0) > 1e-9:
        raise BadFrame("initial frame must be right-handed orthonormal")
    X0 = np.asarray(X0, dtype=float)
    X, T, N, B, drift = _kernels.rk4_frame_3d(
        speed.values, speed.midpoint_values(),
        curvature.values, curvature.midpoint_values(),
        torsion.values, torsion.midpoint_values(),
        speed.grid.h, X0, T0, N0, B0)
    if drift > FRAME_DRIFT_BOUND:
        raise BadFrame(f"frame drift {drift:.3e} exceeds bound")
    return Curve3D(speed.grid, speed, curvature, torsion, X, T, N, B)


def analyze_curve_2d(points, grid):
    """Recover (s', t, n, k) from sampled points; inverse of integrate_frame_2d."""
    points = np.asarray(points, dtype=float)
    if points.shape != (grid.n, 2):
        raise DegenerateCurve(f"expected {grid.n} 2D points")
    if np.min(np.linalg.norm(np.diff(points, axis=0), axis=1)) == 0.0:
        raise DegenerateCurve("repeated consecutive points")
    dx = FuncGrid(grid, points[:, 0]).node_derivatives
    dy = FuncGrid(grid, points[:, 1]).node_derivatives
    sp = np.hypot(dx, dy)
    if np.min(sp) <= 0.0:
        raise DegenerateCurve("vanishing parametrization speed")
    tangents = np.column_stack([dx, dy]) / sp[:, None]
    normals = rot90(tangents)
    dtx = FuncGrid(grid, tangents[:, 0]).node_derivatives
    dty = FuncGrid(grid, tangents[:, 1]).node_derivatives
    k = (dtx * normals[:, 0] + dty * normals[:, 1]) / sp
    return Curve2D(grid, FuncGrid(grid, sp), FuncGrid(grid, k),
                   points.copy(), tangents, normals)


def curve3d_from_samples(points, grid, k_floor=1e-12):
    """Recover Frenet data from sampled 3D points.

    The normal keeps a continuous orientation through isolated curvature
    zeros (the signed-curvature frame), so the result satisfies the same
    transport equations as integrate_frame_3d.  Intended for ingesting
    analytic fixtures; needs curvature bounded away from zero except at
    isolated nodes.
    """
    points = np.asarray(points, dtype=float)
    if points.shape != (grid.n, 3):
        raise DegenerateCurve(f"expected {grid.n} 3D points")
    deriv = np.column_stack([FuncGrid(grid, points[:, i]).node_derivatives
                             for i in range(3)])
    sp = np.linalg.norm(deriv, axis=1)
    if np.min(sp) <= 0.0:
        raise DegenerateCurve("vanishing parametrization speed")
    T = deriv / sp[:, None]
    Tp = np.column_stack([FuncGrid(grid, T[:, i]).node_derivatives
                          for i in range(3)])
    kv = Tp / sp[:, None]  # = K * N
    mag = np.linalg.norm(kv, axis=1)
    scale = max(np.max(mag), k_floor)
    N = np.empty_like(T)
    K = np.empty(grid.n)
    prev = None
    for j in range(grid.n):
        if mag[j] > 1e-7 * scale:
            cand = kv[j] / mag[j]
            sign = 1.0
            if prev is not None and cand @ prev < 0.0:
                sign = -1.0
            N[j] = sign * cand
            K[j] = sign * mag[j]
            prev = N[j]
        elif prev is not None:
            N[j] = prev
            K[j] = 0.0
        else:
            N[j] = np.nan
            K[j] = 0.0
    if np.any(np.isnan(N[:, 0])):
        # Leading flat region: propagate the first defined normal backwards.
        defined = np.where(~np.isnan(N[:, 0]))[0]
        if defined.size == 0:
            raise DegenerateCurve("curvature vanishes everywhere; frame undefined")
        N[:defined[0]] = N[defined[0]]
    B = np.cross(T, N)
    Np = np.column_stack([FuncGrid(grid, N[:, i]).node_derivatives
                          for i in range(3)])
    tau = np.einsum("ij,ij->i", Np, B) / sp
    return Curve3D(grid, FuncGrid(grid, sp), FuncGrid(grid, K),
                   FuncGrid(grid, tau), points.copy(), T, N, B)


def embed_curve2d(curve, origin=(0.0, 0.0, 0.0), e1=(1.0, 0.0, 0.0),
                  e2=(0.0, 1.0, 0.0)):
    """Isometric embedding of a planar curve into the plane spanned by e1, e2."""
    origin = np.asarray(origin, dtype=float)
    e1 = np.asarray(e1, dtype=float)
    e2 = np.asarray(e2, dtype=float)
    _check_unit(e1, "e1")
    _check_unit(e2, "e2")
    if abs(e1 @ e2) > 1e-12:
        raise BadFrame("plane axes must be orthogonal")
    pts = origin + curve.points[:, :1] * e1 + curve.points[:, 1:] * e2
    T = curve.tangents[:, :1] * e1 + curve.tangents[:, 1:] * e2
    N = curve.normals[:, :1] * e1 + curve.normals[:, 1:] * e2
    B = np.broadcast_to(np.cross(e1, e2), (curve.grid.n, 3)).copy()
    zero = FuncGrid.constant(curve.grid, 0.0)
    return Curve3D(curve.grid, curve.speed, curve.curvature, zero, pts, T, N, B)


@dataclass(frozen=True)
class ParallelCheck:
    max_angle: float
    max_product_residual: float


def parallel_frame_check(a, b):
    """Angle between corresponding tangents plus the s'k (and s'tau) residuals.

    Curves with parallel frames satisfy s'_a k_a = s'_b k_b (and the same for
    the torsion products in 3D); the check reports the worst violation.
    """
    if a.grid != b.grid:
        raise DegenerateCurve("parallel_frame_check requires a shared grid")
    ta = a.tangents if isinstance(a, Curve2D) else a.frame_t
    tb = b.tangents if isinstance(b, Curve2D) else b.frame_t
    dots = np.einsum("ij,ij->i", ta, tb)
    if ta.shape[1] == 2:
        crosses = np.abs(ta[:, 0] * tb[:, 1] - ta[:, 1] * tb[:, 0])
    else:
        crosses = np.linalg.norm(np.cross(ta, tb), axis=1)
    max_angle = float(np.max(np.arctan2(crosses, dots)))
    res = np.max(np.abs(a.speed.values * a.curvature.values
                        - b.speed.values * b.curvature.values))
    if isinstance(a, Curve3D) and isinstance(b, Curve3D):
        res = max(res, np.max(np.abs(a.speed.values * a.torsion.values
                                     - b.speed.values * b.torsion.values)))
    return ParallelCheck(max_angle, float(res))


def total_turning(curve):
    """Integral of s'k over the domain (equals the tangent turning angle)."""
    from .numerics import cumulative_integral

    return float(cumulative_integral(curve.speed * curve.curvature).values[-1])
