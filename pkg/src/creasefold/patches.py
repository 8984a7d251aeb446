"""Developable patches: residual test, development (unrolling) and refolding.

A patch is a directrix with a ruling-angle field theta(t) and, in 3D, an
inclination field phi(t).  The 3D ruling direction is

    R = cos(theta) T + sin(theta) (cos(phi) N - sin(phi) B),

the tangent-plane normal is P = cos(phi) B + sin(phi) N, and the developed
ruling is r = cos(theta) t + sin(theta) n.  The ruling curvature

    V = s' K sin(phi) / sin(theta)

measures the bend transverse to the rulings and pins the bent configuration
of a developed patch up to rigid motion, which is what the refold operation
exploits (and what the roundtrip tests verify through Procrustes alignment).
"""

from dataclasses import dataclass

import numpy as np

from .curves import Curve2D, Curve3D, integrate_frame_2d, integrate_frame_3d
from .errors import InclinationSingular, InconsistentBend, NotDevelopable
from .numerics import FuncGrid, derivative

EPS_DEV = 1e-5
MIN_SIN_THETA = 1e-6


def _unit_rows(arr):
    return arr / np.linalg.norm(arr, axis=1)[:, None]


@dataclass(frozen=True)
class DevelopablePatch3D:
    directrix: Curve3D
    inclination: FuncGrid    # phi(t)
    ruling_angle: FuncGrid   # theta(t)
    u_min: FuncGrid
    u_max: FuncGrid
    rulings: np.ndarray      # R(t), unit 3-vectors
    plane_normals: np.ndarray  # P(t), unit 3-vectors

    @classmethod
    def build(cls, directrix, inclination, ruling_angle, u_min, u_max):
        sin_t = np.sin(ruling_angle.values)
        if np.min(np.abs(sin_t)) < MIN_SIN_THETA:
            raise NotDevelopable("rulings tangent to the directrix (sin theta ~ 0)")
        cos_t = np.cos(ruling_angle.values)
        sin_p = np.sin(inclination.values)[:, None]
        cos_p = np.cos(inclination.values)[:, None]
        T, N, B = directrix.frame_t, directrix.frame_n, directrix.frame_b
        R = cos_t[:, None] * T + sin_t[:, None] * (cos_p * N - sin_p * B)
        P = cos_p * B + sin_p * N
        R.flags.writeable = False
        P.flags.writeable = False
        return cls(directrix, inclination, ruling_angle, u_min, u_max, R, P)

    @property
    def grid(self):
        return self.directrix.grid

    def surface_points(self, u_stations=9):
        """(n, u_stations, 3) sample of S(t, u) = X(t) + u R(t)."""
        fractions = np.linspace(0.0, 1.0, u_stations)
        u = (self.u_min.values[:, None]
             + fractions[None, :] * (self.u_max.values - self.u_min.values)[:, None])
        return self.directrix.points[:, None, :] + u[..., None] * self.rulings[:, None, :]

    def normalized_residual(self):
        res = developability_residual(self.directrix, self.rulings)
        dR = _column_derivatives(self.grid, self.rulings)
        scale = max(np.max(np.linalg.norm(dR, axis=1)), 1.0)
        return FuncGrid(self.grid, res.values / (self.directrix.speed.values * scale))

    def require_developable(self, eps=EPS_DEV):
        worst = np.max(np.abs(self.normalized_residual().values))
        if worst > eps:
            raise NotDevelopable(f"developability residual {worst:.3e} > {eps:g}")
        return worst


@dataclass(frozen=True)
class DevelopablePatch2D:
    directrix: Curve2D
    ruling_angle: FuncGrid
    u_min: FuncGrid
    u_max: FuncGrid

    @property
    def grid(self):
        return self.directrix.grid

    @property
    def rulings(self):
        c = np.cos(self.ruling_angle.values)[:, None]
        s = np.sin(self.ruling_angle.values)[:, None]
        return c * self.directrix.tangents + s * self.directrix.normals

    def surface_points(self, u_stations=9):
        fractions = np.linspace(0.0, 1.0, u_stations)
        u = (self.u_min.values[:, None]
             + fractions[None, :] * (self.u_max.values - self.u_min.values)[:, None])
        return self.directrix.points[:, None, :] + u[..., None] * self.rulings[:, None, :]


def _column_derivatives(grid, arr):
    return np.column_stack([FuncGrid(grid, arr[:, i]).node_derivatives
                            for i in range(arr.shape[1])])


def patch_from_rulings(directrix, rulings, u_min, u_max):
    """Build a DevelopablePatch3D from explicit unit ruling vectors.

    Decomposes R against the directrix frame to recover the ruling angle and
    the inclination:  cos(theta) = R.T,  sin(theta) cos(phi) = R.N,
    -sin(theta) sin(phi) = R.B.
    """
    R = _unit_rows(np.asarray(rulings, dtype=float))
    rt = np.einsum("ij,ij->i", R, directrix.frame_t)
    rn = np.einsum("ij,ij->i", R, directrix.frame_n)
    rb = np.einsum("ij,ij->i", R, directrix.frame_b)
    sin_theta = np.hypot(rn, rb)
    if np.min(sin_theta) < MIN_SIN_THETA:
        raise NotDevelopable("rulings tangent to the directrix (sin theta ~ 0)")
    theta = FuncGrid(directrix.grid, np.arctan2(sin_theta, rt))
    phi = FuncGrid(directrix.grid, np.unwrap(np.arctan2(-rb, rn)))
    return DevelopablePatch3D.build(directrix, phi, theta, u_min, u_max)


def developability_residual(directrix, rulings):
    """det(X'(t), R(t), R'(t)) per node; zero exactly on developable patches."""
    Xp = directrix.derivatives()
    dR = _column_derivatives(directrix.grid, rulings)
    det = np.einsum("ij,ij->i", Xp, np.cross(rulings, dR))
    return FuncGrid(directrix.grid, det)


def develop_patch(patch, eps=EPS_DEV):
    """Unroll a developable patch isometrically into the plane.

    The developed directrix has curvature k = K cos(phi) at the same
    parametrization speed, and the ruling angles are preserved (isometry
    preserves angles on the surface).
    """
    patch.require_developable(eps)
    k = FuncGrid(patch.grid,
                 patch.directrix.curvature.values * np.cos(patch.inclination.values))
    flat = integrate_frame_2d(patch.directrix.speed, k)
    return DevelopablePatch2D(flat, patch.ruling_angle, patch.u_min, patch.u_max)


def ruling_curvature(patch=None, *, curvature=None, speed=None, inclination=None,
                     ruling_angle=None):
    """V = s' K sin(phi) / sin(theta), the bend transverse to the rulings.

    Accepts either a DevelopablePatch3D or the developed fields
    (k, s', phi, theta) with k the developed curvature (k = K cos(phi)).
    """
    if patch is not None:
        phi = patch.inclination.values
        if np.min(np.abs(np.cos(phi))) < 1e-9:
            raise InclinationSingular("patch at the maximally folded state")
        vals = (patch.directrix.speed.values * patch.directrix.curvature.values
                * np.sin(phi) / np.sin(patch.ruling_angle.values))
        return FuncGrid(patch.grid, vals)
    phi = inclination.values
    if np.min(np.abs(np.cos(phi))) < 1e-9:
        raise InclinationSingular("inclination at +-pi/2")
    vals = (speed.values * curvature.values * np.tan(phi)
            / np.sin(ruling_angle.values))
    return FuncGrid(curvature.grid, vals)


def refold_from_ruling_curvature(dev, V, sign=1, k_floor_rel=1e-7):
    """Bend a developed patch to match a prescribed ruling curvature.

    Recovers phi = arctan(V sin(theta) / (s' k)) (interpolated through
    isolated curvature zeros), K = k / cos(phi), the torsion from the
    developability condition, and re-integrates the directrix from a
    canonical initial frame.  The output is determined up to Euclidean
    motion, which is why shape comparisons go through Procrustes alignment.
    """
    g = dev.grid
    k = dev.directrix.curvature.values
    sp = dev.directrix.speed.values
    theta = dev.ruling_angle.values
    k_scale = np.max(np.abs(k))
    v_scale = np.max(np.abs(V.values))
    if k_scale < 1e-14:
        if v_scale > 1e-12:
            raise InconsistentBend("flat directrix cannot carry nonzero ruling curvature")
        phi_vals = np.zeros(g.n)
    else:
        ok = np.abs(k) > k_floor_rel * k_scale
        if not np.any(ok):
            raise InconsistentBend("curvature vanishes everywhere")
        ratio = np.empty(g.n)
        ratio[ok] = V.values[ok] * np.sin(theta[ok]) / (sp[ok] * k[ok])
        phi_vals = np.empty(g.n)
        phi_vals[ok] = np.arctan(ratio[ok])
        if not np.all(ok):
            idx = np.arange(g.n)
            phi_vals[~ok] = np.interp(idx[~ok], idx[ok], phi_vals[ok])
    phi_vals = sign * phi_vals
    phi = FuncGrid(g, phi_vals)
    cos_phi = np.cos(phi_vals)
    if np.min(np.abs(cos_phi)) < 1e-9:
        raise InclinationSingular("requested bend reaches the maximally folded state")
    K = FuncGrid(g, k / cos_phi)
    tau = FuncGrid(g, derivative(phi).values / sp
                   - K.values * np.sin(phi_vals) / np.tan(theta))
    directrix = integrate_frame_3d(dev.directrix.speed, K, tau)
    return DevelopablePatch3D.build(directrix, phi, dev.ruling_angle,
                                    dev.u_min, dev.u_max)


def procrustes_residual(points_a, points_b):
    """Max vertex distance after the best proper rigid alignment of a onto b."""
    A = np.asarray(points_a, dtype=float)
    B = np.asarray(points_b, dtype=float)
    ca = A.mean(axis=0)
    cb = B.mean(axis=0)
    H = (A - ca).T @ (B - cb)
    U, _, Vt = np.linalg.svd(H)
    D = np.eye(H.shape[0])
    D[-1, -1] = np.sign(np.linalg.det(U @ Vt))
    R = U @ D @ Vt
    aligned = (A - ca) @ R + cb
    return float(np.max(np.linalg.norm(aligned - B, axis=1)))
