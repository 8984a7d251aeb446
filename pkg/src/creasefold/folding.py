"""Folded states: single-crease solving, assembly, and motion sampling.

For one crease with ruling angles theta_L, theta_R the half fold-angle phi
solves phi' = f(t) tan(phi) with f = (1/2) s'k (cot theta_L + cot theta_R),
giving phi = arcsin(c0 e^{I}) with I the antiderivative of f; the folded
curvature and torsion follow as

    K = k / cos(phi),        tau = (1/2) k (cot theta_R - cot theta_L) tan(phi).

Multi-crease states chain the initial constants with
c_{i+1} = -c_i c3 / sqrt(1 - c_i^2 c4) per interior patch and assemble the
creases sequentially: crease i+1 is reached by marching along the embedded
rulings of patch i, then independently re-integrated from its own intrinsic
data anchored at the shared tangent plane.  The gap between the two copies
is the assembly residual; it doubles as the isometry oracle (patches are
guaranteed to fit exactly when the pair conditions hold).
"""

from dataclasses import dataclass

import numpy as np

from .curves import integrate_frame_3d
from .errors import (AssemblyMismatch, FoldAngleOutOfRange,
                     InclinationSingular, IncompatiblePattern)
from .numerics import FuncGrid, cumulative_integral, derivative
from .pattern import ruling_angles
from .patches import DevelopablePatch3D

EPS_FIT_REL = 1e-4    # assembly residual bound, relative to pattern diameter
MOTION_MARGIN = 1e-6  # stay strictly inside the attainable fold range


def _cot(theta):
    return np.cos(theta.values) / np.sin(theta.values)


@dataclass(frozen=True)
class CreaseFoldSolution:
    phi: FuncGrid
    curvature: FuncGrid   # K(t)
    torsion: FuncGrid
    c0: float
    fold_integral: FuncGrid  # I(t)
    c_max: float


@dataclass(frozen=True)
class TrivialState:
    """Marker for the flat state (c1 = 0), which is not a folded state."""
    reason: str = "trivial state"


def c_max(curvature, speed, theta_l, theta_r):
    """Largest |c0| for which arcsin(c0 e^I) stays real on the whole domain."""
    f = FuncGrid(curvature.grid,
                 0.5 * speed.values * curvature.values
                 * (_cot(theta_l) + _cot(theta_r)))
    I = cumulative_integral(f)
    return float(np.exp(-np.max(I.values)))


def fold_single_crease(curvature, speed, theta_l, theta_r, c0):
    """Solve one crease for initial value c0 = sin(phi(0))."""
    g = curvature.grid
    sk = speed.values * curvature.values
    cot_l = _cot(theta_l)
    cot_r = _cot(theta_r)
    f = FuncGrid(g, 0.5 * sk * (cot_l + cot_r))
    I = cumulative_integral(f)
    bound = float(np.exp(-np.max(I.values)))
    if abs(c0) > bound:
        raise FoldAngleOutOfRange(bound)
    u = c0 * np.exp(I.values)
    phi_vals = np.arcsin(np.clip(u, -1.0, 1.0))
    cos_phi = np.cos(phi_vals)
    if np.min(np.abs(cos_phi)) < 1e-9:
        raise InclinationSingular("crease reaches the maximally folded state")
    # The torsion follows from the two developability equations; note it
    # carries the curvature alone, not s'k, so that phi' = s'tau + s'k tan(phi) cot(theta)
    # holds on both sides for any parametrization speed.
    tan_phi = np.tan(phi_vals)
    tau = FuncGrid(g, 0.5 * curvature.values * (cot_r - cot_l) * tan_phi)
    K = FuncGrid(g, curvature.values / cos_phi)
    return CreaseFoldSolution(FuncGrid(g, phi_vals), K, tau, float(c0), I, bound)


def propagate_fold_constant(c_i, c3, c4):
    """c_{i+1} = -c_i c3 / sqrt(1 - c_i^2 c4).

    The constant fold-angle branch is the same formula with c4 = 1 - c3^2.
    """
    disc = 1.0 - c_i * c_i * c4
    if disc <= 0.0:
        raise FoldAngleOutOfRange(
            np.sqrt(1.0 / c4) if c4 > 0 else None,
            f"1 - c^2 c4 = {disc:.3e} <= 0: fold constant out of range")
    return -c_i * c3 / np.sqrt(disc)


@dataclass(frozen=True)
class FoldedState:
    c_values: tuple          # per-crease constants, c_values[0] = c1
    solutions: tuple         # CreaseFoldSolution per crease
    creases: tuple           # Curve3D per crease
    patches: tuple           # DevelopablePatch3D per patch, right to left
    assembly_residual: float
    ruling_match_residual: float  # worst shared-ruling-curvature mismatch

    @property
    def n_creases(self):
        return len(self.creases)


@dataclass(frozen=True)
class FoldMotion:
    samples: tuple           # (c1, FoldedState) pairs, increasing c1
    c1_range: tuple          # (0, c1_ub), open at both ends


def _anchor_frame(P, R, theta_r0, phi_r0):
    """Initial frame of the next crease from the shared tangent plane.

    The plane normal P and ruling direction R are shared along the first
    ruling; the crease tangent sits at the 2D angle theta_R from the ruling
    (isometry preserves surface angles), and (N, B) wind around T by the
    right-side inclination phi_R.
    """
    T = np.cos(theta_r0) * R - np.sin(theta_r0) * np.cross(P, R)
    W = np.cross(P, T)
    N = np.sin(phi_r0) * P + np.cos(phi_r0) * W
    B = np.cross(T, N)
    return T, N, B


def fold_pattern(pattern, report, c1, eps_fit_rel=EPS_FIT_REL):
    """Assemble the folded state of a foldable pattern at fold constant c1."""
    if not report.foldable:
        raise IncompatiblePattern(f"pattern verdict is {report.verdict!r}")
    if c1 == 0.0:
        return TrivialState()
    n = pattern.n_creases
    cs = [float(c1)]
    for pair in report.pairs:
        cs.append(propagate_fold_constant(cs[-1], pair.c3, pair.c4))

    solutions = []
    angles = []
    for i in range(1, n + 1):
        crease = pattern.crease(i)
        th_l, th_r = ruling_angles(pattern, i)
        angles.append((th_l, th_r))
        solutions.append(fold_single_crease(crease.curvature, crease.speed,
                                            th_l, th_r, cs[i - 1]))

    # crease 1 from the canonical frame
    creases3d = [integrate_frame_3d(pattern.crease(1).speed,
                                    solutions[0].curvature,
                                    solutions[0].torsion)]
    patches = []
    assembly = 0.0

    # right boundary patch hangs off crease 1 with the right-side data
    th_l1, th_r1 = angles[0]
    L0 = pattern.ruling_lengths(0)
    patches.append(DevelopablePatch3D.build(
        creases3d[0], FuncGrid(pattern.grid, -solutions[0].phi.values), th_r1,
        FuncGrid(pattern.grid, -L0), FuncGrid.constant(pattern.grid, 0.0)))

    for i in range(1, n + 1):
        crease3d = creases3d[-1]
        sol = solutions[i - 1]
        th_l, th_r = angles[i - 1]
        Li = pattern.ruling_lengths(i)
        patch = DevelopablePatch3D.build(
            crease3d, sol.phi, th_l,
            FuncGrid.constant(pattern.grid, 0.0), FuncGrid(pattern.grid, Li))
        patches.append(patch)
        if i == n:
            break
        marched = crease3d.points + Li[:, None] * patch.rulings
        next_sol = solutions[i]
        th_l2, th_r2 = angles[i]
        T0, N0, B0 = _anchor_frame(patch.plane_normals[0], patch.rulings[0],
                                   th_r2.values[0], -next_sol.phi.values[0])
        nxt = integrate_frame_3d(pattern.crease(i + 1).speed,
                                 next_sol.curvature, next_sol.torsion,
                                 X0=marched[0], frame0=(T0, N0, B0))
        assembly = max(assembly, float(np.max(
            np.linalg.norm(nxt.points - marched, axis=1))))
        creases3d.append(nxt)

    limit = eps_fit_rel * pattern.diameter()
    if assembly > limit:
        raise AssemblyMismatch(
            f"assembly residual {assembly:.3e} exceeds {limit:.3e}; "
            f"the pair conditions do not hold at this resolution")

    ruling_match = 0.0
    for i in range(1, n):
        th_l, _ = angles[i - 1]
        _, th_r = angles[i]
        v_left = (pattern.crease(i).speed.values
                  * pattern.crease(i).curvature.values
                  * np.tan(solutions[i - 1].phi.values) / np.sin(th_l.values))
        v_right = -(pattern.crease(i + 1).speed.values
                    * pattern.crease(i + 1).curvature.values
                    * np.tan(solutions[i].phi.values) / np.sin(th_r.values))
        scale = max(np.max(np.abs(v_left)), np.max(np.abs(v_right)), 1e-15)
        ruling_match = max(ruling_match,
                           float(np.max(np.abs(v_left - v_right))) / scale)

    return FoldedState(tuple(cs), tuple(solutions), tuple(creases3d),
                       tuple(patches), assembly, ruling_match)


def motion_bound(pattern, report):
    """Largest admissible c1 along the whole chain (strict upper bound)."""
    n = pattern.n_creases
    bounds = []
    for i in range(1, n + 1):
        crease = pattern.crease(i)
        th_l, th_r = ruling_angles(pattern, i)
        bounds.append(c_max(crease.curvature, crease.speed, th_l, th_r))
    b = bounds[-1] ** 2
    for pair, bound_i in zip(reversed(report.pairs), reversed(bounds[:-1])):
        denom = pair.c3 ** 2 + pair.c4 * b
        if denom <= 0.0:
            b = np.inf
        else:
            b = b / denom
        if pair.c4 > 0.0:
            b = min(b, 1.0 / pair.c4)
        b = min(b, bound_i ** 2)
    return float(np.sqrt(b))


def sample_motion(pattern, report, c1_steps):
    """Sample the folding motion at c1_steps interior values of c1."""
    if c1_steps < 1:
        raise ValueError("need at least one motion step")
    ub = motion_bound(pattern, report) * (1.0 - MOTION_MARGIN)
    samples = []
    for j in range(1, c1_steps + 1):
        c1 = ub * j / (c1_steps + 1.0)
        samples.append((c1, fold_pattern(pattern, report, c1)))
    return FoldMotion(tuple(samples), (0.0, ub))
