"""Property-preserving pattern operations built on tangent parallelism.

Finding a curve on a ruled patch x(t) + u r(t) whose tangents are parallel
to a given reference field reduces to the linear length ODE

    l' = a(t) l + b(t),   a = -(n_t . r') / (n_t . r),   b = -(n_t . x') / (n_t . r),

with n_t the reference normal.  Combescure transformation rebuilds a whole
pattern curve by curve this way (parallel tangents and identical ruling
directions), and a parallel pleat appends one crease whose tangents and
incident rulings are parallel to the last crease's.  Both operations leave
crease classifications and the foldability verdict unchanged, which the test
suite checks numerically.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .curves import Curve2D, rot90
from .errors import (OutOfExtentWarning, RulingParallelToTarget,
                     TransformDegenerate)
from .numerics import FuncGrid, cumulative_integral
from .pattern import (pattern_from_curves, ruling_angles,
                      ruling_directions, validate)

PARALLEL_ANGLE_TOL = 1e-6
MIN_TRANSVERSAL = 1e-6


@dataclass(frozen=True)
class ParallelCurveProblem:
    host_directrix: Curve2D
    host_rulings: np.ndarray       # unit 2-vectors per node
    target_tangents: np.ndarray    # unit 2-vectors per node
    initial_length: float
    u_min: np.ndarray | None = None
    u_max: np.ndarray | None = None


@dataclass(frozen=True)
class ParallelCurveSolution:
    curve: Curve2D
    length: FuncGrid               # offset along the rulings


def parallel_curve_on_patch(problem):
    """Locate the curve x + l(t) r(t) with tangents parallel to the target."""
    host = problem.host_directrix
    g = host.grid
    r = problem.host_rulings
    n_t = rot90(problem.target_tangents)
    denom = np.einsum("ij,ij->i", n_t, r)
    if np.min(np.abs(denom)) < MIN_TRANSVERSAL:
        raise RulingParallelToTarget(
            "target tangents become parallel to the rulings")
    rp = np.column_stack([FuncGrid(g, r[:, i]).node_derivatives for i in range(2)])
    xp = host.derivatives()
    a = FuncGrid(g, -np.einsum("ij,ij->i", n_t, rp) / denom)
    b = FuncGrid(g, -np.einsum("ij,ij->i", n_t, xp) / denom)
    l = FuncGrid(g, _kernels.rk4_linear(a.values, a.midpoint_values(),
                                        b.values, b.midpoint_values(),
                                        g.h, float(problem.initial_length)))

    points = host.points + l.values[:, None] * r
    deriv = xp + (a.values * l.values + b.values)[:, None] * r + l.values[:, None] * rp
    speed = np.linalg.norm(deriv, axis=1)
    if np.min(speed) <= 0.0:
        raise TransformDegenerate("parallel curve has vanishing speed")
    tangents = deriv / speed[:, None]

    dots = np.einsum("ij,ij->i", tangents, problem.target_tangents)
    crosses = np.abs(tangents[:, 0] * problem.target_tangents[:, 1]
                     - tangents[:, 1] * problem.target_tangents[:, 0])
    angle = float(np.max(np.arctan2(crosses, np.abs(dots))))
    if angle > PARALLEL_ANGLE_TOL:
        raise TransformDegenerate(
            f"parallel-curve verification failed: tangent angle {angle:.2e}")
    if np.min(dots) < 0.0:
        raise TransformDegenerate("parallel curve reverses orientation")

    if problem.u_min is not None and problem.u_max is not None:
        if np.any(l.values < problem.u_min) or np.any(l.values > problem.u_max):
            warnings.warn("parallel curve leaves the host patch extent",
                          OutOfExtentWarning)
    normals = rot90(tangents)
    dtx = FuncGrid(g, tangents[:, 0]).node_derivatives
    dty = FuncGrid(g, tangents[:, 1]).node_derivatives
    k = (dtx * normals[:, 0] + dty * normals[:, 1]) / speed
    curve = Curve2D(g, FuncGrid(g, speed), FuncGrid(g, k),
                    points, tangents, normals)
    return ParallelCurveSolution(curve, l)


def _transport_curve(curve, p0):
    """Integrate x~' = p0 x' for the first (boundary) curve of a transform."""
    g = curve.grid
    if np.min(p0.values) <= 0.0:
        raise TransformDegenerate("speed ratio p0 must stay positive")
    deriv = curve.derivatives() * p0.values[:, None]
    x = cumulative_integral(FuncGrid(g, deriv[:, 0])).values + curve.points[0, 0]
    y = cumulative_integral(FuncGrid(g, deriv[:, 1])).values + curve.points[0, 1]
    speed = FuncGrid(g, curve.speed.values * p0.values)
    curvature = FuncGrid(g, curve.curvature.values / p0.values)
    return Curve2D(g, speed, curvature, np.column_stack([x, y]),
                   curve.tangents.copy(), curve.normals.copy())


def combescure_transform(pattern, p0=None, initial_lengths=None):
    """Parallel copy of a pattern: same ruling directions, scaled speeds.

    p0 is the speed ratio along the first boundary (defaults to 1); the
    initial lengths fix each subsequent curve's offset at t = 0 and default
    to the source pattern's own offsets, making the default an identity.
    """
    g = pattern.grid
    if p0 is None:
        p0 = FuncGrid.constant(g, 1.0)
    if initial_lengths is None:
        initial_lengths = [float(np.linalg.norm(pattern.curves[i + 1].points[0]
                                                - pattern.curves[i].points[0]))
                           for i in range(pattern.n_patches)]
    if len(initial_lengths) != pattern.n_patches:
        raise TransformDegenerate(
            f"need {pattern.n_patches} initial lengths, got {len(initial_lengths)}")
    if any(l <= 0.0 for l in initial_lengths):
        raise TransformDegenerate("initial lengths must be positive")

    new_curves = [_transport_curve(pattern.curves[0], p0)]
    for i in range(pattern.n_patches):
        # The original join field of patch i.  Boundary patches with stored
        # outer angles transport along the file's curve join as well: the
        # angle data is copied verbatim and only tangent parallelism matters.
        d = pattern.curves[i + 1].points - pattern.curves[i].points
        rulings = d / np.linalg.norm(d, axis=1)[:, None]
        sol = parallel_curve_on_patch(ParallelCurveProblem(
            new_curves[-1], rulings, pattern.curves[i + 1].tangents,
            initial_lengths[i]))
        new_curves.append(sol.curve)

    out = pattern_from_curves(g, new_curves, pattern.outer_first_r,
                              pattern.outer_last_l)
    if not validate(out).regular:
        raise TransformDegenerate("transformed pattern violates regularity")
    return out


def add_parallel_pleat(pattern, crease_offset, boundary_offset):
    """Append one crease parallel to the last one, plus a new left boundary.

    The new crease sits on the last patch at initial offset crease_offset and
    inherits the last crease's rulings with the sides exchanged:
    theta_{n+1,L} = theta_{n,R} and theta_{n+1,R} = theta_{n,L}.
    """
    g = pattern.grid
    n = pattern.n_creases
    if crease_offset <= 0.0 or boundary_offset <= 0.0:
        raise TransformDegenerate("pleat offsets must be positive")
    last_patch_rulings = ruling_directions(pattern, n)
    last_crease = pattern.crease(n)
    sol = parallel_curve_on_patch(ParallelCurveProblem(
        last_crease, last_patch_rulings, last_crease.tangents, crease_offset))
    new_crease = sol.curve

    mirrored_rulings = ruling_directions(pattern, n - 1)
    sol_b = parallel_curve_on_patch(ParallelCurveProblem(
        new_crease, mirrored_rulings, pattern.curves[n + 1].tangents,
        boundary_offset))
    new_boundary = sol_b.curve

    _, theta_nr = ruling_angles(pattern, n)
    out = pattern_from_curves(
        g, list(pattern.curves[:n + 1]) + [new_crease, new_boundary],
        pattern.outer_first_r, theta_nr.values.copy())
    if not validate(out).regular:
        raise TransformDegenerate("pleated pattern violates regularity")
    return out
