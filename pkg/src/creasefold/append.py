"""Sequential construction of rigid-ruling foldable patterns.

Given one crease with both ruling angles, the compatible curves on the
adjacent patch form a three-parameter family governed by an explicit
third-order ODE in the length function l_2 (one instance for a cylindrical
central patch, one for a conical one).  The unknown outer ruling angle
follows algebraically:

  cylinder:  cot(theta_2L) = (l_2''/l_1'') (cot(theta_1R) + l_1') - l_2'
  cone:      cot(theta_2L) = (-l_2 l_2' + (f_2/f_1)(l_1 l_1' + l_1^2 cot(theta_1R))) / l_2^2

with e_i = l_i^2 + l_i'^2 and f_i = l_i^2 + 2 l_i'^2 - l_i l_i''.  A general
(tangent-developable) central patch is reduced to a cone by a Combescure
transform that makes the rulings concurrent, appended there, and mapped
back through tangent parallelism.

The constant fold-angle constructions integrate the first-order reductions:
on a cylinder arctanh(l'/sqrt(1+l'^2)) is shared up to affine constants, and
on a cone a second-order ODE links the two length functions.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (ApexCollision, InflectionInPath, ReductionDegenerate,
                     StraightCreaseDegeneracy, TransformDegenerate)
from .numerics import (FuncGrid, Grid, cumulative_integral, derivative,
                       integrate_ode_sampled)
from .pattern import (build_cone_radial, build_cylinder_graph,
                      pattern_from_curves, ruling_angles, ruling_directions)
from .transform import ParallelCurveProblem, parallel_curve_on_patch

INFLECTION_REL = 1e-6


@dataclass(frozen=True)
class AppendSpec:
    host: object                   # 1-crease CreaseRulePattern
    initial_values: tuple          # (l_2(0), l_2'(0), l_2''(0))
    boundary_gap: float = 0.3     # offset of the new left boundary


@dataclass(frozen=True)
class AppendResult:
    length: FuncGrid               # l_2(t)
    theta_2l: FuncGrid             # outer ruling angle of the appended crease
    pattern: object                # extended CreaseRulePattern


def _host_crease_data(host):
    if host.n_creases != 1:
        raise TransformDegenerate("append host must have exactly one crease")
    _, th_r = ruling_angles(host, 1)
    cot_r = FuncGrid(host.grid, np.cos(th_r.values) / np.sin(th_r.values))
    return cot_r


def _curve_derivative_chain(grid, values, orders=3):
    chain = [FuncGrid(grid, values)]
    for _ in range(orders):
        chain.append(derivative(chain[-1]))
    return chain


def _cylinder_rhs(vals, y):
    v_l1p, v_l1pp, v_l1ppp, v_cot = vals
    l2, l2p, l2pp = y
    q1 = 1.0 + v_l1p * v_l1p
    q2 = 1.0 + l2p * l2p
    l2ppp = 0.5 * l2pp * (
        (v_cot - v_l1p) * v_l1pp / q1
        - (v_cot + v_l1p) * l2pp * l2pp / (v_l1pp * q2)
        + 2.0 * l2p * l2pp / q2
        + 2.0 * v_l1ppp / v_l1pp)
    return (l2p, l2pp, l2ppp)


def append_crease_cylinder(spec):
    """Append a compatible crease to a cylinder-graph host."""
    host = spec.host
    if host.kind != "cylinder-graph":
        raise TransformDegenerate("cylindrical append needs a cylinder-graph host")
    cot1r = _host_crease_data(host)
    g = host.grid
    l1, l1p, l1pp, l1ppp = _curve_derivative_chain(g, host.lengths[1])
    scale = np.max(np.abs(l1pp.values))
    if scale == 0.0 or np.min(np.abs(l1pp.values)) < INFLECTION_REL * scale:
        raise InflectionInPath("host crease has an inflection in the window "
                               "(l_1'' reaches zero)")
    if spec.initial_values[0] <= l1.values[0]:
        raise TransformDegenerate("appended crease must start left of the host")

    states = integrate_ode_sampled(_cylinder_rhs, spec.initial_values, g,
                                   (l1p, l1pp, l1ppp, cot1r))
    l2 = FuncGrid(g, states[:, 0])
    if np.min(l2.values - l1.values) <= 1e-9:
        raise TransformDegenerate("appended crease crosses the host crease")
    cot2l = (states[:, 2] / l1pp.values) * (cot1r.values + l1p.values) - states[:, 1]
    theta2l = FuncGrid(g, np.arctan2(np.ones(g.n), cot2l))

    gap = spec.boundary_gap
    lengths = [host.lengths[0], host.lengths[1], l2.values, l2.values + gap]
    extended = build_cylinder_graph(g.t_max, g.n, lengths,
                                    host.outer_first_r, theta2l.values)
    return AppendResult(l2, theta2l, extended)


def _cone_rhs(vals, y):
    v_l1, v_l1p, v_l1pp, v_l1ppp, v_cot = vals
    l2, l2p, l2pp = y
    e1 = v_l1 * v_l1 + v_l1p * v_l1p
    e2 = l2 * l2 + l2p * l2p
    f1 = v_l1 * v_l1 + 2.0 * v_l1p * v_l1p - v_l1 * v_l1pp
    f2 = l2 * l2 + 2.0 * l2p * l2p - l2 * l2pp
    bracket = (2.0 * v_l1p / v_l1 - 2.0 * l2p / l2
               + (v_l1p + v_l1 * v_cot) * (f1 / (v_l1 * e1)
                                           - v_l1 * f2 * f2 / (l2 * l2 * e2 * f1))
               + 2.0 * v_l1p * (v_l1 + v_l1pp) / e1
               - 2.0 * l2p * (l2 + l2pp) / e2
               + (-2.0 * v_l1p * (2.0 * v_l1 + 3.0 * v_l1pp)
                  + 2.0 * v_l1 * v_l1ppp) / f1
               + (4.0 * l2 * l2p + 6.0 * l2p * l2pp) / f2)
    return (l2p, l2pp, 0.5 * f2 / l2 * bracket)


def append_crease_cone(spec):
    """Append a compatible crease to a cone-radial host."""
    host = spec.host
    if host.kind != "cone-radial":
        raise TransformDegenerate("conical append needs a cone-radial host")
    cot1r = _host_crease_data(host)
    g = host.grid
    l1, l1p, l1pp, l1ppp = _curve_derivative_chain(g, host.lengths[1])
    f1 = l1.values ** 2 + 2.0 * l1p.values ** 2 - l1.values * l1pp.values
    if np.min(np.abs(f1)) < INFLECTION_REL * np.max(np.abs(f1)):
        raise InflectionInPath("host crease has an inflection in the window "
                               "(f_1 reaches zero)")
    l20, l2p0, l2pp0 = spec.initial_values
    if not l20 > l1.values[0] > 0.0:
        raise TransformDegenerate("need l_2(0) > l_1(0) > 0")
    f20 = l20 * l20 + 2.0 * l2p0 * l2p0 - l20 * l2pp0
    if abs(f20) < 1e-9 * l20 * l20:
        raise StraightCreaseDegeneracy(
            "initial values lie on the straight-line family (f_2 = 0)")

    states = integrate_ode_sampled(_cone_rhs, spec.initial_values, g,
                                   (l1, l1p, l1pp, l1ppp, cot1r))
    l2 = FuncGrid(g, states[:, 0])
    f2 = states[:, 0] ** 2 + 2.0 * states[:, 1] ** 2 - states[:, 0] * states[:, 2]
    if np.min(np.abs(f2)) < INFLECTION_REL * np.max(np.abs(f2)):
        raise StraightCreaseDegeneracy(
            "appended crease degenerates toward a straight line (f_2 -> 0)")
    if np.min(l2.values - l1.values) <= 1e-9:
        raise TransformDegenerate("appended crease crosses the host crease")
    cot2l = (-states[:, 0] * states[:, 1]
             + (f2 / f1) * (l1.values * l1p.values
                            + l1.values ** 2 * cot1r.values)) / states[:, 0] ** 2
    theta2l = FuncGrid(g, np.arctan2(np.ones(g.n), cot2l))

    gap = spec.boundary_gap
    lengths = [host.lengths[0], host.lengths[1], l2.values, l2.values + gap]
    extended = build_cone_radial(host.apex, g.t_max, g.n, lengths,
                                 host.outer_first_r, theta2l.values)
    return AppendResult(l2, theta2l, extended)


def _invert_monotone(psi, targets):
    """Parameters t with psi(t) = target for an increasing sampled psi."""
    g = psi.grid
    t = np.interp(targets, psi.values, g.nodes)
    dpsi = derivative(psi)
    for _ in range(4):
        t = np.clip(t - (psi(t) - targets) / dpsi(t), 0.0, g.t_max)
    return t


def append_crease_general(spec):
    """Append to a general host by reduction to a concurrent-ruling (cone) gauge.

    The central patch is Combescure-transformed so its rulings concur at one
    point (possible wherever they are nowhere parallel), the conical append
    runs in the rotation gauge psi with the reduced directrix normalized to
    lambda(0) = 1, and the result maps back through tangent parallelism.
    Initial values are interpreted in that normalized gauge.
    """
    host = spec.host
    if host.kind == "cone-radial":
        return append_crease_cone(spec)
    if host.kind == "cylinder-graph":
        return append_crease_cylinder(spec)
    if host.n_creases != 1:
        raise TransformDegenerate("append host must have exactly one crease")
    g = host.grid
    x1 = host.crease(1)
    r = ruling_directions(host, 1)
    rp = np.column_stack([FuncGrid(g, r[:, i]).node_derivatives for i in range(2)])
    turn = rp[:, 0] * r[:, 1] - rp[:, 1] * r[:, 0]   # = psi' in the cone gauge
    if np.min(np.abs(turn)) < 1e-6:
        raise ReductionDegenerate("rulings are parallel on a subinterval; "
                                  "no cone reduction exists there")
    if np.max(turn) < 0.0:
        raise ReductionDegenerate("ruling field turns counterclockwise; "
                                  "mirror the pattern into the standard gauge first")
    if np.min(turn) < 0.0:
        raise ReductionDegenerate("ruling field changes turning direction; "
                                  "host is of mixed developable type")

    xp = x1.derivatives()
    cross_xr = xp[:, 0] * r[:, 1] - xp[:, 1] * r[:, 0]
    lam_rate = FuncGrid(g, turn * np.einsum("ij,ij->i", xp, r) / cross_xr)
    lam = np.exp(cumulative_integral(lam_rate).values)  # lambda(0) = 1
    apex = x1.points[0] - r[0]

    # reduced directrix apex + lambda r must be tangent-parallel to the crease
    lam_deriv = (lam * lam_rate.values)[:, None] * r + lam[:, None] * rp
    cross = np.abs(lam_deriv[:, 0] * x1.tangents[:, 1]
                   - lam_deriv[:, 1] * x1.tangents[:, 0])
    mis = float(np.max(cross / np.linalg.norm(lam_deriv, axis=1)))
    if mis > 1e-6:
        raise ReductionDegenerate(f"cone reduction failed: tangent defect {mis:.2e}")

    psi = FuncGrid(g, np.unwrap(np.arctan2(-r[:, 1], r[:, 0])))
    span = float(psi.values[-1] - psi.values[0])
    gauge = Grid(span, g.n)
    t_at = _invert_monotone(FuncGrid(g, psi.values - psi.values[0]), gauge.nodes)
    lam_fg = FuncGrid(g, lam)
    _, th1r = ruling_angles(host, 1)
    th1r_fg = FuncGrid(g, th1r.values)

    l1_gauge = np.asarray(lam_fg(t_at))
    cone_host = build_cone_radial(
        (0.0, 0.0), span, g.n,
        [0.6 * l1_gauge, l1_gauge, l1_gauge + 1.0],
        outer_first_r=np.asarray(th1r_fg(t_at)))
    cone_result = append_crease_cone(AppendSpec(cone_host, spec.initial_values,
                                                spec.boundary_gap))

    # map the appended crease back: same ruling directions, parallel tangents
    xi_at_t = psi.values - psi.values[0]
    l2_at_t = np.asarray(cone_result.length(xi_at_t))
    target_pts = apex + l2_at_t[:, None] * r
    dcol = np.column_stack([FuncGrid(g, target_pts[:, i]).node_derivatives
                            for i in range(2)])
    target_tangents = dcol / np.linalg.norm(dcol, axis=1)[:, None]
    sol = parallel_curve_on_patch(ParallelCurveProblem(
        x1, r, target_tangents, float(l2_at_t[0] - 1.0)))
    new_crease = sol.curve

    theta2l = FuncGrid(g, np.asarray(cone_result.theta_2l(xi_at_t)))
    r2l = (np.cos(theta2l.values)[:, None] * new_crease.tangents
           + np.sin(theta2l.values)[:, None] * new_crease.normals)
    gap = spec.boundary_gap * float(np.median(np.linalg.norm(
        new_crease.points - x1.points, axis=1)))
    boundary_pts = new_crease.points + gap * r2l
    from .curves import analyze_curve_2d

    boundary = analyze_curve_2d(boundary_pts, g)
    extended = pattern_from_curves(
        g, [host.curves[0], x1, new_crease, boundary],
        host.outer_first_r, theta2l.values)
    return AppendResult(sol.length, theta2l, extended)


def constant_fold_pair_cylinder(l2, c3, c4=0.0, c5=0.0, branch=1):
    """Companion length function with F_1 = c3 F_2 on a cylinder (closed form).

    h = c3 arctanh(l_2'/sqrt(1+l_2'^2)) + c4; l_1 = c5 +- int sinh(h).
    """
    g = l2.grid
    l2p = derivative(l2).values
    l2pp = derivative(FuncGrid(g, l2p)).values
    if np.max(np.abs(l2pp)) * g.t_max ** 2 < 1e-12:
        raise StraightCreaseDegeneracy("l_2 must not be straight")
    h = c3 * np.arctanh(l2p / np.sqrt(1.0 + l2p * l2p)) + c4
    integrand = FuncGrid(g, np.sinh(h))
    return FuncGrid(g, c5 + branch * cumulative_integral(integrand).values)


def constant_fold_pair_cone(l2, c3, l1_0, l1p_0):
    """Companion length function with F_1 = c3 F_2 on a cone (second-order ODE)."""
    g = l2.grid
    if l1_0 <= 0.0:
        raise ApexCollision("l_1(0) must be positive")
    l2p = derivative(l2).values
    l2pp = derivative(FuncGrid(g, l2p)).values
    f2 = l2.values ** 2 + 2.0 * l2p ** 2 - l2.values * l2pp
    if np.max(np.abs(f2)) * g.t_max ** 2 < 1e-12:
        raise StraightCreaseDegeneracy("l_2 must not be straight")
    e2 = l2.values ** 2 + l2p ** 2
    drive = FuncGrid(g, f2 / (l2.values * np.sqrt(e2)))

    def rhs(vals, y):
        v_drive, = vals
        l1, l1p = y
        if l1 <= 0.0:
            return (np.nan, np.nan)
        e1 = l1 * l1 + l1p * l1p
        return (l1p, l1 + 2.0 * l1p * l1p / l1 - c3 * np.sqrt(e1) * v_drive)

    try:
        states = integrate_ode_sampled(rhs, (l1_0, l1p_0), g, (drive,))
    except Exception as exc:
        raise ApexCollision(f"companion curve collapsed into the apex: {exc}") from exc
    l1 = states[:, 0]
    if np.min(l1) <= 0.0:
        raise ApexCollision("companion curve reaches the apex")
    return FuncGrid(g, l1)


def asinh_slope(length):
    """arctanh(l'/sqrt(1+l'^2)) = asinh(l'), the cylinder invariant."""
    lp = derivative(length).values
    return FuncGrid(length.grid, np.arcsinh(lp))
