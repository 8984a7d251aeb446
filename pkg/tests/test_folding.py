import numpy as np
import pytest

from creasefold import fixtures
from creasefold.compatibility import compatibility_report
from creasefold.errors import FoldAngleOutOfRange
from creasefold.folding import (TrivialState, c_max, fold_pattern,
                                fold_single_crease, motion_bound,
                                propagate_fold_constant, sample_motion)
from creasefold.numerics import FuncGrid, Grid, derivative
from creasefold.pattern import ruling_angles


def const(g, c):
    return FuncGrid.constant(g, c)


def annulus_crease_fields(n=401):
    g = Grid(np.pi / 2, n)
    return (const(g, -1.0), const(g, 1.0), const(g, np.pi / 2),
            const(g, np.pi / 2))


def test_flat_state_single_crease():
    k, sp, tl, tr = annulus_crease_fields()
    sol = fold_single_crease(k, sp, tl, tr, 0.0)
    assert np.all(sol.phi.values == 0.0)
    assert np.all(sol.torsion.values == 0.0)
    assert np.max(np.abs(sol.curvature.values - k.values)) == 0.0


def test_annulus_single_crease_closed_form():
    k, sp, tl, tr = annulus_crease_fields()
    sol = fold_single_crease(k, sp, tl, tr, 0.5)
    assert np.max(np.abs(sol.phi.values - np.pi / 6)) < 1e-12
    assert np.max(np.abs(np.abs(sol.curvature.values) - 1.0 / np.cos(np.pi / 6))) < 1e-9
    assert np.max(np.abs(sol.torsion.values)) < 1e-9


def test_constant_fold_angle_when_angles_mirror():
    g = Grid(1.0, 401)
    k = FuncGrid.from_callable(g, lambda t: 1.0 + 0.5 * np.sin(3 * t))
    theta = FuncGrid.from_callable(g, lambda t: np.pi / 3 + 0.2 * np.cos(t))
    mirrored = FuncGrid(g, np.pi - theta.values)
    sol = fold_single_crease(k, const(g, 1.3), theta, mirrored, 0.4)
    assert np.max(np.abs(sol.phi.values - np.arcsin(0.4))) < 1e-12
    assert sol.c_max == pytest.approx(1.0, abs=1e-12)


def test_c_max_planar_cylinder_closed_form():
    # planar crease on vertical rulings with l'(0) = 0:
    # I = log(1 + l'^2)/2 and c_max = 1/sqrt(1 + m^2) for m = max |l'|
    g = Grid(np.pi, 401)
    t = g.nodes
    lp = -0.2 * np.sin(t)
    lpp = -0.2 * np.cos(t)
    q = 1.0 + lp * lp
    k = FuncGrid(g, lpp / q ** 1.5)
    sp = FuncGrid(g, np.sqrt(q))
    theta = FuncGrid(g, np.arctan2(np.ones(g.n), lp))
    bound = c_max(k, sp, theta, theta)
    assert bound == pytest.approx(1.0 / np.sqrt(1.0 + 0.04), abs=1e-9)
    sol = fold_single_crease(k, sp, theta, theta, bound * (1 - 1e-9))
    assert np.max(np.abs(sol.phi.values)) <= np.pi / 2


def test_fold_single_crease_rejects_out_of_range():
    p = fixtures.pleated_sine_cylinder(401)
    cr = p.crease(1)
    th_l, th_r = ruling_angles(p, 1)
    bound = c_max(cr.curvature, cr.speed, th_l, th_r)
    with pytest.raises(FoldAngleOutOfRange) as exc:
        fold_single_crease(cr.curvature, cr.speed, th_l, th_r, bound * 1.01)
    assert exc.value.bound == pytest.approx(bound)


def test_propagate_fold_constant_values():
    assert propagate_fold_constant(0.0, 1.0, 0.0) == 0.0
    assert propagate_fold_constant(0.4, 1.0, 0.0) == pytest.approx(-0.4)
    # constant fold-angle branch with c3 = 2, c4 = 1 - 4 = -3
    assert propagate_fold_constant(0.5, 2.0, -3.0) == pytest.approx(-1.0 / np.sqrt(1.75))


def test_propagate_fold_constant_domain():
    with pytest.raises(FoldAngleOutOfRange):
        propagate_fold_constant(0.9, 1.0, 2.0)


def test_fold_pattern_annulus_geometry():
    p = fixtures.annulus(401)
    r = compatibility_report(p)
    st = fold_pattern(p, r, 0.5)
    assert st.c_values[1] == pytest.approx(-0.5, abs=1e-12)
    r1 = np.abs(1.0 / st.creases[0].curvature.values)
    r2 = np.abs(1.0 / st.creases[1].curvature.values)
    assert np.max(np.abs(r1 - np.cos(np.pi / 6))) < 1e-6
    assert np.max(np.abs(r2 - 2.0 * np.cos(np.pi / 6))) < 1e-6
    assert st.assembly_residual < 1e-6
    assert st.ruling_match_residual < 1e-5


def test_fold_pattern_trivial_state():
    p = fixtures.annulus(401)
    r = compatibility_report(p)
    st = fold_pattern(p, r, 0.0)
    assert isinstance(st, TrivialState)


def test_fold_pattern_pleated_sine():
    p = fixtures.pleated_sine_cylinder(401)
    r = compatibility_report(p)
    st = fold_pattern(p, r, 0.3)
    assert st.ruling_match_residual < 1e-5
    assert st.assembly_residual < 1e-4 * p.diameter()


def test_folded_state_satisfies_side_equations():
    # phi_i' = sigma_ij s_i' tau_i + s_i' k_i tan(phi_i) cot(theta_ij), sigma_L/R = +/-1
    p = fixtures.catenary_pair(401)
    r = compatibility_report(p)
    st = fold_pattern(p, r, 0.4)
    for i in (1, 2):
        sol = st.solutions[i - 1]
        cr = p.crease(i)
        th_l, th_r = ruling_angles(p, i)
        dphi = derivative(sol.phi).values
        sk = cr.speed.values * cr.curvature.values
        tan_phi = np.tan(sol.phi.values)
        for sigma, th in ((1.0, th_l), (-1.0, th_r)):
            res = (dphi - sigma * cr.speed.values * sol.torsion.values
                   - sk * tan_phi / np.tan(th.values))
            assert np.max(np.abs(res[4:-4])) < 1e-5
        # k = K cos(phi) by construction
        res = cr.curvature.values - sol.curvature.values * np.cos(sol.phi.values)
        assert np.max(np.abs(res)) < 1e-8


def test_folded_patches_developable_and_isometric():
    p = fixtures.catenary_pair(401)
    r = compatibility_report(p)
    st = fold_pattern(p, r, 0.4)
    for patch in st.patches:
        patch.require_developable()
    # ruling lengths and crease arc-lengths match the 2D pattern
    for i, patch in enumerate(st.patches):
        L2 = p.ruling_lengths(i)
        width = patch.u_max.values - patch.u_min.values
        assert np.max(np.abs(width - L2) / np.max(L2)) < 1e-6
    from creasefold.numerics import cumulative_integral

    for i in (1, 2):
        s2d = cumulative_integral(p.crease(i).speed).values[-1]
        d3 = np.diff(st.creases[i - 1].points, axis=0)
        s3d = np.sum(np.linalg.norm(d3, axis=1))
        assert abs(s3d - s2d) / s2d < 1e-4  # chordal estimate of the same length


def test_fold_mirror_symmetry():
    p = fixtures.catenary_pair(401)
    r = compatibility_report(p)
    plus = fold_pattern(p, r, 0.35)
    minus = fold_pattern(p, r, -0.35)
    # reflection through the initial osculating plane of crease 1 (the x-y plane
    # of the canonical frame) maps one state to the other
    from creasefold.patches import procrustes_residual

    for i in range(2):
        mirrored = minus.creases[i].points * np.array([1.0, 1.0, -1.0])
        assert procrustes_residual(mirrored, plus.creases[i].points) < 1e-6


def test_motion_bound_constant_fold_cases():
    # c3 = 2 >= 1: full motion, bound 1; annulus c3 = 1: bound 1
    p = fixtures.catenary_pair(401)
    r = compatibility_report(p)
    assert motion_bound(p, r) == pytest.approx(1.0, abs=1e-9)
    p = fixtures.annulus(401)
    r = compatibility_report(p)
    assert motion_bound(p, r) == pytest.approx(1.0, abs=1e-9)


def test_sample_motion_annulus():
    p = fixtures.annulus(401)
    r = compatibility_report(p)
    m = sample_motion(p, r, 8)
    assert len(m.samples) == 8
    radii = [np.abs(1.0 / st.creases[0].curvature.values[0]) for _, st in m.samples]
    assert all(np.diff(radii) < 0.0)
    for c1, st in m.samples:
        assert radii[0] <= 1.0
        assert abs(np.abs(1.0 / st.creases[0].curvature.values[0])
                   - np.cos(np.arcsin(c1))) < 1e-9
        assert st.ruling_match_residual < 1e-5


def test_fold_pattern_rejects_incompatible_report():
    from creasefold.errors import IncompatiblePattern

    p = fixtures.off_center_annulus(401)
    r = compatibility_report(p)
    with pytest.raises(IncompatiblePattern):
        fold_pattern(p, r, 0.3)


def test_fold_single_crease_pattern():
    # one crease is always foldable: two patches hinging along it
    from creasefold.pattern import build_cone_radial

    g = Grid(np.pi / 2, 401)
    p = build_cone_radial((0.0, 0.0), g.t_max, g.n,
                          [np.full(g.n, 0.5), np.full(g.n, 1.0),
                           np.full(g.n, 2.0)])
    r = compatibility_report(p)
    assert r.foldable and len(r.pairs) == 0
    st = fold_pattern(p, r, 0.5)
    assert len(st.creases) == 1 and len(st.patches) == 2
    for patch in st.patches:
        patch.require_developable()


def test_sample_motion_single_step_is_midrange():
    p = fixtures.annulus(401)
    r = compatibility_report(p)
    m = sample_motion(p, r, 1)
    c1, _ = m.samples[0]
    assert abs(c1 - 0.5 * m.c1_range[1]) < 1e-9
