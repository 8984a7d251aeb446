import numpy as np
import pytest

from creasefold import fixtures
from creasefold.compatibility import classify_crease, compatibility_report
from creasefold.curves import analyze_curve_2d, parallel_frame_check
from creasefold.errors import RulingParallelToTarget, TransformDegenerate
from creasefold.numerics import FuncGrid, Grid
from creasefold.pattern import ruling_angles, ruling_directions
from creasefold.transform import (ParallelCurveProblem, add_parallel_pleat,
                                  combescure_transform, parallel_curve_on_patch)


def test_parallel_curve_cylinder_closed_form():
    # host x = (t, 0) with vertical rulings; target tangents from (t, 0.2 sin t):
    # r' = 0 gives a = 0, b = 0.2 cos t, so l = 1 + 0.2 sin t
    g = Grid(np.pi, 401)
    t = g.nodes
    host = analyze_curve_2d(np.column_stack([t, np.zeros(g.n)]), g)
    target = analyze_curve_2d(np.column_stack([t, 0.2 * np.sin(t)]), g)
    rulings = np.tile([0.0, 1.0], (g.n, 1))
    sol = parallel_curve_on_patch(ParallelCurveProblem(
        host, rulings, target.tangents, 1.0))
    assert np.max(np.abs(sol.length.values - (1.0 + 0.2 * np.sin(t)))) < 1e-9
    chk = parallel_frame_check(sol.curve, target)
    assert chk.max_angle < 1e-6
    assert chk.max_product_residual < 1e-6


def test_parallel_curve_zero_offset_reproduces_directrix():
    p = fixtures.annulus(401)
    crease = p.crease(1)
    sol = parallel_curve_on_patch(ParallelCurveProblem(
        crease, ruling_directions(p, 1), crease.tangents, 0.0))
    assert np.max(np.abs(sol.length.values)) < 1e-12
    assert np.max(np.linalg.norm(sol.curve.points - crease.points, axis=1)) < 1e-12


def test_parallel_curve_cone_concentric():
    p = fixtures.annulus(401)
    crease = p.crease(1)
    target = p.crease(2)  # concentric circle: same tangent field
    sol = parallel_curve_on_patch(ParallelCurveProblem(
        crease, ruling_directions(p, 1), target.tangents, 0.7))
    assert np.max(np.abs(sol.length.values - 0.7)) < 1e-10


def test_parallel_curve_warns_when_leaving_extent():
    g = Grid(np.pi, 401)
    t = g.nodes
    host = analyze_curve_2d(np.column_stack([t, np.zeros(g.n)]), g)
    target = analyze_curve_2d(np.column_stack([t, 0.2 * np.sin(t)]), g)
    rulings = np.tile([0.0, 1.0], (g.n, 1))
    from creasefold.errors import OutOfExtentWarning

    with pytest.warns(OutOfExtentWarning):
        parallel_curve_on_patch(ParallelCurveProblem(
            host, rulings, target.tangents, 1.0,
            u_min=np.zeros(g.n), u_max=np.full(g.n, 1.1)))


def test_parallel_curve_rejects_tangential_rulings():
    g = Grid(np.pi, 401)
    t = g.nodes
    host = analyze_curve_2d(np.column_stack([t, np.zeros(g.n)]), g)
    rulings = np.tile([1.0, 0.0], (g.n, 1))  # parallel to the target tangents
    with pytest.raises(RulingParallelToTarget):
        parallel_curve_on_patch(ParallelCurveProblem(
            host, rulings, host.tangents, 1.0))


def test_combescure_identity():
    p = fixtures.annulus(401)
    q = combescure_transform(p)
    for a, b in zip(p.curves, q.curves):
        assert np.max(np.linalg.norm(a.points - b.points, axis=1)) < 1e-9


def test_combescure_uniform_scale_annulus():
    p = fixtures.annulus(401)
    lengths = [2.0 * np.linalg.norm(p.curves[i + 1].points[0] - p.curves[i].points[0])
               for i in range(p.n_patches)]
    q = combescure_transform(p, FuncGrid.constant(p.grid, 2.0), lengths)
    # doubling homothety centered at the anchor x_0(0)
    c = p.curves[0].points[0]
    for a, b in zip(p.curves, q.curves):
        assert np.max(np.linalg.norm(b.points - (c + 2.0 * (a.points - c)),
                                     axis=1)) < 1e-9
    r = compatibility_report(q)
    assert r.foldable
    assert r.pairs[0].c3 == pytest.approx(1.0, abs=1e-6)
    assert r.pairs[0].c4 == pytest.approx(0.0, abs=1e-6)


def test_combescure_preserves_verdict_and_constants():
    rng = np.random.default_rng(11)
    for name in ("annulus", "pleated-sine-cylinder", "catenary-pair"):
        p = fixtures.BUILDERS[name](401)
        base = compatibility_report(p)
        t = p.grid.nodes
        p0 = FuncGrid(p.grid, 1.0 + 0.2 * rng.uniform(-1, 1)
                      * np.sin(t + rng.uniform(0, np.pi)))
        q = combescure_transform(p, p0)
        rep = compatibility_report(q)
        assert rep.verdict == base.verdict
        for a, b in zip(rep.pairs, base.pairs):
            assert a.c3 == pytest.approx(b.c3, abs=1e-5)
            assert a.c4 == pytest.approx(b.c4, abs=1e-5)
        for ca, cb in zip(rep.classifications, base.classifications):
            assert (ca.planar, ca.constant_fold) == (cb.planar, cb.constant_fold)


def test_combescure_parallel_frames():
    p = fixtures.pleated_sine_cylinder(401)
    q = combescure_transform(p, FuncGrid.from_callable(p.grid,
                                                       lambda t: 1.0 + 0.1 * np.cos(t)))
    for a, b in zip(p.curves, q.curves):
        chk = parallel_frame_check(a, b)
        assert chk.max_angle < 1e-6
        assert chk.max_product_residual < 1e-6


def test_combescure_rejects_bad_input():
    p = fixtures.annulus(401)
    with pytest.raises(TransformDegenerate):
        combescure_transform(p, FuncGrid.constant(p.grid, -1.0))
    with pytest.raises(TransformDegenerate):
        combescure_transform(p, None, [1.0, -0.5, 1.0])


def test_pleat_cylinder_vertical_translation():
    p = fixtures.pleated_sine_cylinder(401)
    q = add_parallel_pleat(p, 0.4, 0.3)
    assert q.n_creases == 3
    new = q.crease(3)
    expected = p.crease(2).points + np.array([0.0, 0.4])
    assert np.max(np.linalg.norm(new.points - expected, axis=1)) < 1e-9


def test_pleat_annulus_radial_circle():
    p = fixtures.annulus(401)
    q = add_parallel_pleat(p, 1.0, 0.5)
    radii = np.linalg.norm(q.crease(3).points, axis=1)
    # radial transport of circles: new crease is the circle at radius 3
    assert np.max(np.abs(radii - 3.0)) < 1e-9


def test_pleat_swaps_ruling_angles():
    p = fixtures.catenary_pair(401)
    th2_l, th2_r = ruling_angles(p, 2)
    q = add_parallel_pleat(p, 0.2, 0.2)
    th3_l, th3_r = ruling_angles(q, 3)
    assert np.max(np.abs(th3_l.values - th2_r.values)) < 1e-9
    assert np.max(np.abs(th3_r.values - th2_l.values)) < 1e-7


def test_pleat_preserves_class_and_foldability():
    for name in ("annulus", "pleated-sine-cylinder", "catenary-pair"):
        p = fixtures.BUILDERS[name](401)
        cls_last = classify_crease(p, p.n_creases)
        q = add_parallel_pleat(p, 0.3, 0.25)
        rep = compatibility_report(q)
        assert rep.foldable, name
        cls_new = rep.classifications[-1]
        assert cls_new.planar == cls_last.planar
        assert cls_new.constant_fold == cls_last.constant_fold


def test_pleat_parallel_frames_and_products():
    p = fixtures.catenary_pair(401)
    q = add_parallel_pleat(p, 0.3, 0.25)
    chk = parallel_frame_check(p.crease(2), q.crease(3))
    assert chk.max_angle < 1e-6
    assert chk.max_product_residual < 1e-6
