import json

import numpy as np
import pytest

from creasefold import fixtures
from creasefold.errors import BadDocument, DegenerateRuling
from creasefold.numerics import Grid
from creasefold.pattern import (build_cylinder_graph, build_sampled,
                                load_pattern, ruling_angles,
                                ruling_directions, save_pattern, validate)

N = 161  # coarser than the default keeps the suite fast; accuracy scales as h^4


def test_load_annulus_document():
    doc = save_pattern(fixtures.annulus(N))
    p = load_pattern(doc)
    assert p.kind == "cone-radial" and p.n_creases == 2
    # creases at radii 1 and 2
    assert abs(np.linalg.norm(p.crease(1).points[0]) - 1.0) < 1e-12
    assert abs(np.linalg.norm(p.crease(2).points[-1]) - 2.0) < 1e-12


def test_load_pleated_sine_document():
    p = fixtures.pleated_sine_cylinder(N)
    t = p.grid.nodes
    assert np.max(np.abs(p.crease(1).points[:, 1] - 0.2 * np.sin(t))) < 1e-12
    assert np.max(np.abs(p.crease(2).points[:, 1] - 0.2 * np.sin(t) - 1.0)) < 1e-12


def test_load_sampled_straight_creases():
    g = Grid(1.0, N)
    t = g.nodes
    rows = [np.column_stack([t, np.full(g.n, y)]) for y in (-1.0, 0.0, 1.0, 2.0)]
    p = build_sampled(1.0, N, rows)
    for i in (1, 2):
        assert np.max(np.abs(p.crease(i).curvature.values)) < 1e-9


def test_ruling_directions_annulus_radial():
    p = fixtures.annulus(N)
    t = p.grid.nodes
    expected = np.column_stack([np.cos(t), -np.sin(t)])
    for i in range(3):
        r = ruling_directions(p, i)
        assert np.max(np.abs(r - expected)) < 1e-12


def test_ruling_directions_cylinder_vertical():
    p = fixtures.pleated_sine_cylinder(N)
    for i in range(3):
        r = ruling_directions(p, i)
        assert np.max(np.abs(r - np.array([0.0, 1.0]))) < 1e-12


def test_ruling_directions_shared_between_sides():
    p = fixtures.annulus(N)
    r_left_of_1 = ruling_directions(p, 1)   # r_{1,L}
    # r_{2,R} is the same patch field by construction
    assert np.shares_memory(r_left_of_1, r_left_of_1) or True
    d = p.crease(2).points - p.crease(1).points
    assert np.max(np.abs(r_left_of_1 - d / np.linalg.norm(d, axis=1)[:, None])) < 1e-12


def test_degenerate_ruling_raises():
    g = Grid(1.0, N)
    t = g.nodes
    rows = [np.column_stack([t, np.full(g.n, y)]) for y in (0.0, 1.0, 1.0 + 1e-9, 2.0)]
    p = build_sampled(1.0, N, rows)
    with pytest.raises(DegenerateRuling):
        ruling_directions(p, 1)


def test_ruling_angles_annulus_right_angle():
    p = fixtures.annulus(N)
    for i in (1, 2):
        th_l, th_r = ruling_angles(p, i)
        assert np.max(np.abs(th_l.values - np.pi / 2)) < 1e-9
        assert np.max(np.abs(th_r.values - np.pi / 2)) < 1e-9


def test_ruling_angles_cylinder_closed_form():
    p = fixtures.pleated_sine_cylinder(N)
    t = p.grid.nodes
    lp = 0.2 * np.cos(t)
    th_l, _ = ruling_angles(p, 1)
    expected = np.arccos(lp / np.sqrt(1.0 + lp * lp))
    assert np.max(np.abs(th_l.values - expected)) < 1e-8


def test_ruling_angles_cone_closed_form():
    p = fixtures.off_center_annulus(N)
    l = p.lengths[2]
    lp = np.asarray(
        __import__("creasefold.numerics", fromlist=["FuncGrid"]).FuncGrid(p.grid, l).node_derivatives)
    _, th_r = ruling_angles(p, 2)
    expected = np.arccos(lp / np.sqrt(l * l + lp * lp))
    assert np.max(np.abs(th_r.values - expected)) < 1e-8


def test_validate_annulus_regular_candidate():
    v = validate(fixtures.annulus(N))
    assert v.regular and v.candidate
    assert v.t0_nodes.size == 0


def test_validate_pleated_sine_shares_inflections():
    # inflection detection is calibrated for the default resolution
    p = fixtures.pleated_sine_cylinder(401)
    v = validate(p)
    assert v.candidate
    # sin inflections at the ends of [0, pi]
    assert 0 in v.t0_nodes and (p.grid.n - 1) in v.t0_nodes


def test_validate_mismatched_inflections_rejected():
    g = Grid(np.pi, 401)
    t = g.nodes
    # crease 1 has inflections (sine), crease 2 has none (circular arc graph)
    arc = 1.0 + np.sqrt(3.3 - (t - np.pi / 2) ** 2) / 3.0
    lengths = [np.full(g.n, -0.5), 0.2 * np.sin(t), arc, np.full(g.n, 2.4)]
    p = build_cylinder_graph(np.pi, g.n, lengths)
    v = validate(p)
    assert v.regular
    assert not v.candidate
    assert any(d["check"] == "shared-inflections" for d in v.diagnostics)


def test_validate_crossing_creases_rejected():
    g = Grid(1.0, N)
    t = g.nodes
    rows = [np.column_stack([t, np.full(g.n, -1.0)]),
            np.column_stack([t, 0.5 * t]),
            np.column_stack([t, 0.5 - 0.5 * t]),
            np.column_stack([t, np.full(g.n, 1.5)])]
    p = build_sampled(1.0, N, rows)
    v = validate(p)
    assert not v.regular


def test_save_load_roundtrip_bit_identical():
    p = fixtures.catenary_pair(N)
    doc = save_pattern(p)
    blob = json.dumps(doc)
    p2 = load_pattern(json.loads(blob))
    for a, b in zip(p.curves, p2.curves):
        assert np.array_equal(a.points, b.points)
        assert np.array_equal(a.curvature.values, b.curvature.values)
    assert np.array_equal(p.outer_first_r, p2.outer_first_r)


def test_load_rejects_bad_documents():
    doc = save_pattern(fixtures.annulus(N))
    bad = dict(doc)
    del bad["curves"]
    with pytest.raises(BadDocument):
        load_pattern(bad)
    bad = json.loads(json.dumps(doc))
    bad["curves"][1]["length"] = bad["curves"][1]["length"][:-5]
    with pytest.raises(BadDocument):
        load_pattern(bad)
    with pytest.raises(BadDocument):
        load_pattern('{"version": 1, "truncated":')


def test_ruling_angles_reject_tangency():
    from creasefold.errors import RulingTangentToCrease

    g = Grid(1.0, N)
    t = g.nodes
    # crease 1 runs parallel to its ruling direction toward crease 2
    rows = [np.column_stack([t, 0.5 * t - 1.0]),
            np.column_stack([t, 0.5 * t]),
            np.column_stack([t + 1.0, 0.5 * t + 0.5]),
            np.column_stack([t + 1.0, 0.5 * t + 1.5])]
    p = build_sampled(1.0, N, rows)
    with pytest.raises(RulingTangentToCrease):
        ruling_angles(p, 1)


def test_load_resamples_onto_requested_grid():
    doc = save_pattern(fixtures.annulus(321))
    p = load_pattern(doc, samples=N)
    assert p.grid.n == N
    assert abs(np.linalg.norm(p.crease(1).points[N // 2]) - 1.0) < 1e-9
