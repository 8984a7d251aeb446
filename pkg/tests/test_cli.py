import json
import os
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from creasefold.cli import main

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures")


def fixture(name):
    return os.path.join(FIXTURES, f"{name}.json")


def test_validate_annulus_ok(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["validate", fixture("annulus"), "--report", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["regular"] and payload["candidate"]


def test_validate_reports_offending_nodes(tmp_path):
    # mismatched inflections: sine crease against an arc crease
    from creasefold.numerics import Grid
    from creasefold.pattern import build_cylinder_graph, save_pattern

    g = Grid(np.pi, 401)
    t = g.nodes
    arc = 1.0 + np.sqrt(3.3 - (t - np.pi / 2) ** 2) / 3.0
    p = build_cylinder_graph(np.pi, g.n,
                             [np.full(g.n, -0.5), 0.2 * np.sin(t), arc,
                              np.full(g.n, 2.4)])
    path = tmp_path / "mismatch.json"
    save_pattern(p, str(path))
    out = tmp_path / "report.json"
    code = main(["validate", str(path), "--report", str(out)])
    assert code == 1
    payload = json.loads(out.read_text())
    assert not payload["candidate"]
    assert any("shared-inflections" in d["check"] for d in payload["failed_checks"])


def test_validate_truncated_file_is_io_error(tmp_path, capsys):
    bad = tmp_path / "broken.json"
    bad.write_text('{"version": 1, "t_max":')
    code = main(["validate", str(bad)])
    assert code == 2


def test_check_annulus_constants(tmp_path):
    out = tmp_path / "check.json"
    code = main(["check", fixture("annulus"), "--report", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["verdict"] == "rigid-ruling foldable"
    assert payload["pairs"][0]["c3"] == pytest.approx(1.0, abs=1e-8)
    assert payload["pairs"][0]["c4"] == pytest.approx(0.0, abs=1e-8)


def test_check_off_center_rejected(tmp_path):
    out = tmp_path / "check.json"
    code = main(["check", fixture("off-center-annulus"), "--report", str(out)])
    assert code == 1
    payload = json.loads(out.read_text())
    assert payload["pairs"][0]["resA"] > 0.05


def test_check_mixed_cylinder_explained(tmp_path):
    out = tmp_path / "check.json"
    code = main(["check", fixture("cylinder-mixed"), "--report", str(out)])
    assert code == 1
    payload = json.loads(out.read_text())
    assert any("cylinder" in d for d in payload["diagnostics"])


def test_fold_annulus_obj(tmp_path, capsys):
    out = tmp_path / "state.obj"
    code = main(["fold", fixture("annulus"), "--c1", "0.5", "--obj", str(out)])
    assert code == 0
    text = out.read_text()
    assert text.startswith("# creasefold")
    # crease-1 vertex ring sits at radius cos(pi/6) from its axis
    lines = text.splitlines()
    idx = lines.index("o crease_1")
    verts = []
    for line in lines[idx + 1:]:
        if line.startswith("v "):
            verts.append([float(x) for x in line.split()[1:]])
        elif line.startswith("o "):
            break
    verts = np.array(verts)
    # the first crease stays in the z = 0 plane of the canonical frame
    assert np.max(np.abs(verts[:, 2])) < 1e-8
    # algebraic circle fit in that plane
    A = np.column_stack([verts[:, 0], verts[:, 1], np.ones(len(verts))])
    b = -(verts[:, 0] ** 2 + verts[:, 1] ** 2)
    (D, E, F), *_ = np.linalg.lstsq(A, b, rcond=None)
    radius = np.sqrt((D * D + E * E) / 4.0 - F)
    assert radius == pytest.approx(np.cos(np.pi / 6), abs=1e-5)
    err = capsys.readouterr().err
    assert "ruling_match_residual" in err


def test_fold_obj_deterministic(tmp_path):
    a = tmp_path / "a.obj"
    b = tmp_path / "b.obj"
    main(["fold", fixture("annulus"), "--c1", "0.25", "--obj", str(a)])
    main(["fold", fixture("annulus"), "--c1", "0.25", "--obj", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_fold_trivial_state(tmp_path, capsys):
    code = main(["fold", fixture("annulus"), "--c1", "0.0",
                 "--obj", str(tmp_path / "x.obj")])
    assert code == 1
    assert "trivial state" in capsys.readouterr().err


def test_fold_fraction_catenary(tmp_path, capsys):
    out = tmp_path / "state.obj"
    code = main(["fold", fixture("catenary-pair"), "--fraction", "0.5",
                 "--obj", str(out)])
    assert code == 0
    assert "ruling_match_residual" in capsys.readouterr().err


def test_fold_out_of_range(tmp_path, capsys):
    code = main(["fold", fixture("pleated-sine-cylinder"), "--c1", "1.2",
                 "--obj", str(tmp_path / "x.obj")])
    assert code == 1
    assert "bound" in capsys.readouterr().err


def test_motion_frames_and_schedule(tmp_path):
    out = tmp_path / "frames"
    code = main(["motion", fixture("annulus"), "--steps", "5",
                 "--obj-dir", str(out)])
    assert code == 0
    schedule = json.loads((out / "motion.json").read_text())
    assert len(schedule["frames"]) == 5
    c1s = [f["c1"] for f in schedule["frames"]]
    assert all(np.diff(c1s) > 0)
    assert all(f["ruling_match_residual"] < 1e-5 for f in schedule["frames"])
    assert (out / "frame_000.obj").exists()


def test_motion_residuals_all_shipped_foldable_fixtures(tmp_path):
    for name in ("pleated-sine-cylinder", "catenary-pair", "cone-mixed-perp"):
        out = tmp_path / name
        assert main(["motion", fixture(name), "--steps", "3",
                     "--obj-dir", str(out)]) == 0
        schedule = json.loads((out / "motion.json").read_text())
        assert all(f["ruling_match_residual"] < 1e-5 for f in schedule["frames"])


def test_motion_rejects_incompatible(tmp_path):
    out = tmp_path / "frames"
    code = main(["motion", fixture("off-center-annulus"), "--steps", "3",
                 "--obj-dir", str(out)])
    assert code == 1
    assert not (out / "frame_000.obj").exists()


def test_append_cone_cli(tmp_path):
    # one-crease host from the annulus family
    from creasefold.numerics import Grid
    from creasefold.pattern import build_cone_radial, save_pattern

    g = Grid(np.pi / 2, 401)
    host = build_cone_radial((0.0, 0.0), g.t_max, g.n,
                             [np.full(g.n, 0.5), np.full(g.n, 1.0),
                              np.full(g.n, 2.0)])
    host_path = tmp_path / "host.json"
    save_pattern(host, str(host_path))
    out = tmp_path / "extended.json"
    code = main(["append", str(host_path), "--kind", "cone",
                 "--init", "2", "0", "0", "--out", str(out)])
    assert code == 0
    check_code = main(["check", str(out), "--report",
                       str(tmp_path / "rep.json")])
    assert check_code == 0
    code = main(["append", str(host_path), "--kind", "cone",
                 "--init", "0.8", "0", "0", "--out", str(out)])
    assert code == 1


def test_pleat_and_combescure_cli(tmp_path):
    out = tmp_path / "pleated.json"
    code = main(["pleat", fixture("pleated-sine-cylinder"),
                 "--crease-offset", "0.4", "--boundary-offset", "0.3",
                 "--out", str(out)])
    assert code == 0
    assert main(["check", str(out), "--report",
                 str(tmp_path / "rep.json")]) == 0

    out2 = tmp_path / "scaled.json"
    code = main(["combescure", fixture("annulus"), "--p0-scale", "2.0",
                 "--lengths", "1.0", "2.0", "1.0", "--out", str(out2)])
    assert code == 0
    rep = tmp_path / "rep2.json"
    assert main(["check", str(out2), "--report", str(rep)]) == 0
    payload = json.loads(rep.read_text())
    assert payload["pairs"][0]["c3"] == pytest.approx(1.0, abs=1e-6)


def test_plot_svg(tmp_path):
    out = tmp_path / "annulus.svg"
    code = main(["plot", fixture("annulus"), "--svg", str(out)])
    assert code == 0
    root = ET.fromstring(out.read_text())
    assert root.tag.endswith("svg")
    # bounding box tracks the pattern extents within 5% plus margin
    w = float(root.attrib["width"])
    h = float(root.attrib["height"])
    assert abs(w - 2.5 * 1.1) / 2.5 < 0.05 + 0.1
    assert abs(h - 2.5 * 1.1) / 2.5 < 0.05 + 0.1


def test_plot_straight_creases_dashed(tmp_path):
    from creasefold.numerics import Grid
    from creasefold.pattern import build_cylinder_graph, save_pattern

    g = Grid(1.0, 401)
    p = build_cylinder_graph(1.0, g.n,
                             [np.full(g.n, y) for y in (-1.0, 0.0, 1.0, 2.0)])
    path = tmp_path / "straight.json"
    save_pattern(p, str(path))
    out = tmp_path / "straight.svg"
    assert main(["plot", str(path), "--svg", str(out)]) == 0
    assert "stroke-dasharray" in out.read_text()


def test_samples_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("CREASE_SAMPLES", "201")
    from creasefold.cli import _samples_default

    assert _samples_default() == 201


def test_rejects_too_few_samples():
    assert main(["--samples", "8", "validate", fixture("annulus")]) == 2
