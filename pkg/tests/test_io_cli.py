import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from tripods import io
from tripods.cli import main
from tripods.curves import SupportCurve
from tripods.polygons import RegularPolygon


def write_spec(tmp_path, name, spec):
    p = tmp_path / name
    p.write_text(json.dumps(spec))
    return str(p)


WAVY = {"kind": "support_fourier", "rotation_index": 1, "a0": 1.0, "cos": [0, 0, 0.1]}
HYP = {"kind": "disk_radial", "base_radius": 0.5, "cos": [0, 0.02]}


# -- spec parsing --------------------------------------------------------------


def test_parse_support_fourier():
    kind, obj = io.parse_curve_spec(WAVY)
    assert kind == "support_fourier"
    assert isinstance(obj, SupportCurve)
    assert obj.rotation_index == 1


def test_parse_polygon():
    kind, obj = io.parse_curve_spec({"kind": "regular_polygon", "n": 6})
    assert isinstance(obj, RegularPolygon)
    assert obj.n == 6


def test_parse_errors_are_field_precise():
    with pytest.raises(io.SpecError, match=r"\$\.kind"):
        io.parse_curve_spec({"kind": "nope"})
    with pytest.raises(io.SpecError, match=r"\$\.a0: missing"):
        io.parse_curve_spec({"kind": "support_fourier"})
    with pytest.raises(io.SpecError, match=r"\$\.cos\[1\]"):
        io.parse_curve_spec({"kind": "support_fourier", "a0": 1.0, "cos": [0.1, "x"]})
    with pytest.raises(io.SpecError, match=r"\$\.y: length"):
        io.parse_curve_spec({"kind": "parametric_samples", "x": [0.0] * 64, "y": [0.0] * 63})
    with pytest.raises(io.SpecError, match=r"\$\.n"):
        io.parse_curve_spec({"kind": "regular_polygon", "n": 2})
    # convexity violations surface with the offending parameter
    with pytest.raises(io.SpecError, match="alpha"):
        io.parse_curve_spec({"kind": "support_fourier", "a0": 1.0, "cos": [0.0, 0.5]})


def test_spec_json_line_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"kind": "support_fourier",\n  "a0": }\n')
    with pytest.raises(io.SpecError, match=r"bad\.json:2:"):
        io.load_curve_spec(str(p))


# -- CLI ------------------------------------------------------------------------


def test_cli_count_classes(capsys):
    assert main(["count-classes", "--n", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["classes"] == 1
    assert doc["bound"] == 2
    assert doc["representatives"] == [[0, 1, 2]]


def test_cli_find_tripods_circle(tmp_path, capsys):
    spec = write_spec(tmp_path, "circle.json", {"kind": "support_fourier", "a0": 1.0})
    assert main(["find-tripods", spec]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["continuum"] is True
    assert doc["delta_curve"] is True


def test_cli_find_tripods_wavy_and_recertify(tmp_path, capsys):
    spec = write_spec(tmp_path, "wavy.json", WAVY)
    assert main(["find-tripods", spec]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["count"] == 2
    ok, worst = io.recertify(doc)
    assert ok, f"recertification drift {worst}"
    # full JSON round trip preserves the document exactly
    doc2 = json.loads(io.dumps(doc))
    assert doc2 == io.jsonable(doc)


def test_cli_determinism(tmp_path, capsys):
    spec = write_spec(tmp_path, "wavy.json", WAVY)
    main(["find-tripods", spec])
    first = capsys.readouterr().out
    main(["find-tripods", spec])
    second = capsys.readouterr().out
    assert first == second


def test_cli_polygon(capsys):
    assert main(["polygon", "--n", "6"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["count"] == 2
    assert doc["expected"] == 2


def test_cli_minors(capsys):
    assert main(["minors", "--R", "0.5", "--case", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"] is True


def test_cli_input_errors(tmp_path, capsys):
    assert main(["find-tripods", str(tmp_path / "missing.json")]) == 1
    bad = write_spec(tmp_path, "bad.json", {"kind": "unknown"})
    assert main(["find-tripods", bad]) == 1
    assert main(["nonsense-command"]) == 1
    spec = write_spec(tmp_path, "wavy.json", WAVY)
    assert main(["triple-normal", spec, "--theta", "1,2"]) == 1


def test_cli_certification_exit_code(tmp_path, capsys):
    # a doctored document with an out-of-bounds residual must exit 2
    spec = write_spec(tmp_path, "wavy.json", WAVY)
    main(["find-tripods", spec])
    doc = json.loads(capsys.readouterr().out)
    doc["configurations"][0]["concurrency_residual"] = 1.0
    assert not io.certification_ok(doc)


def test_cli_triple_normal(tmp_path, capsys):
    spec = write_spec(tmp_path, "wavy.json", WAVY)
    theta = f"{2*np.pi/3},{2*np.pi/3},{2*np.pi/3}"
    assert main(["triple-normal", spec, "--theta", theta]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["count"] >= 1
    cfg = doc["configurations"][0]
    assert cfg["tangency_residual"] < 1e-6
    assert max(abs(a - 2 * np.pi / 3) for a in cfg["achieved_angles"]) < 1e-7


def test_cli_diameters(tmp_path, capsys):
    pts = np.linspace(0, 2 * np.pi, 512, endpoint=False)
    spec = write_spec(
        tmp_path,
        "ellipse.json",
        {
            "kind": "parametric_samples",
            "x": (2 * np.cos(pts)).tolist(),
            "y": np.sin(pts).tolist(),
        },
    )
    assert main(["diameters", spec]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["count"] == 2
    assert doc["orientation_counts"] == {"positive": 1, "negative": 1}


def test_cli_morse_and_render(tmp_path, capsys):
    spec = write_spec(tmp_path, "hyp.json", HYP)
    out = str(tmp_path / "morse.json")
    assert main(["morse", spec, "-o", out]) == 0
    doc = json.loads(open(out).read())
    assert doc["bookkeeping"]["passed"] is True
    assert doc["count"] >= 2
    ok, _ = io.recertify(doc)
    assert ok
    svg_path = str(tmp_path / "morse.svg")
    assert main(["render", out, "-o", svg_path]) == 0
    tree = ET.parse(svg_path)
    root = tree.getroot()
    assert root.tag.endswith("svg")
    assert root.get("viewBox") == "0 0 1000 1000"
    body = open(svg_path).read()
    assert "circle" in body  # tripod points and the disk boundary
    assert "polyline" in body  # normal geodesics


def test_cli_render_euclidean(tmp_path, capsys):
    spec = write_spec(tmp_path, "wavy.json", WAVY)
    out = str(tmp_path / "res.json")
    main(["find-tripods", spec, "-o", out])
    svg_path = str(tmp_path / "res.svg")
    assert main(["render", out, "-o", svg_path]) == 0
    ET.parse(svg_path)  # well-formed XML


def test_cli_find_tripods_polygon_spec(tmp_path, capsys):
    spec = write_spec(tmp_path, "hex.json", {"kind": "regular_polygon", "n": 6})
    assert main(["find-tripods", spec]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["count"] == 2


def test_thread_cap_is_deterministic(tmp_path, monkeypatch):
    from tripods.morse import find_interior_critical_points
    from tripods.curves import disk_radial_curve

    c = disk_radial_curve(0.5, [0.0, 0.02])
    monkeypatch.delenv("TRIPOD_THREADS", raising=False)
    base = find_interior_critical_points(c, starts=12)
    monkeypatch.setenv("TRIPOD_THREADS", "3")
    threaded = find_interior_critical_points(c, starts=12)

    def canon(res):
        return sorted(
            tuple(np.round(cp.location.feet_params, 8)) + tuple(np.round(cp.location.p, 8))
            for cp in res.critical_points
        )

    assert canon(base) == canon(threaded)


def test_jsonable_types():
    doc = io.jsonable(
        {"a": np.float64(1.5), "b": np.bool_(True), "c": np.int64(3), "d": np.arange(3)}
    )
    assert doc == {"a": 1.5, "b": True, "c": 3, "d": [0, 1, 2]}
    assert isinstance(doc["b"], bool)
