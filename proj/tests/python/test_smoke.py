import json
import math
import struct

import pytest

import diemap


def cube(size=10.0):
    v = [(0, 0, 0), (size, 0, 0), (size, size, 0), (0, size, 0),
         (0, 0, size), (size, 0, size), (size, size, size), (0, size, size)]
    quads = [(0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7)]
    tris = []
    for a, b, c, d in quads:
        tris.append([v[a], v[b], v[c]])
        tris.append([v[a], v[c], v[d]])
    return tris


def write_binary_stl(path, tris):
    with open(path, "wb") as f:
        f.write(b"\0" * 80)
        f.write(struct.pack("<I", len(tris)))
        for t in tris:
            f.write(struct.pack("<3f", 0, 0, 0))
            for p in t:
                f.write(struct.pack("<3f", *p))
            f.write(b"\0\0")


def test_version():
    assert diemap.__version__ == "0.1.0"


def test_classify_defaults():
    assert diemap.classify(1.0) == "Horizontal"
    assert diemap.classify(math.sin(math.radians(5))) == "Draft"
    assert diemap.classify(-0.5) == "Undercut"


def test_cube_report():
    report = diemap.analyze_triangles(cube())
    assert report["schema"] == "diemap.report"
    assert report["diagnostics"]["facets"] == 12
    kinds = sorted(f["kind"] for f in report["features"])
    assert kinds == ["Flank", "SimpleFloor"]
    assert report["diagnostics"]["undercut_facets"] == 2


def test_rules():
    flat = diemap.assign("SimpleFloor", horizontal_only=True)
    assert flat["tool"] == "EndMill" and flat["strategy"] == "Surfacing"
    core = diemap.assign("IndifferentFloor", contains_horizontal_core=True)
    assert core["tool"] == "CornerEndMill"
    assert ("BallEndMill", "too small effective cutting radius") in core["excluded_tools"]
    planes = diemap.assign("OrientedFloor", theta=0.5)
    assert planes["strategy"] == "ParallelPlanes" and planes["strategy_theta"] == pytest.approx(0.5)
    assert diemap.feature_kind("QuasiHorizontal", "Oriented", 0.2) == "OrientedFloor"
    assert diemap.feature_kind("Undercut", "Simple") is None


def test_file_run(tmp_path):
    stl = tmp_path / "cube.stl"
    write_binary_stl(stl, cube())
    report, written = diemap.run(stl, tmp_path / "out", export="speed")
    assert (tmp_path / "out" / "report.json").exists()
    assert (tmp_path / "out" / "speed_map.ply").exists()
    assert len(written) == 2
    assert json.loads((tmp_path / "out" / "report.json").read_text()) == report
    assert diemap.analyze(stl)["features"] == report["features"]


def test_errors(tmp_path):
    with pytest.raises(diemap.DiemapError, match="ConfigOverlap"):
        diemap.classify(0.5, {"band_qh": 0.95, "eps_h": 0.01})
    bad = tmp_path / "bad.stl"
    bad.write_bytes(b"\0" * 90)
    with pytest.raises(diemap.DiemapError, match="MalformedStl"):
        diemap.analyze(bad)
