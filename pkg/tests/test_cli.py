import csv
import json

import pytest

from gconvex import classify, cli
from gconvex.classify import assemble_fan
from gconvex.datum import DatumD
from gconvex.fan import coordinate_fan


@pytest.fixture
def octant_file(tmp_path):
    p = tmp_path / "oct.json"
    p.write_text(coordinate_fan(3).to_json())
    return p


@pytest.fixture
def host_file(tmp_path):
    p = tmp_path / "host.json"
    p.write_text(json.dumps({"fan": assemble_fan(DatumD.parse("121 211 000 000 121 120")).to_dict()}))
    return p


def test_check_ok(octant_file, capsys):
    assert cli.main(["check", str(octant_file)]) == cli.EXIT_OK
    assert "all checks pass" in capsys.readouterr().out


def test_check_json(octant_file, capsys):
    assert cli.main(["check", str(octant_file), "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["ok"] and rep["flags"]["reflexive"]


def test_check_invalid_fan(tmp_path, capsys):
    f = coordinate_fan(3)
    p = tmp_path / "cut.json"
    p.write_text(json.dumps({"rays": f.to_dict()["rays"], "max_cones": f.to_dict()["max_cones"][:-1]}))
    assert cli.main(["check", str(p)]) == cli.EXIT_VALIDATION
    assert "complete failed" in capsys.readouterr().out


def test_check_structural_error(tmp_path, capsys):
    p = tmp_path / "dup.json"
    p.write_text(json.dumps({"rays": [[1, 0], [1, 0]], "max_cones": [[0, 1]]}))
    assert cli.main(["check", str(p)]) == cli.EXIT_VALIDATION


def test_malformed_json_reports_position(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"rays": [\n  [1, 0,\n}')
    assert cli.main(["check", str(p)]) == cli.EXIT_PARSE
    err = capsys.readouterr().err
    assert f"{p}:3:1" in err


def test_wrong_shape(tmp_path):
    p = tmp_path / "list.json"
    p.write_text("[1, 2]")
    assert cli.main(["check", str(p)]) == cli.EXIT_PARSE


def test_missing_file(tmp_path):
    assert cli.main(["check", str(tmp_path / "nope.json")]) == cli.EXIT_IO


def test_orthant(capsys, tmp_path):
    svg = tmp_path / "d5.svg"
    assert cli.main(["orthant", "111", "120", "--svg", str(svg)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["id"] == "d5" and len(doc["rays"]) == 6
    assert svg.read_text().startswith("<svg")


def test_orthant_mirrored_and_h13(capsys):
    assert cli.main(["orthant", "110", "121", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["id"] == "d10_1'"


def test_orthant_rejects(capsys):
    assert cli.main(["orthant", "110", "110"]) == cli.EXIT_VALIDATION
    assert cli.main(["orthant", "221", "110"]) == cli.EXIT_PARSE


def test_reduce(host_file, capsys):
    assert cli.main(["reduce", str(host_file), "1", "-2", "0"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["templates"] == ["i", "i'"]
    assert len(doc["fan"]["max_cones"]) == 4
    step = doc["paths"][1]["steps"][0]
    assert step["exchanged"] == [1, -1, 0] and (step["a"], step["b"]) == (0, 1)


def test_reduce_comma_ray(octant_file, capsys):
    assert cli.main(["reduce", str(octant_file), "0,0,1"]) == 0


def test_reduce_errors(octant_file):
    assert cli.main(["reduce", str(octant_file), "5", "5", "5"]) == cli.EXIT_VALIDATION
    assert cli.main(["reduce", str(octant_file), "a", "b", "c"]) == cli.EXIT_PARSE


def test_catalog_export(tmp_path):
    assert cli.main(["catalog-export", "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "catalog.json").read_text())
    assert "d13" in data["fragments"]
    raw = (tmp_path / "catalog.json").read_bytes()
    assert b"\r\n" not in raw and raw.endswith(b"\n")


def test_render(tmp_path, octant_file, capsys):
    out = tmp_path / "x.svg"
    assert cli.main(["render", "d10_1'", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.count(": (") == 6
    assert cli.main(["render", str(octant_file)]) == 0
    assert "<svg" in capsys.readouterr().out
    assert cli.main(["render", "nonsense"]) == cli.EXIT_PARSE


def test_render_rank2(tmp_path):
    p = tmp_path / "r2.json"
    p.write_text(coordinate_fan(2).to_json())
    assert cli.main(["render", str(p)]) == cli.EXIT_VALIDATION


def test_enumerate_rank2(tmp_path, capsys):
    assert cli.main(["enumerate", "--rank", "2", "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "rank2_report.json").read_text())
    assert data["fan_count"] == 16 and data["class_count"] == 7


def test_enumerate_rank3(tmp_path, monkeypatch, rank3, capsys):
    monkeypatch.setattr(classify, "enumerate_rank3", lambda jobs, analyze: rank3)
    assert cli.main(["enumerate", "--out", str(tmp_path), "--jobs", "1"]) == 0
    data = json.loads((tmp_path / "rank3_report.json").read_text())
    assert data["candidate_orbits"] == 66 and data["realizable"] == 61
    assert sum(data["reduction_templates"].values()) == sum(len(c.fan.rays) for c in rank3.realizable)
    with open(tmp_path / "rank3_summary.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["datum", "ray_count", "cone_count", "realizable"]
    assert len(rows) == 67
    assert not (tmp_path / "count_diff.json").exists()


def test_enumerate_count_mismatch(tmp_path, monkeypatch, rank3):
    broken = classify.ClassificationReport(
        rank3.admissible_count, rank3.candidates[:-1], rank3.datum_orbits, rank3.fan_classes,
        rank3.orbit_injective, rank3.excluded_match,
    )
    monkeypatch.setattr(classify, "enumerate_rank3", lambda jobs, analyze: broken)
    assert cli.main(["enumerate", "--out", str(tmp_path)]) == cli.EXIT_COUNT
    diff = json.loads((tmp_path / "count_diff.json").read_text())
    assert diff["candidate_orbits"] == [66, 65]


def test_bad_jobs_env(monkeypatch, tmp_path):
    monkeypatch.setenv("GFAN_JOBS", "many")
    assert cli.main(["enumerate", "--rank", "2", "--out", str(tmp_path)]) == cli.EXIT_PARSE


def test_unwritable_output(tmp_path):
    target = tmp_path / "file"
    target.write_text("")
    assert cli.main(["catalog-export", "--out", str(target / "sub")]) == cli.EXIT_IO
