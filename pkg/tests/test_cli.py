import json
from importlib import resources

import pytest

from qlambda import __version__
from qlambda.cli import main
from qlambda.spv import SPV_NONTRIVIAL

C17 = ["--minpoly", "x^2+3x-2", "--root", "(-3.56,0)"]
GOLDEN = ["--minpoly", "[1,-3,1]", "--root", "2.618"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def data_path(name):
    return str(resources.files("qlambda.data").joinpath(name))


class TestBasics:
    def test_version(self, capsys):
        code, out, _ = run(capsys, "--version")
        assert code == 0 and __version__ in out

    def test_unknown_command(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2

    def test_config_line(self, capsys):
        code, _, err = run(capsys, "classify", *GOLDEN)
        assert code == 0
        line = next(l for l in err.splitlines() if l.startswith("# config "))
        assert json.loads(line[len("# config "):])["command"] == "classify"


class TestClassify:
    def test_json(self, capsys):
        code, out, _ = run(capsys, "classify", *C17)
        doc = json.loads(out)
        assert code == 0 and doc["schema"] == "qlambda.spv/1"
        assert doc["verdict"] == SPV_NONTRIVIAL and doc["k"] == 1 and doc["minpoly"] == [-2, 3, 1]

    def test_bad_polynomial(self, capsys):
        assert run(capsys, "classify", "--minpoly", "x^^2", "--root", "1")[0] == 2

    def test_reducible(self, capsys):
        assert run(capsys, "classify", "--minpoly", "x^2-1", "--root", "1")[0] == 2


class TestModelset:
    def test_radius_six(self, capsys):
        code, out, _ = run(capsys, "modelset", *GOLDEN, "--radius", "6")
        lines = out.strip().splitlines()
        assert code == 0 and lines[0] == "coords_0,coords_1,re,im" and len(lines) == 8

    def test_json_output_file(self, capsys, tmp_path):
        p = tmp_path / "pts.json"
        code, _, _ = run(capsys, "modelset", *GOLDEN, "--radius", "6", "--format", "json", "--out", str(p))
        assert code == 0 and json.loads(p.read_text())["schema"] == "qlambda.pointset/1"


class TestClosure:
    def test_rank(self, capsys):
        code, out, _ = run(capsys, "closure", *GOLDEN, "--rank", "2")
        assert code == 0 and out.startswith("coords_0,coords_1,re,im")

    def test_rank_and_radius_exclusive(self, capsys):
        assert run(capsys, "closure", *GOLDEN, "--rank", "2", "--radius", "5")[0] == 2

    def test_budget_writes_partial(self, capsys, tmp_path):
        p = tmp_path / "c.csv"
        code, _, err = run(capsys, "closure", *GOLDEN, "--rank", "9", "--max-points", "200", "--out", str(p))
        assert code == 3
        assert p.exists() and p.read_text().startswith("coords_0")


class TestDeriveReplay:
    def test_shipped_unit(self, capsys):
        code, out, _ = run(capsys, "replay", "--in", data_path("fundamental_unit_17.json"))
        assert code == 0 and out.strip() == "target = 9 - 16*lambda, VERIFIED"

    def test_derive_then_replay(self, capsys, tmp_path):
        p = tmp_path / "d.json"
        code, _, _ = run(capsys, "derive", *C17, "--target", "[9,-16]", "--out", str(p))
        assert code == 0
        code, out, _ = run(capsys, "replay", "--in", str(p))
        assert code == 0 and "VERIFIED" in out

    def test_tampered_replay_fails(self, capsys, tmp_path):
        doc = json.loads(open(data_path("fundamental_unit_17.json")).read())
        step = next(s for s in reversed(doc["steps"]) if s["op"] == "star")
        step["coords"][0] += 1
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "replay", "--in", str(p))
        assert code == 1 and out.startswith("FAILED")

    def test_not_a_document(self, capsys, tmp_path):
        p = tmp_path / "x.json"
        p.write_text("[1, 2")
        assert run(capsys, "replay", "--in", str(p))[0] == 2

    def test_budget_exit(self, capsys):
        code, _, _ = run(capsys, "derive", *C17, "--target", "[9,-16]", "--max-points", "5")
        assert code == 3


class TestOtherCommands:
    def test_qpoly_member(self, capsys):
        code, out, _ = run(capsys, "qpoly", "--poly", "2x-2x^2")
        assert code == 0 and json.loads(out)["member"] is True

    def test_qpoly_level(self, capsys):
        code, out, _ = run(capsys, "qpoly", "--level", "4")
        doc = json.loads(out)
        assert code == 0 and doc["count"] == doc["formula"] == 700

    def test_qpoly_needs_one_mode(self, capsys):
        assert run(capsys, "qpoly")[0] == 2

    def test_density(self, capsys):
        code, out, _ = run(capsys, "density", *C17, "--alpha", "[9,-16]")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"].startswith("qlambda.")

    def test_polygon_stats(self, capsys, tmp_path):
        svg = tmp_path / "p.svg"
        code, out, _ = run(capsys, "polygon", "--n", "5", "--radius", "6", "--stats", "--svg", str(svg))
        assert code == 0
        assert svg.read_text().startswith("<svg")


class TestVerify:
    def test_coverage(self, capsys):
        code, out, _ = run(capsys, "verify", "--coverage")
        doc = json.loads(out)
        assert code == 0 and doc["unexercised"] == []

    def test_unknown_suite(self, capsys):
        assert run(capsys, "verify", "--suite", "nope")[0] == 2

    def test_suite_report(self, capsys, tmp_path):
        p = tmp_path / "r.json"
        code, out, err = run(capsys, "--threads", "2", "verify", "--suite", "derivations", "--report", str(p))
        assert code == 0
        assert json.loads(p.read_text()) == json.loads(out)
        assert "PASS [ 6]" in err

    def test_failing_suite_exits_1(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "density-cases")
        doc = json.loads(out)
        assert code == 1 and doc["criteria"]["5"] == "fail" and doc["criteria"]["4"] == "pass"
