import csv
import io
import json
import os

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qlambda import io as qio
from qlambda.modelset import ModelSetSpec, enumerate_radius


class TestCsv:
    def test_header_and_rows(self, golden):
        pts = enumerate_radius(ModelSetSpec.unit(golden), 6)
        text = qio.points_csv(pts)
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["coords_0", "coords_1", "re", "im"]
        assert len(rows) == 1 + len(pts)
        for row in rows[1:]:
            x = golden.element([int(row[0]), int(row[1])])
            assert float(row[2]) == x.shadow().real
            assert float(row[3]) == 0.0

    def test_order_independent(self, golden):
        pts = list(enumerate_radius(ModelSetSpec.unit(golden), 10))
        assert qio.points_csv(pts) == qio.points_csv(list(reversed(pts)))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            qio.points_csv([])
        with pytest.raises(ValueError):
            qio.points_json([])

    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_fmt17_round_trips(self, x):
        assert float(qio.fmt17(x)) == x or (x == 0 and qio.fmt17(x) == "0")

    def test_negative_zero(self):
        assert qio.fmt17(-0.0) == "0"


class TestJson:
    def test_schema_and_meta(self, golden):
        pts = enumerate_radius(ModelSetSpec.unit(golden), 6)
        doc = json.loads(qio.emit(pts, "json", radius=6))
        assert doc["schema"] == "qlambda.pointset/1"
        assert doc["minpoly"] == [1, -3, 1] and doc["radius"] == 6
        assert len(doc["points"]) == 7

    def test_unknown_format(self, golden):
        with pytest.raises(ValueError):
            qio.emit([golden.one()], "xml")


class TestAtomicWrite:
    def test_byte_identical_reruns(self, golden, tmp_path):
        pts = enumerate_radius(ModelSetSpec.unit(golden), 12)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        qio.emit(pts, "csv", a)
        qio.emit(pts, "csv", b)
        assert a.read_bytes() == b.read_bytes()

    def test_no_partial_file_on_error(self, tmp_path, monkeypatch):
        target = tmp_path / "out.txt"
        target.write_text("old")

        def boom(src, dst):
            raise OSError("disk full")

        monkeypatch.setattr(os, "replace", boom)
        with pytest.raises(OSError):
            qio.write_atomic(target, "new")
        assert target.read_text() == "old"
        assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]

    def test_creates_parent(self, tmp_path):
        p = qio.write_atomic(tmp_path / "sub" / "x.json", "{}\n")
        assert p.read_text() == "{}\n"
