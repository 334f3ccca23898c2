import pytest

from qlambda.suites import FAIL, PASS, SKIP, SUITES, Check, SuiteResult, coverage, run_suite


class TestCoverage:
    def test_every_criterion_exercised(self):
        cov = coverage()
        assert sorted(cov) == list(range(1, 13))
        assert all(cov.values())

    def test_suite_names(self):
        assert set(SUITES) == {"paper-tables", "model-sets", "density-cases", "derivations", "qpoly",
                               "conjecture-17-2", "polygons"}


class TestSuiteResult:
    @pytest.mark.parametrize("statuses,code,crit", [
        ([PASS, PASS], 0, PASS),
        ([PASS, FAIL], 1, FAIL),
        ([SKIP, SKIP], 0, SKIP),
        ([SKIP, PASS], 0, PASS),
    ])
    def test_aggregation(self, statuses, code, crit):
        res = SuiteResult("x", [Check(f"c{i}", 3, s) for i, s in enumerate(statuses)])
        assert res.exit_code == code
        assert res.criteria() == {3: crit}
        assert res.to_json()["schema"] == "qlambda.suite/1"

    def test_unknown_suite(self):
        with pytest.raises(KeyError):
            run_suite("nope")


class TestFastSuites:
    @pytest.mark.parametrize("name", ["derivations", "qpoly"])
    def test_green(self, name):
        res = run_suite(name)
        assert res.exit_code == 0, [c.to_json() for c in res.checks if c.status == FAIL]

    def test_options_forwarded(self):
        res = run_suite("conjecture-17-2", max_lambda=5, max_depth=64)
        assert [c.id for c in res.checks] == [f"9.lambda-{n}" for n in range(2, 6)]
        assert res.exit_code == 0

    def test_threads_same_result(self):
        a = run_suite("derivations", threads=1)
        b = run_suite("derivations", threads=2)
        assert [c.to_json() for c in a.checks] == [c.to_json() for c in b.checks]
