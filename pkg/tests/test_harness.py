import json

import pytest

import curvelab.harness as H
from curvelab.geodesics import BudgetExceeded
from curvelab.harness import ExperimentPlan, report_constants, run_plan


def test_plan_validation():
    with pytest.raises(ValueError):
        ExperimentPlan("0,5", "lemma-9.9", 3, 1)
    p = ExperimentPlan("0,5", "lemma-2.6", 3, 1)
    d = p.to_dict()
    assert d["schema"] == 1 and d["config"]["k_tight"] == 800


def test_same_plan_same_bytes(tmp_path):
    plan = ExperimentPlan("0,5", "lemma-2.6", 6, 3)
    a = run_plan(plan, tmp_path / "a")
    b = run_plan(plan, tmp_path / "b", workers=2)
    name = "lemma-2.6_0_5.csv"
    assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert a.passed and b.passed
    header = (tmp_path / "a" / name).read_text().splitlines()[0].split(",")
    assert header[0] == "schema"
    summary = json.loads((tmp_path / "a" / "lemma-2.6_0_5.json").read_text())
    assert summary["schema"] == 1 and summary["plan"]["seed"] == 3


def test_rows_are_steps_times_samples():
    res = run_plan(ExperimentPlan("0,5", "lemma-2.6", 4, 1))
    # complexity two: one completion step, four ledger rows per step
    assert len(res.rows) == 4 * 4


def test_budget_exhaustion_does_not_abort(monkeypatch):
    real = H.SAMPLE_FN["lemma-2.6"]

    def flaky(plan, i):
        if i == 1:
            raise BudgetExceeded("search budget exhausted")
        return real(plan, i)

    monkeypatch.setitem(H.SAMPLE_FN, "lemma-2.6", flaky)
    res = run_plan(ExperimentPlan("0,5", "lemma-2.6", 3, 1))
    assert res.summary["sample_errors"] == [[1, "BudgetExceeded: search budget exhausted"]]
    assert res.summary["violations"] == 0 and len(res.rows) == 8


def test_report_constants():
    assert report_constants([]) == {"schema": 1, "empty": True}
    res = run_plan(ExperimentPlan("0,5", "lemma-2.7", 4, 1))
    out = report_constants([res])
    assert out["empty"] is False and "lemma-2.7:envelope_K" in out


def test_drift_statistic():
    assert H._drift([1.0, 2.0], [1.0, 2.0, 2.2]) == pytest.approx(0.2 / 2.2)
    assert H._drift([2.0], [2.0]) == 0.0


def test_backend_suite_counts():
    plan = ExperimentPlan("1,1", "backend-agreement", 0, 1)
    assert H.sample_count(plan) == len(H._slopes())


def test_run_suite_writes_versioned_files(tmp_path):
    res, paths = H.run_suite(ExperimentPlan("0,5", "lemma-2.6", 2, 5), tmp_path)
    assert [p.name for p in paths] == ["lemma-2.6_0_5.csv", "lemma-2.6_0_5.json"]
    assert all(p.exists() for p in paths)
    assert paths[0].read_text().startswith("schema,")
