import csv
import io
import json

import pytest

from curvelab.cli import main
from curvelab.curves import Multicurve, random_filling_pair, twist_generators
from curvelab.projection import Subsurface
from curvelab.surface import make_surface


def run(capsys, *argv):
    rc = main(list(argv))
    return rc, capsys.readouterr().out


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    x, y = random_filling_pair(make_surface(0, 5), 2, 3)
    c = twist_generators(x.tri)[0]
    (d / "x.json").write_text(x.to_json())
    (d / "y.json").write_text(y.to_json())
    (d / "Z.json").write_text(json.dumps(Subsurface.complement(Multicurve([c])).to_dict()))
    (d / "A.json").write_text(json.dumps(Subsurface.annulus(c).to_dict()))
    return d


def test_intersect_slopes(capsys):
    assert run(capsys, "intersect", "1/2", "3/1") == (0, "5\n")
    assert run(capsys, "intersect", "1/0", "1/2", "--surface", "0,4") == (0, "4\n")


def test_intersect_json_and_diagram(capsys, files):
    rc, out = run(capsys, "intersect", str(files / "x.json"), str(files / "y.json"))
    I = int(out)
    rc, out = run(capsys, "intersect", str(files / "x.json"), str(files / "y.json"), "--diagram")
    assert rc == 0 and len(json.loads(out)["crossings"]) == I


def test_project_and_projdist(capsys, files):
    rc, out = run(capsys, "project", "--domain", str(files / "Z.json"), str(files / "y.json"))
    d = json.loads(out)
    assert rc == 0 and d["meets"] and d["curves"]
    for dom in ("Z.json", "A.json"):
        rc, out = run(capsys, "projdist", str(files / "x.json"), str(files / "y.json"),
                      "--domain", str(files / dom))
        d = json.loads(out)
        assert rc == 0 and (d["distance"] is None) == (not d["defined"])


def test_marking_ledger(capsys, files, tmp_path):
    led = tmp_path / "ledger.csv"
    rc, out = run(capsys, "marking", str(files / "x.json"), str(files / "y.json"), "--ledger", str(led))
    assert rc == 0 and json.loads(out)["schema"] == 1
    rows = list(csv.reader(io.StringIO(led.read_text())))
    assert rows[0] == ["step", "lhs", "rhs", "slack"] and len(rows) > 1


def test_distance_and_tight(capsys, files):
    rc, out = run(capsys, "distance", str(files / "x.json"), str(files / "y.json"))
    d = json.loads(out)["value"]
    rc, out = run(capsys, "tight", str(files / "x.json"), str(files / "y.json"), "--R", "4", "--budget", "1e7")
    rec = json.loads(out)
    assert rc == 0 and rec["d"] == d and len(rec["V"]) == d + 1


def test_formula_sum(capsys, files):
    rc, out = run(capsys, "formula-sum", str(files / "x.json"), str(files / "y.json"), "--n", "6", "--limit", "50")
    d = json.loads(out)
    assert rc == 0 and d["n"] == 6 and d["caveat"]["complete"] is False


def test_run_writes_reports(capsys, tmp_path):
    rc, out = run(capsys, "run", "--suite", "lemma-2.6", "--surface", "0,5", "--samples", "3",
                  "--seed", "7", "--out", str(tmp_path))
    assert rc == 0 and "lemma-2.6 0,5: pass" in out
    assert (tmp_path / "lemma-2.6_0_5.csv").exists() and (tmp_path / "constants.json").exists()


def test_verify_fails_on_too_few_samples(capsys, tmp_path):
    # the ratio suites demand at least 200 samples, so a 1-sample run must exit nonzero
    out_csv = tmp_path / "v.csv"
    rc, out = run(capsys, "verify", "1.3", "--samples", "1", "--seed", "1", "--csv", str(out_csv))
    assert rc == 1 and json.loads(out)["suite"] == "thm-1.3"
    assert out_csv.read_text().startswith("schema,")


def test_bad_input_is_a_clean_error(capsys):
    assert main(["intersect", "2/4", "1/0"]) == 2
    assert "error" in capsys.readouterr().err
