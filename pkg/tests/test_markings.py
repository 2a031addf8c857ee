import csv
import io

import pytest

from curvelab.curves import CurveError, random_filling_pair, slope_curve, twist_generators
from curvelab.intersection import intersection_number
from curvelab.markings import i_sum, marking_from_pair, pants_completion
from curvelab.surface import make_surface


def _is_pants(P, xi):
    cs = list(P)
    return len(cs) == xi and all(intersection_number(a, b) == 0 for a in cs for b in cs)


@pytest.mark.parametrize("surface", ["0,5", "1,2"])
def test_completion_ledger_and_pants(surface, request):
    pairs = request.getfixturevalue("filling_05" if surface == "0,5" else "filling_12")
    for x, y in pairs:
        sp, tp, trace = pants_completion(x, y)
        assert trace.ledger.ok, trace.ledger.failures()
        assert x in sp and y in tp
        xi = x.surface.complexity
        assert _is_pants(sp, xi) and _is_pants(tp, xi)
        # the growth step is the sum of the three sub-bounds
        I = intersection_number(x, y)
        for X, Y, X2, Y2 in zip(trace.xs, trace.ys, trace.xs[1:], trace.ys[1:]):
            assert i_sum(X2, Y2) <= 9 * i_sum(X, Y) + 4 * I


@pytest.mark.parametrize("surface", ["0,5", "1,2"])
def test_markings_fill_and_ledger_holds(surface, request):
    pairs = request.getfixturevalue("filling_05" if surface == "0,5" else "filling_12")
    for x, y in pairs:
        res = marking_from_pair(x, y)
        assert res.ok
        assert res.transversal_ledger.ok, res.transversal_ledger.failures()
        for a, t in res.sigma.transversals:
            assert intersection_number(a, t) > 0
            assert all(intersection_number(b, t) == 0 for b in res.sigma.pants if b != a)
        assert res.i_markings == i_sum(res.sigma.curves, res.tau.curves)


def test_ledger_rows_are_csv_ready(filling_05):
    x, y = filling_05[0]
    res = marking_from_pair(x, y)
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["step", "lhs", "rhs", "slack"])
    w.writerows(res.ledger_rows())
    rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
    assert rows and all(int(r["rhs"]) - int(r["lhs"]) == int(r["slack"]) for r in rows)
    assert res.to_dict()["schema"] == 1


def test_rejects_non_filling_and_low_complexity(s05):
    g = twist_generators(s05)
    with pytest.raises(CurveError):
        pants_completion(g[0], g[0])
    S = make_surface(1, 1)
    with pytest.raises(CurveError):
        pants_completion(slope_curve(S, 1, 0), slope_curve(S, 0, 1))


def test_random_pairs_on_twice_punctured_torus():
    for seed in (10, 11, 12):
        x, y = random_filling_pair(make_surface(1, 2), seed, 4)
        assert marking_from_pair(x, y).ok
