import math

import pytest
from hypothesis import given, settings, strategies as st

from curvelab.formula import (ConstantsConfig, bounded_slopes, consecutive_block, cor_1_6_exceptions_from,
                              cor_1_7_from, cutoff, cutoff_sum_from, exponent_ratios, log2_cut,
                              survey, verify_thm_1_3)
from curvelab.geodesics import tight_geodesic
from curvelab.harness import _pair_at_distance
from curvelab.projection import profile_value


@given(st.integers(0, 500), st.integers(0, 500))
def test_cutoff_definition(m, n):
    c = cutoff(m, n)
    assert c == (m if m > n else 0)
    assert cutoff(m, n + 1) <= c
    assert log2_cut(m, n) == (math.log2(m) if m > n and m > 0 else 0.0)


def test_cutoff_rejects_negative():
    with pytest.raises(ValueError):
        cutoff(-1, 3)


def test_constants():
    cfg = ConstantsConfig()
    # smallest k >= N + 2M with k <= 2(k - 2M) and k <= (k - 2M)^2, by brute force
    k = next(k for k in range(cfg.N + 2 * cfg.M, 10 ** 4)
             if k <= 2 * (k - 2 * cfg.M) and k <= (k - 2 * cfg.M) ** 2)
    assert cfg.k_tight == k == 800
    assert cfg.k_geo == 12 and cfg.l_geo == 6
    with pytest.raises(ValueError):
        ConstantsConfig(N=3)
    with pytest.raises(ValueError):
        ConstantsConfig(k13=10)
    with pytest.raises(ValueError):
        ConstantsConfig(k15=5)


points = st.tuples(st.integers(-3, 3), st.integers(0, 3), st.integers(1, 3)).filter(
    lambda t: math.gcd(abs(t[0]), t[1]) == 1 and (t[1] > 0 or t[0] == 1))


def _brute(prof, B, Q=60, P=150):
    out = set()
    for q in range(0, Q + 1):
        for p in range(-P, P + 1):
            if math.gcd(abs(p), q) != 1 or (q == 0 and p != 1):
                continue
            if profile_value(prof, p, q) <= B:
                out.add((p, q))
    return out


@settings(max_examples=40)
@given(st.lists(points, min_size=2, max_size=3, unique_by=lambda t: t[:2]), st.integers(1, 20))
def test_bounded_slopes_complete_below_limit(prof, B):
    prof = sorted(prof)
    slopes, Beff = bounded_slopes(prof, B, limit=10 ** 6)
    assert Beff == B
    assert set(slopes) == _brute(prof, B)
    vals = [profile_value(prof, *s) for s in slopes]
    assert vals == sorted(vals)


@settings(max_examples=30)
@given(st.lists(points, min_size=2, max_size=3, unique_by=lambda t: t[:2]), st.integers(5, 40),
       st.integers(3, 30))
def test_bounded_slopes_lowers_the_bound(prof, B, limit):
    prof = sorted(prof)
    slopes, Beff = bounded_slopes(prof, B, limit=limit)
    assert Beff <= B
    assert set(slopes) == _brute(prof, Beff)


def test_single_slope_profile_uses_window():
    for prof in ([(1, 0, 2)], [(1, 2, 1)]):
        slopes, Beff = bounded_slopes(prof, 10, limit=10 ** 6, window=5)
        assert slopes and all(q <= 5 for _, q in slopes)
        assert all(profile_value(prof, p, q) <= Beff for p, q in slopes)


def test_consecutive_block():
    assert consecutive_block([])
    assert consecutive_block([2, 3, 4])
    assert not consecutive_block([1, 4])


def test_corollary_helpers_by_hand():
    # products along a d = 4 geodesic, i(x, y) = 100
    products = [10, 100, 1000]
    assert cor_1_6_exceptions_from(100, products, 0.5) == [1]
    assert cor_1_6_exceptions_from(100, products, 1.0) == []
    rep = cor_1_7_from(100, products, 1.0, 1.0)
    assert rep.pair_failures == [] and rep.exceptions == []
    rep = cor_1_7_from(100, [10, 10, 10, 10], 1.0, 0.5)
    assert rep.pair_failures == [(1, 4)]


@pytest.fixture(scope="module")
def d3_survey():
    x, y, D, _ = _pair_at_distance("0,5", 1, 0, 3, 3, 10 ** 7)
    rec = tight_geodesic(x, y, dist=D)
    from curvelab.geodesics import curves_of
    return rec, survey(x, y, 6, extra=curves_of(rec), d_whole=D, limit=100)


def test_survey_caveat_and_whole_term(d3_survey):
    rec, sv = d3_survey
    cav = sv.caveat()
    assert cav["complete"] is False and cav["effective_core_bound"] <= cav["core_bound"]
    whole = [v for v in sv.values if v.kind == "whole"]
    assert len(whole) == 1 and whole[0].d == rec.d == 3


def test_cutoff_sum_is_monotone_in_n(d3_survey):
    _, sv = d3_survey
    totals = [cutoff_sum_from(sv, n).total for n in range(0, 12)]
    assert all(a >= b for a, b in zip(totals, totals[1:]))


def test_exponent_ratios_endpoints(d3_survey):
    rec, _ = d3_survey
    ratios = exponent_ratios(rec)
    ends = [r for p, q, _, r in ratios if (p, q) == (0, rec.d)]
    assert ends == [1.0]
    assert all(r >= 0 for *_, r in ratios)


def test_shifted_ledger_holds_on_a_record(d3_survey):
    rec, sv = d3_survey
    rep = verify_thm_1_3(rec, surveyed=sv)
    assert rep.ok and rep.domains_checked > 0
    assert rep.max_ratio >= 1.0


def test_two_sided_bound_survives_exact_tie():
    # V is the ratio attained by this very pair, so the upper bound holds with equality
    products, I = [10, 6, 96, 11], 17
    V = math.log(I) / math.log(products[0] * products[3])
    rep = cor_1_7_from(I, products, 1.1934, V)
    assert rep.ok and rep.pair_failures == [] and rep.exceptions == [1, 2]
    assert cor_1_6_exceptions_from(I, products, V) == [1, 2]
