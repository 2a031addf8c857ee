from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from curvelab.curves import Multicurve, random_filling_pair, slope_curve, twist_generators
from curvelab.farey import farey_neighbours_bfs
from curvelab.geodesics import (SearchError, TightGeodesicRecord, check_multigeodesic,
                                distance, growth_violations, is_tight, neighbour_candidates,
                                path_distances_ok, record_from_dict, tight_geodesic, tighten)
from curvelab.harness import _pair_at_distance
from curvelab.intersection import boundary_of_filling, fills, intersection_number
from curvelab.surface import make_surface

S11 = make_surface(1, 1)
small = st.tuples(st.integers(-7, 7), st.integers(0, 7)).filter(
    lambda t: gcd(abs(t[0]), t[1]) == 1 and (t[1] > 0 or t[0] == 1))


@settings(max_examples=60)
@given(small, small)
def test_torus_distance_is_farey_distance(a, b):
    r = distance(slope_curve(S11, *a), slope_curve(S11, *b))
    assert r.value == farey_neighbours_bfs(a, b, 7)
    # adjacent slopes on the torus meet once
    assert all(intersection_number(u, v) == 1 for u, v in zip(r.path, r.path[1:]))


def test_small_distances(s05):
    g = twist_generators(s05)
    a = g[0]
    b = next(c for c in g if intersection_number(a, c) == 0 and c != a)
    c = next(c for c in g if intersection_number(a, c) > 0)
    assert distance(a, a).value == 0
    assert distance(a, b).value == 1
    r = distance(a, c)
    assert r.value == 2 and not fills(a, c)
    assert r.path[1] in boundary_of_filling(a, c)


@pytest.fixture(scope="module")
def d3():
    x, y, D, _ = _pair_at_distance("0,5", 1, 0, 3, 3, 10 ** 7)
    return x, y, D, tight_geodesic(x, y, dist=D)


@pytest.fixture(scope="module")
def d4():
    x, y, D, _ = _pair_at_distance("0,5", 1, 4, 4, 5, 10 ** 7)
    return x, y, D, tight_geodesic(x, y, dist=D)


@pytest.mark.parametrize("name", ["d3", "d4"])
def test_certified_tight_records(name, request):
    x, y, D, rec = request.getfixturevalue(name)
    assert D.conditional and D.lower == D.upper == D.value == rec.d
    assert fills(x, y)
    assert is_tight(rec) == (True, None)
    assert check_multigeodesic(rec) == []
    assert path_distances_ok(rec.vertices)
    assert rec.V[0] == Multicurve([x]) and rec.V[-1] == Multicurve([y])


def test_record_round_trip(d4):
    x, y, D, rec = d4
    back = record_from_dict(rec.to_dict(), x.tri)
    assert back.V == rec.V and back.d == rec.d


def test_tighten_is_a_fixed_point(d4):
    x, y, D, rec = d4
    assert tighten(rec.vertices) == rec.V


def _planted(rec, i):
    """Replace V_i by another curve disjoint from V_{i-1}; tightness must fail at i."""
    x, y = rec.x, rec.y
    prev = rec.V[i - 1].components[0]
    cands = neighbour_candidates(prev, y, 4 * intersection_number(prev, y))
    w = next(c for c in cands.curves if c not in rec.V[i] and c != prev)
    V = list(rec.V)
    V[i] = Multicurve([w])
    return TightGeodesicRecord(x, y, V, rec.R, True)


def test_planted_counter_fixtures(d3, d4):
    assert is_tight(_planted(d3[3], 1)) == (False, 1)
    assert is_tight(_planted(d4[3], 1)) == (False, 1)
    # a change at V_2 is already visible from index 1
    assert is_tight(_planted(d4[3], 2))[1] in (1, 2)


def test_tightness_is_vacuous_up_to_two(s05):
    g = twist_generators(s05)
    a, c = g[0], next(c for c in g if intersection_number(g[0], c) > 0)
    rec = tight_geodesic(a, c)
    assert rec.d == 2 and is_tight(rec) == (True, None)


def test_growth_bound_is_flagged_not_passed(d4):
    rec = d4[3]
    assert growth_violations(rec, 4) == []
    assert growth_violations(rec, 0) != []


def test_budget_exhaustion_is_reported(d4):
    x, y, _, _ = d4
    r = distance(x, y, budget=1)
    assert r.value is None and r.method == "budget" and r.lower >= 3
    with pytest.raises(SearchError):
        tight_geodesic(x, y, budget=1)


def test_random_filling_pairs_are_at_least_three():
    for seed in range(3):
        x, y = random_filling_pair(make_surface(0, 5), seed, 3)
        assert distance(x, y).value >= 3
