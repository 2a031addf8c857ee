import json
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from curvelab.curves import Multicurve, enumerate_curves, random_filling_pair, twist_generators
from curvelab.farey import farey_distance, farey_geodesic, farey_neighbours_bfs
from curvelab.intersection import intersection_number, twist
from curvelab.projection import (UNDEFINED, DomainError, FareyChart, Subsurface,
                                 annular_distance, domains_from_curves, lipschitz_check,
                                 meets, proj_distance, project_nonannular,
                                 subsurface_from_dict)
from curvelab.surface import make_surface

small = st.tuples(st.integers(-9, 9), st.integers(0, 9)).filter(
    lambda t: gcd(abs(t[0]), t[1]) == 1 and (t[1] > 0 or t[0] == 1))


@settings(max_examples=150)
@given(small, small)
def test_farey_distance_matches_brute_force(a, b):
    # every geodesic between slopes of height <= 9 stays below height 9
    assert farey_distance(a, b) == farey_neighbours_bfs(a, b, 9)
    path = farey_geodesic(a, b)
    assert len(path) - 1 == farey_distance(a, b)
    assert all(abs(u[0] * v[1] - u[1] * v[0]) == 1 for u, v in zip(path, path[1:]))


def test_farey_examples():
    assert farey_distance((1, 0), (0, 1)) == 1
    assert farey_distance((1, 0), (1, 2)) == 2
    assert farey_distance((0, 1), (5, 2)) == 3


def _chart(Z, c):
    g = next(g for g in twist_generators(c.tri) if intersection_number(g, c))
    return FareyChart(Z, list(project_nonannular(Z, g)))


def _one_curve_domains(tri):
    for c in twist_generators(tri):
        for Z in domains_from_curves([c]):
            if Z.kind == "nonannular":
                yield c, Z


@pytest.mark.parametrize("surface", ["0,5", "1,2"])
def test_chart_slopes_follow_closed_form(surface, request):
    tri = request.getfixturevalue("s05" if surface == "0,5" else "s12")
    for c, Z in list(_one_curve_domains(tri))[:4]:
        ch = _chart(Z, c)
        pts = [(1, 0), (0, 1), (1, 1), (2, 1), (-1, 2), (3, 2)]
        cs = {pq: ch.curve(*pq) for pq in pts}
        for pq, v in cs.items():
            assert ch.slope(v) == pq
            assert intersection_number(v, c) == 0
        for a in pts:
            for b in pts:
                want = ch.eps * abs(a[0] * b[1] - a[1] * b[0])
                assert intersection_number(cs[a], cs[b]) == want


def test_projection_lands_in_domain(filling_05):
    for x, y in filling_05:
        for c, Z in list(_one_curve_domains(x.tri))[:5]:
            P = project_nonannular(Z, y)
            assert meets(Z, y) == (len(P) > 0)
            for v in P:
                assert intersection_number(v, c) == 0 and v != c


def test_projection_of_a_curve_in_the_domain_is_itself(s05):
    for c, Z in list(_one_curve_domains(s05))[:4]:
        ch = _chart(Z, c)
        v = ch.curve(2, 3)
        assert list(project_nonannular(Z, v)) == [v]
        assert proj_distance(Z, v, v) == 0


def test_undefined_when_disjoint(s05):
    c = twist_generators(s05)[0]
    Z = Subsurface.complement(Multicurve([c]))
    assert not meets(Z, c)
    assert proj_distance(Z, c, twist_generators(s05)[1]) is UNDEFINED


def test_subsurface_json_round_trip(s05):
    c = twist_generators(s05)[0]
    for Z in domains_from_curves([c]) + [Subsurface.whole()]:
        back = subsurface_from_dict(json.loads(json.dumps(Z.to_dict())), s05)
        assert back == Z


def test_pants_is_not_a_domain(s05):
    c = twist_generators(s05)[0]
    Z = Subsurface.complement(Multicurve([c]))
    pants = [r.index for r in Z.cut.regions if r.is_pants]
    assert pants
    with pytest.raises(DomainError):
        Subsurface.complement(Multicurve([c]), pants[0])


@pytest.mark.parametrize("k", [1, 2, 3, 5, 8])
def test_annular_distance_tracks_twisting(filling_12, k):
    # d_{A_c}(x, T_c^k x) = |k| + O(1); the additive error is at most 2
    x, _ = filling_12[0]
    for c in twist_generators(x.tri):
        if intersection_number(c, x) == 0:
            continue
        d = annular_distance(c, x, twist(x, c, k))
        assert abs(d - k) <= 2
        assert annular_distance(c, x, twist(x, c, -k)) == d


def test_annular_self_diameter(filling_05):
    for x, _ in filling_05[:3]:
        for c in twist_generators(x.tri):
            if intersection_number(c, x):
                assert annular_distance(c, x, x) <= 1


def test_lipschitz_on_disjoint_pairs(s05):
    curves = list(enumerate_curves(s05, 2))[:25]
    pairs = [(a, b) for a in curves for b in curves if a < b and intersection_number(a, b) == 0][:12]
    for a, b in pairs:
        rep = lipschitz_check(a, b, domains_from_curves(curves[:8]))
        assert rep.ok and rep.max_value <= 2
    x, y = random_filling_pair(make_surface(0, 5), 0, 3)
    with pytest.raises(DomainError):
        lipschitz_check(x, y, [])
