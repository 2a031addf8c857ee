import json

import pytest

from curvelab.surface import (ComplexityError, Triangulation, TriangulationError, flip,
                              flip_weights, inv, make_surface, parse_surface,
                              standard_triangulation, supported_surfaces)
from curvelab.curves import NormalCurve, enumerate_curves


def test_complexity_and_counts():
    for g, n, xi in [(1, 1, 1), (0, 4, 1), (0, 5, 2), (1, 2, 2)]:
        S = make_surface(g, n)
        assert S.complexity == xi
        assert S.edge_count == 6 * g + 3 * n - 6
        assert S.triangle_count == 4 * g + 2 * n - 4


def test_low_complexity_rejected():
    with pytest.raises(ComplexityError):
        make_surface(0, 3)
    with pytest.raises(ComplexityError):
        make_surface(-1, 5)


def test_parse_surface_forms():
    assert parse_surface("0,5") == make_surface(0, 5)
    assert parse_surface("S_{1,2}") == make_surface(1, 2)


@pytest.mark.parametrize("S", supported_surfaces(), ids=str)
def test_standard_triangulation_topology(S):
    tri = standard_triangulation(S)
    assert tri.surface == S
    assert tri.genus == S.genus and tri.punctures == S.punctures
    # every edge appears once with each orientation
    sides = sorted(s for t in tri.triangles for s in t)
    assert sides == sorted(list(range(S.edge_count)) + [inv(e) for e in range(S.edge_count)])


@pytest.mark.parametrize("S", supported_surfaces(), ids=str)
def test_triangulation_json_round_trip(S):
    tri = standard_triangulation(S)
    back = Triangulation.from_dict(json.loads(tri.to_json()))
    assert back == tri
    assert back.to_dict()["schema"] == tri.to_dict()["schema"]


def test_bad_gluing_rejected(s11):
    d = s11.to_dict()
    d["gluing"] = [[0, 1]] + d["gluing"][1:]
    with pytest.raises(TriangulationError):
        Triangulation.from_dict(d)


def test_flip_keeps_surface_and_is_an_involution_on_weights(s05):
    curves = list(enumerate_curves(s05, 2))[:20]
    for e in range(s05.edge_count):
        if s05.triangle_of(e) == s05.triangle_of(inv(e)):
            continue
        t2 = flip(s05, e)
        assert t2.surface == s05.surface
        for c in curves:
            w2 = flip_weights(s05, e, c.weights)
            NormalCurve(t2, w2)  # still a valid single curve
            assert tuple(flip_weights(t2, e, w2)) == c.weights
