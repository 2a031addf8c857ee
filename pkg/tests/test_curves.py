import json
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from curvelab.curves import (CurveError, MultiComponentError, Multicurve, NormalCurve,
                             ParityError, PeripheralError, Slope, TriangleInequalityError,
                             TrivialCurveError, components, curve_from_dict, enumerate_curves,
                             load_curve, make_rng, random_filling_pair, random_word,
                             slope_curve, twist_generators)
from curvelab.intersection import fills
from curvelab.surface import make_surface

S11, S04 = make_surface(1, 1), make_surface(0, 4)
slopes = st.tuples(st.integers(-30, 30), st.integers(0, 30)).filter(
    lambda t: gcd(abs(t[0]), t[1]) == 1 and (t[1] > 0 or t[0] == 1))


@pytest.mark.parametrize("w, err", [
    ((1, 0, 0), ParityError),
    ((3, 1, 0), TriangleInequalityError),
    ((0, 0, 0), TrivialCurveError),
    ((2, 0, 2), MultiComponentError),
    ((2, 2, 2), PeripheralError),
])
def test_invalid_weights_on_torus(s11, w, err):
    with pytest.raises(err):
        NormalCurve(s11, w)


def test_wrong_length_and_negative(s11):
    with pytest.raises(CurveError):
        NormalCurve(s11, (1, 0))
    with pytest.raises(CurveError):
        NormalCurve(s11, (-1, 0, 1))


def test_components_drop_repeats_and_puncture_loops(s11):
    assert components((2, 0, 2), s11) == [NormalCurve(s11, (1, 0, 1))]
    assert components((3, 2, 3), s11) == [NormalCurve(s11, (1, 0, 1))]


@given(slopes)
def test_slope_curves_are_single_curves(pq):
    for S in (S11, S04):
        c = slope_curve(S, *pq)
        assert isinstance(c, NormalCurve)
        assert len(components(c.weights, c.tri)) == 1


def test_slope_normalisation():
    assert Slope(-1, -2) == Slope(1, 2)
    assert Slope(-1, 0) == Slope(1, 0)
    with pytest.raises(CurveError):
        Slope(2, 4)


def test_distinct_slopes_give_distinct_curves():
    seen = {}
    for q in range(0, 8):
        for p in range(-8, 9):
            if gcd(abs(p), q) == 1 and (q > 0 or p == 1):
                c = slope_curve(S11, p, q)
                assert c.weights not in seen
                seen[c.weights] = (p, q)


def test_json_round_trip(s05):
    for c in list(enumerate_curves(s05, 2))[:10]:
        assert curve_from_dict(json.loads(c.to_json())) == c


def test_load_curve_shorthand():
    assert load_curve("1/2") == slope_curve(S11, 1, 2)
    assert load_curve("3/1", S04) == slope_curve(S04, 3, 1)


def test_enumeration_is_bounded_and_unique(s05):
    cs = list(enumerate_curves(s05, 2))
    assert len(cs) == len(set(cs))
    assert all(max(c.weights) <= 2 for c in cs)
    assert set(twist_generators(s05)) <= set(cs)


def test_multicurve_checks_disjointness(s11):
    a, b = slope_curve(S11, 1, 0), slope_curve(S11, 0, 1)
    with pytest.raises(CurveError):
        Multicurve([a, b], check=True)
    assert len(Multicurve([a, a])) == 1


def test_random_words_are_seeded(s05):
    w1 = random_word(s05, make_rng(3, 1), 6)
    w2 = random_word(s05, make_rng(3, 1), 6)
    assert w1 == w2


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_filling_pair_fills(seed):
    x, y = random_filling_pair(make_surface(0, 5), seed, 3)
    assert fills(x, y)
    assert (x, y) == random_filling_pair(make_surface(0, 5), seed, 3)
