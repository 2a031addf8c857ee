from collections import Counter
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from curvelab.curves import (Slope, apply_word, enumerate_curves, make_rng, path_class,
                             random_filling_pair, random_word, slope_curve,
                             slope_intersection, twist_generators)
from curvelab.intersection import (boundary_of_filling, filling_subsurface, fills,
                                   intersection_number, minimal_position, twist)
from curvelab.surface import make_surface, standard_triangulation

S11, S04 = make_surface(1, 1), make_surface(0, 4)
slopes = st.tuples(st.integers(-25, 25), st.integers(0, 25)).filter(
    lambda t: gcd(abs(t[0]), t[1]) == 1 and (t[1] > 0 or t[0] == 1))


@settings(max_examples=300)
@given(slopes, slopes)
def test_closed_form_on_torus_and_sphere(a, b):
    for S, eps in ((S11, 1), (S04, 2)):
        got = intersection_number(slope_curve(S, *a), slope_curve(S, *b))
        assert got == eps * abs(a[0] * b[1] - a[1] * b[0])
        assert got == slope_intersection(S, Slope(*a), Slope(*b))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["0,5", "1,2"]), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_symmetry_and_self_intersection(surface, s1, s2):
    g, n = map(int, surface.split(","))
    tri = standard_triangulation(make_surface(g, n))
    x = apply_word(twist_generators(tri)[0], random_word(tri, make_rng(s1), 3))
    y = apply_word(twist_generators(tri)[-1], random_word(tri, make_rng(s2), 3))
    assert intersection_number(x, y) == intersection_number(y, x)
    assert intersection_number(x, x) == 0


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["0,5", "1,2"]), st.integers(0, 10 ** 6))
def test_mapping_class_invariance(surface, seed):
    g, n = map(int, surface.split(","))
    tri = standard_triangulation(make_surface(g, n))
    rng = make_rng(seed)
    x = apply_word(twist_generators(tri)[0], random_word(tri, rng, 2))
    y = apply_word(twist_generators(tri)[-1], random_word(tri, rng, 2))
    word = random_word(tri, rng, 2)
    assert intersection_number(apply_word(x, word), apply_word(y, word)) == intersection_number(x, y)


tiny = st.tuples(st.integers(-6, 6), st.integers(0, 6)).filter(
    lambda t: gcd(abs(t[0]), t[1]) == 1 and (t[1] > 0 or t[0] == 1))


@settings(max_examples=60)
@given(tiny, tiny, st.integers(-4, 4))
def test_twist_on_torus_matches_slope_action(a, b, k):
    # T_a^k acts on slopes by the transvection fixing a
    A, B = slope_curve(S11, *a), slope_curve(S11, *b)
    i_ab = intersection_number(A, B)
    assert intersection_number(twist(B, A, k), B) == abs(k) * i_ab ** 2
    assert intersection_number(twist(B, A, k), A) == i_ab


def test_twist_inverse(s05):
    for c in twist_generators(s05):
        for x in list(enumerate_curves(s05, 2))[:15]:
            assert twist(twist(x, c, 3), c, -3) == x


@pytest.mark.parametrize("surface", ["0,5", "1,2"])
def test_diagram_euler_characteristic(surface):
    # complementary regions of a filling pair: i + 2 - 2g faces, one per puncture peripheral
    g, n = map(int, surface.split(","))
    for seed in range(6):
        x, y = random_filling_pair(make_surface(g, n), seed, 3)
        D = minimal_position(x, y)
        I = intersection_number(x, y)
        assert len(D.crossings) == I
        faces = D.faces()
        assert len(faces) == I + 2 - 2 * g
        kinds = Counter(path_class(x.tri, f)[0] for f in faces)
        assert kinds["peripheral"] == n and kinds["curve"] == 0


def test_diagram_json(s05):
    x, y = random_filling_pair(make_surface(0, 5), 1, 3)
    d = minimal_position(x, y).to_dict()
    assert d["schema"] == 1 and len(d["crossings"]) == intersection_number(x, y)


def test_filling_subsurface(s05):
    g = twist_generators(s05)
    a, b = g[0], next(c for c in g if intersection_number(g[0], c))
    bd = boundary_of_filling(a, b)
    assert not fills(a, b) and len(bd) >= 1
    for c in bd:
        assert intersection_number(c, a) == intersection_number(c, b) == 0
    F = filling_subsurface(a, b)
    assert not F.whole
    x, y = random_filling_pair(make_surface(0, 5), 0, 3)
    assert filling_subsurface(x, y).whole


curver = pytest.importorskip("curver")


@pytest.mark.parametrize("surface", ["0,5", "1,2", "1,1"])
def test_against_curver(surface):
    g, n = map(int, surface.split(","))
    tri = standard_triangulation(make_surface(g, n))
    T = curver.create_triangulation([list(t) for t in tri.triangles])
    rng = make_rng(11, g, n)
    for _ in range(40):
        x = apply_word(twist_generators(tri)[0], random_word(tri, rng, 3))
        y = apply_word(twist_generators(tri)[-1], random_word(tri, rng, 3))
        lx, ly = T.lamination(list(x.weights)), T.lamination(list(y.weights))
        assert intersection_number(x, y) == lx.intersection(ly)
        # twisting direction is the opposite of curver's
        c = twist_generators(tri)[int(rng.integers(len(twist_generators(tri))))]
        tw = T.lamination(list(c.weights)).encode_twist(-2)
        assert tuple(tw(lx).geometric) == twist(x, c, 2).weights


@given(st.lists(st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=30), min_size=1, max_size=5),
       st.integers(1, 3))
def test_rotation_ranking_routes_agree(words, reps):
    from curvelab.intersection import _doubling_ranks, periodic_ranks
    words = words + [words[0] * reps]
    lens = [len(w) for w in words]
    top = sorted(lens)[-2:]
    ranks = periodic_ranks(words)
    assert ranks == _doubling_ranks(words, lens, sum(top))
    # rank order is the order of long prefixes of the rotations
    flat = [(r, tuple((w[t:] + w[:t]) * (200 // len(w) + 1))[:200])
            for w, rk in zip(words, ranks) for t, r in enumerate(rk)]
    for (r1, p1), (r2, p2) in zip(sorted(flat), sorted(flat)[1:]):
        assert (r1 == r2) == (p1 == p2) and p1 <= p2
