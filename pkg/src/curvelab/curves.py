"""Normal curves, multicurves and the dual-graph path calculus.

A curve is stored as its edge weights in a fixed triangulation.  Weights are
intersection numbers with the ideal arcs, which are isotopy invariants, so the
weight vector itself is the canonical form of a class.

Tracing a weight vector produces components.  A component is a cyclic list of
*visits*; visit ``t`` enters triangle ``T(ent[t])`` through side ``ent[t]`` at
point index ``eidx[t]`` and leaves through ``ext[t]`` at ``xidx[t]``.
``turn[t]`` is +1 if it leaves through ``next(ent[t])`` and -1 through
``prev(ent[t])``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Iterator, Sequence

import numpy as np

from .surface import (SCHEMA_VERSION, SurfaceSpec, Triangulation, edge_of,
                      make_surface, parse_surface, standard_triangulation)


class CurveError(ValueError):
    pass


class ParityError(CurveError):
    pass


class TriangleInequalityError(CurveError):
    pass


class MultiComponentError(CurveError):
    pass


class PeripheralError(CurveError):
    pass


class TrivialCurveError(CurveError):
    pass


# ---------------------------------------------------------------------------
# tracing


@dataclass(frozen=True, eq=False)
class Component:
    tri: Triangulation
    ent: tuple
    eidx: tuple
    ext: tuple
    xidx: tuple
    turn: tuple

    def __len__(self):
        return len(self.ent)

    @cached_property
    def weights(self) -> tuple:
        w = [0] * self.tri.edge_count
        for s in self.ent:
            w[edge_of(s)] += 1
        return tuple(w)

    @property
    def peripheral(self) -> bool:
        return len(set(self.turn)) == 1


def check_weights(tri: Triangulation, weights: Sequence[int]) -> None:
    if len(weights) != tri.edge_count:
        raise CurveError(f"expected {tri.edge_count} weights, got {len(weights)}")
    if any(w < 0 for w in weights):
        raise CurveError("weights must be nonnegative")
    for t in tri.triangles:
        a, b, c = (weights[edge_of(s)] for s in t)
        if (a + b + c) % 2:
            raise ParityError(f"odd weight sum in triangle {t}")
        if a > b + c or b > a + c or c > a + b:
            raise TriangleInequalityError(f"triangle inequality fails in {t}")


def trace(tri: Triangulation, weights: Sequence[int]) -> list:
    """Decompose a normal weight vector into its closed components."""
    check_weights(tri, weights)
    W = lambda s: weights[edge_of(s)]
    nxt, prv = tri.nxt, tri.prv
    corner = {}
    for s in tri.sides:
        # normal arcs cutting the corner at the start vertex of s
        corner[s] = (W(s) + W(prv[s]) - W(nxt[s])) // 2
    used = {s: bytearray(W(s)) for s in tri.sides}
    comps = []
    for s0 in range(tri.edge_count):
        for k0 in range(W(s0)):
            if used[s0][k0]:
                continue
            ent, eidx, ext, xidx, turn = [], [], [], [], []
            s, k = s0, k0
            while True:
                used[s][k] = 1
                used[~s][W(s) - 1 - k] = 1
                if k < corner[s]:
                    x, xi, tn = prv[s], W(prv[s]) - 1 - k, -1
                else:
                    x, xi, tn = nxt[s], W(s) - 1 - k, 1
                ent.append(s); eidx.append(k); ext.append(x); xidx.append(xi); turn.append(tn)
                s, k = ~x, W(x) - 1 - xi
                if s == s0 and k == k0:
                    break
            comps.append(Component(tri, tuple(ent), tuple(eidx), tuple(ext), tuple(xidx), tuple(turn)))
    return comps


# ---------------------------------------------------------------------------
# curves


class NormalCurve:
    """An essential, non-peripheral simple closed curve in normal position."""

    __slots__ = ("tri", "weights", "__dict__")

    def __init__(self, tri: Triangulation, weights: Iterable[int], check: bool = True):
        self.tri = tri
        self.weights = tuple(int(w) for w in weights)
        if check:
            comps = trace(tri, self.weights)
            if not comps:
                raise TrivialCurveError("weight vector carries no curve")
            if len(comps) > 1:
                raise MultiComponentError(f"{len(comps)} components; use components()")
            if comps[0].peripheral:
                raise PeripheralError("curve is a puncture loop")
            self.__dict__["component"] = comps[0]

    @cached_property
    def component(self) -> Component:
        return trace(self.tri, self.weights)[0]

    @property
    def surface(self) -> SurfaceSpec:
        return self.tri.surface

    def __eq__(self, other):
        return isinstance(other, NormalCurve) and self.weights == other.weights and self.tri == other.tri

    def __lt__(self, other):
        return self.weights < other.weights

    def __hash__(self):
        return hash(self.weights)

    def __repr__(self):
        return f"NormalCurve({list(self.weights)})"

    def to_dict(self) -> dict:
        return {"schema": SCHEMA_VERSION, "surface": self.tri.surface.label,
                "triangulation": self.tri.ident, "weights": list(self.weights)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def validate(weights: Sequence[int], tri: Triangulation) -> NormalCurve:
    return NormalCurve(tri, weights)


def components(weights: Sequence[int], tri: Triangulation) -> list:
    """Essential non-peripheral components, without repetition, sorted."""
    out = set()
    for c in trace(tri, weights):
        if not c.peripheral:
            out.add(NormalCurve(tri, c.weights, check=False))
    return sorted(out)


class Multicurve:
    """A set of pairwise disjoint, pairwise non-isotopic curves."""

    def __init__(self, curves: Iterable[NormalCurve], check: bool = False):
        cs = sorted(set(curves))
        if not cs:
            self.tri = None
        else:
            self.tri = cs[0].tri
        self.components = tuple(cs)
        if check:
            from .intersection import intersection_number
            for a, b in itertools.combinations(cs, 2):
                if intersection_number(a, b):
                    raise CurveError("multicurve components intersect")

    @cached_property
    def weights(self) -> tuple:
        return tuple(sum(ws) for ws in zip(*(c.weights for c in self.components)))

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __contains__(self, c):
        return c in self.components

    def __eq__(self, other):
        return isinstance(other, Multicurve) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"Multicurve({[list(c.weights) for c in self.components]})"

    def union(self, other: Iterable[NormalCurve]) -> "Multicurve":
        return Multicurve(list(self.components) + list(other))

    def to_dict(self) -> dict:
        return {"schema": SCHEMA_VERSION, "components": [c.to_dict() for c in self.components]}


def as_curves(A) -> tuple:
    if isinstance(A, NormalCurve):
        return (A,)
    if isinstance(A, Multicurve):
        return A.components
    return tuple(A)


# ---------------------------------------------------------------------------
# closed dual paths


def reduce_path(tri: Triangulation, entries: Sequence[int]) -> list:
    """Cyclically reduce a closed path given as its cyclic list of entry sides.

    Entering ``T(e_k)`` through ``e_k`` and then ``e_{k+1} == ~e_k`` is a
    backtrack; cancelling it keeps the path valid.
    """
    stack: list = []
    for e in entries:
        if stack and stack[-1] == ~e:
            stack.pop()
        else:
            stack.append(e)
    lo, hi = 0, len(stack) - 1
    while hi > lo and stack[hi] == ~stack[lo]:
        lo += 1
        hi -= 1
    return stack[lo:hi + 1]


def check_path(tri: Triangulation, entries: Sequence[int]) -> None:
    n = len(entries)
    for k in range(n):
        if tri.tri_index[~entries[(k + 1) % n]] != tri.tri_index[entries[k]]:
            raise CurveError(f"broken dual path at position {k}")


def path_class(tri: Triangulation, entries: Sequence[int]):
    """Classify a closed path: returns ('trivial'|'peripheral'|'curve', weights)."""
    red = reduce_path(tri, entries)
    if not red:
        return "trivial", None
    n = len(red)
    turns = set()
    w = [0] * tri.edge_count
    for k in range(n):
        turns.add(1 if tri.nxt[red[k]] == ~red[(k + 1) % n] else -1)
        w[edge_of(red[k])] += 1
    if len(turns) == 1:
        return "peripheral", tuple(w)
    return "curve", tuple(w)


def path_curve(tri: Triangulation, entries: Sequence[int], check: bool = False):
    """The curve carried by a simple closed path, or None if inessential."""
    kind, w = path_class(tri, entries)
    if kind != "curve":
        return None
    return NormalCurve(tri, w, check=check)


# ---------------------------------------------------------------------------
# slopes on the complexity-one surfaces


@dataclass(frozen=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        if (self.p, self.q) == (0, 0) or gcd(abs(self.p), abs(self.q)) != 1:
            raise CurveError(f"{self.p}/{self.q} is not a primitive slope")
        if self.q < 0 or (self.q == 0 and self.p < 0):
            object.__setattr__(self, "p", -self.p)
            object.__setattr__(self, "q", -self.q)

    def __str__(self):
        return f"{self.p}/{self.q}"

    @classmethod
    def parse(cls, text: str) -> "Slope":
        p, q = text.split("/")
        return cls(int(p), int(q))


def _slope_triple(p: int, q: int) -> tuple:
    a, b = abs(p), abs(q)
    return (a, b, abs(a - b)) if p * q > 0 else (a, b, a + b)


def slope_curve(spec: SurfaceSpec, p: int, q: int) -> NormalCurve:
    s = Slope(p, q)
    tri = standard_triangulation(spec)
    a, b, c = _slope_triple(s.p, s.q)
    if (spec.genus, spec.punctures) == (1, 1):
        return NormalCurve(tri, (a, b, c))
    if (spec.genus, spec.punctures) == (0, 4):
        # tetrahedron: opposite edge pairs (0,5), (1,4), (2,3)
        return NormalCurve(tri, (a, b, c, c, b, a))
    raise CurveError(f"slope backend only covers S_{{1,1}} and S_{{0,4}}, not {spec}")


def slope_intersection(spec: SurfaceSpec, s1: Slope, s2: Slope) -> int:
    """Closed form i(p/q, r/s) = eps*|ps - rq| with eps = 1 or 2."""
    eps = 1 if (spec.genus, spec.punctures) == (1, 1) else 2
    return eps * abs(s1.p * s2.q - s2.p * s1.q)


# ---------------------------------------------------------------------------
# enumeration, generators, random pairs


def _normal_vectors(tri: Triangulation, B: int) -> Iterator[tuple]:
    E = tri.edge_count
    tris = [tuple(edge_of(s) for s in t) for t in tri.triangles]
    # depth-first over edges, pruning once a triangle is complete
    complete_at = {}
    for t in tris:
        complete_at.setdefault(max(t), []).append(t)
    w = [0] * E

    def rec(e):
        if e == E:
            yield tuple(w)
            return
        for v in range(B + 1):
            w[e] = v
            ok = True
            for t in complete_at.get(e, ()):
                a, b, c = w[t[0]], w[t[1]], w[t[2]]
                if (a + b + c) % 2 or a > b + c or b > a + c or c > a + b:
                    ok = False
                    break
            if ok:
                yield from rec(e + 1)
        w[e] = 0

    yield from rec(0)


def enumerate_curves(tri: Triangulation, B: int) -> Iterator[NormalCurve]:
    """Stream every curve whose weights are all at most ``B``."""
    if B < 1:
        raise CurveError("weight bound must be at least 1")
    for w in _normal_vectors(tri, B):
        if not any(w):
            continue
        comps = trace(tri, w)
        if len(comps) == 1 and not comps[0].peripheral:
            yield NormalCurve(tri, w, check=False)


def twist_generators(tri: Triangulation) -> list:
    """Twist generators: all curves of maximal weight one, sorted."""
    return sorted(enumerate_curves(tri, 1))


def base_curve(tri: Triangulation) -> NormalCurve:
    return twist_generators(tri)[0]


def second_base_curve(tri: Triangulation) -> NormalCurve:
    """First twist generator meeting the base curve; y of a random pair starts here."""
    from .intersection import intersection_number
    x = base_curve(tri)
    for c in twist_generators(tri):
        if intersection_number(x, c) > 0:
            return c
    raise CurveError("no generator meets the base curve")


def dehn_twist(x: NormalCurve, c: NormalCurve, k: int = 1) -> NormalCurve:
    from .intersection import twist
    return twist(x, c, k)


def make_rng(*key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(k) for k in key]))


def random_word(tri: Triangulation, rng: np.random.Generator, L: int) -> list:
    gens = twist_generators(tri)
    return [(gens[int(rng.integers(len(gens)))], int(rng.choice((-1, 1)))) for _ in range(L)]


def apply_word(x: NormalCurve, word) -> NormalCurve:
    for c, k in word:
        x = dehn_twist(x, c, k)
    return x


RETRY_CAP = 100


def random_filling_pair(spec: SurfaceSpec, seed: int, L: int = 4, tri: Triangulation | None = None):
    from .intersection import fills
    if spec.complexity < 2:
        raise CurveError("filling pairs are only sampled when complexity >= 2")
    if L < 1:
        raise CurveError("word length must be positive")
    tri = tri or standard_triangulation(spec)
    x = base_curve(tri)
    y0 = second_base_curve(tri)
    rng = make_rng(seed, L, spec.genus, spec.punctures)
    for _ in range(RETRY_CAP):
        y = apply_word(y0, random_word(tri, rng, L))
        if fills(x, y):
            return x, y
    raise CurveError(f"no filling pair after {RETRY_CAP} tries")


# ---------------------------------------------------------------------------
# JSON


def curve_from_dict(d: dict, tri: Triangulation | None = None) -> NormalCurve:
    spec = parse_surface(d["surface"])
    tri = tri or standard_triangulation(spec)
    return NormalCurve(tri, d["weights"])


def load_curve(text: str, spec: SurfaceSpec | None = None) -> NormalCurve:
    """Read a curve from JSON text, or a slope shorthand ``p/q`` on complexity one."""
    text = text.strip()
    if not text.startswith("{"):
        if spec is None:
            spec = make_surface(1, 1)
        return slope_curve(spec, *(int(t) for t in text.split("/")))
    return curve_from_dict(json.loads(text))
