"""Curve graph distances, tight geodesics and their certificates at desk scale.

On complexity one the curve graph is the Farey graph and distances are exact.
On complexity two, d <= 2 is decided by isotopy, disjointness and filling, and
larger distances by a search over candidate vertices whose intersection with
the far endpoint is bounded by R^p * i(x, y).  Lower bounds found that way are
conditional on R; every certificate records the R it used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .curves import CurveError, Multicurve, NormalCurve, as_curves
from .farey import farey_geodesic
from .intersection import boundary_of_filling, fills, intersection_number
from .projection import (UNDEFINED, FareyChart, Subsurface, meets,
                         profile, profile_value, proj_distance,
                         project_nonannular, slopes_below)
from .surface import SCHEMA_VERSION, ComplexityError

DEFAULT_R = 4  # engineering default; the growth constant exists but has no published value
DEFAULT_BUDGET = 10 ** 7


class SearchError(RuntimeError):
    pass


class BudgetExceeded(SearchError):
    pass


# ---------------------------------------------------------------------------
# candidate vertices


@lru_cache(maxsize=2048)
def _chart(x: NormalCurve, y: NormalCurve):
    """Farey chart on the complexity-one piece of S - x, and the profile of y there."""
    Z = Subsurface.complement(Multicurve([x]))
    ch = FareyChart(Z, project_nonannular(Z, y))
    return ch, profile(ch.arc_slopes(y))


class CandidateSet:
    """Curves w disjoint from x with i(w, y) <= bound, in order of i(w, y).

    Curves are built from their slopes only when first asked for.
    """

    def __init__(self, x, y, R, bound, chart, slopes, values):
        self.x, self.y, self.R, self.bound = x, y, R, bound
        self.chart = chart
        self.slopes = slopes
        self.values = values

    def __len__(self):
        return len(self.slopes)

    def curve(self, k: int) -> NormalCurve:
        return self.chart.curve(*self.slopes[k])

    @property
    def curves(self):
        return (self.curve(k) for k in range(len(self.slopes)))

    def to_dict(self) -> dict:
        return {"R": self.R, "bound": self.bound, "size": len(self),
                "max_value": max(self.values, default=0)}


@lru_cache(maxsize=4096)
def neighbour_candidates(x: NormalCurve, y: NormalCurve, bound: int, R: int = DEFAULT_R) -> CandidateSet:
    ch, prof = _chart(x, y)
    slopes = slopes_below(prof, bound)
    values = [profile_value(prof, p, q) for p, q in slopes]
    return CandidateSet(x, y, R, bound, ch, slopes, values)


# ---------------------------------------------------------------------------
# distance


@dataclass
class DistanceResult:
    value: int | None
    lower: int
    upper: int | None
    method: str
    path: list
    R: int | None = None
    conditional: bool = False
    candidates: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "method": self.method,
            "R": self.R,
            "lower_bound_conditional_on_R": self.conditional,
            "candidates": self.candidates,
            "path": [c.to_dict() for c in self.path],
        }


class _Counter:
    def __init__(self, budget):
        self.left = budget

    def fills(self, a, b):
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded("search budget exhausted")
        return fills(a, b)


def _middle(a, b) -> NormalCurve:
    bd = boundary_of_filling(a, b)
    if not len(bd):
        raise SearchError("expected a non-filling pair")
    return bd.components[0]


def _paths(x, y, d, R, counter, C1=None, Cd=None):
    """Paths x = v_0, ..., v_d = y built from candidate vertices, lazily.

    Every yielded path has consecutive vertices disjoint, so it bounds d_S(x, y)
    from above.  That the generator runs dry is the R-conditional lower bound.
    """
    I = intersection_number(x, y)
    if d == 3:
        C1 = C1 or neighbour_candidates(x, y, R * I, R)
        for v in C1.curves:
            if not counter.fills(v, y):
                yield [x, v, _middle(v, y), y]
    elif d == 4:
        C1 = C1 or neighbour_candidates(x, y, R * I, R)
        Cd = Cd or neighbour_candidates(y, x, R * I, R)
        for a in C1.curves:
            for k in range(len(Cd)):
                b = Cd.curve(k)
                if not counter.fills(a, b):
                    yield [x, a, _middle(a, b), b, y]
    elif d == 5:
        C1 = C1 or neighbour_candidates(x, y, R * I, R)
        Cd = Cd or neighbour_candidates(y, x, R * I, R)
        # pairs (v1, v4) are tried in order of i(v1, y) + i(v4, x); the middle
        # is a d = 3 path between them
        order = sorted((va + vb, k1, k4) for k1, va in enumerate(C1.values)
                       for k4, vb in enumerate(Cd.values))
        for _, k1, k4 in order:
            a, b = C1.curve(k1), Cd.curve(k4)
            for mid in _paths(a, b, 3, R, counter):
                yield [x] + mid + [y]
    else:
        raise SearchError(f"candidate paths are built for d in 3..5, got {d}")


def _xi(x: NormalCurve) -> int:
    return x.surface.complexity


def distance(x: NormalCurve, y: NormalCurve, R: int = DEFAULT_R, budget: int = DEFAULT_BUDGET,
             max_search: int = 4) -> DistanceResult:
    """d_S(x, y) with an explicit path and, past 2, an R-conditional lower bound.

    Complexity-two values up to ``max_search`` are certified this way (5 needs
    a much larger search and is only used when asked for); beyond that the
    result is the bracket [max_search + 1, None].
    """
    if x.tri != y.tri:
        raise CurveError("curves live on different triangulations")
    if x == y:
        return DistanceResult(0, 0, 0, "equal", [x])
    I = intersection_number(x, y)
    xi = _xi(x)
    if xi == 1:
        ch = FareyChart(Subsurface.whole(), [x, y])
        path = [ch.curve(p, q) for p, q in farey_geodesic(ch.slope(x), ch.slope(y))]
        path[0], path[-1] = x, y
        d = len(path) - 1
        return DistanceResult(d, d, d, "farey", path)
    if xi != 2:
        raise ComplexityError("certified distances are implemented for complexity one and two")
    if I == 0:
        return DistanceResult(1, 1, 1, "disjoint", [x, y])
    if not fills(x, y):
        return DistanceResult(2, 2, 2, "nonfilling", [x, _middle(x, y), y])
    counter = _Counter(budget)
    lower = 3
    sizes = {}
    try:
        sizes = {"V1": len(neighbour_candidates(x, y, R * I, R))}
        for d in range(3, max_search + 1):
            if d == 4:
                sizes["V_last"] = len(neighbour_candidates(y, x, R * I, R))
            path = next(_paths(x, y, d, R, counter), None)
            if path is not None:
                return DistanceResult(d, d, d, "search", path, R, True, sizes)
            lower = d + 1
    except BudgetExceeded:
        return DistanceResult(None, lower, None, "budget", [], R, True, sizes)
    return DistanceResult(None, lower, None, "bracket", [], R, True, sizes)


# ---------------------------------------------------------------------------
# tight geodesics


@dataclass
class TightGeodesicRecord:
    x: NormalCurve
    y: NormalCurve
    V: list  # Multicurves V_0 .. V_d
    R: int | None = None
    conditional: bool = False
    witnesses: list = field(default_factory=list)  # per interior index, the recomputed ∂F

    @property
    def d(self) -> int:
        return len(self.V) - 1

    @property
    def vertices(self) -> list:
        """Representatives v_i: the first component of each V_i."""
        return [V.components[0] for V in self.V]

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "surface": self.x.surface.label,
            "d": self.d,
            "R": self.R,
            "lower_bound_conditional_on_R": self.conditional,
            "V": [[list(c.weights) for c in V] for V in self.V],
            "witnesses": [[list(c.weights) for c in W] for W in self.witnesses],
        }


def record_from_dict(d: dict, tri) -> TightGeodesicRecord:
    V = [Multicurve(NormalCurve(tri, w) for w in Vi) for Vi in d["V"]]
    return TightGeodesicRecord(V[0].components[0], V[-1].components[0], V, d.get("R"),
                               d.get("lower_bound_conditional_on_R", False))


def is_tight(rec: TightGeodesicRecord):
    """(True, None) or (False, first index i with V_i != ∂F(V_{i-1}, V_{i+1}))."""
    if rec.d <= 2:
        return True, None
    for i in range(1, rec.d):
        if boundary_of_filling(rec.V[i - 1], rec.V[i + 1]) != rec.V[i]:
            return False, i
    return True, None


def check_multigeodesic(rec: TightGeodesicRecord, R: int = DEFAULT_R) -> list:
    """Pairs (p, q, reason) breaking d(a, b) = |p - q| for a in V_p, b in V_q."""
    bad = []
    d = rec.d
    for p, q in itertools.combinations_with_replacement(range(d + 1), 2):
        for a in rec.V[p]:
            for b in rec.V[q]:
                if p == q:
                    if a != b and intersection_number(a, b):
                        bad.append((p, q, "components meet"))
                    continue
                k = q - p
                I = intersection_number(a, b)
                if k == 1:
                    ok = a != b and I == 0
                elif k == 2:
                    ok = I > 0 and not fills(a, b)
                elif k == 3:
                    # the record itself gives a path of length 3
                    ok = fills(a, b)
                else:
                    got = distance(a, b, R, max_search=k)
                    ok = got.value == k
                if not ok:
                    bad.append((p, q, f"distance is not {k}"))
    return bad


def growth_violations(rec: TightGeodesicRecord, R: int = DEFAULT_R) -> list:
    """Indices p where some v in V_p has i(v, y) > R^p i(x, y)."""
    I = intersection_number(rec.x, rec.y)
    out = []
    for p, V in enumerate(rec.V):
        if any(intersection_number(v, rec.y) > R ** p * I for v in V):
            out.append(p)
    return out


def tighten(path: list, rounds: int = 16):
    """Replace interior vertices by ∂F of their neighbours until nothing moves.

    Each update keeps the multigeodesic property: a component of
    ∂F(V_{i-1}, V_{i+1}) is disjoint from both, hence at distance exactly i
    from x and d - i from y.  Returns None if no fixed point is reached.
    """
    V = [Multicurve([c]) for c in path]
    for _ in range(rounds):
        moved = False
        for i in range(1, len(V) - 1):
            W = boundary_of_filling(V[i - 1], V[i + 1])
            if not len(W):
                return None
            if W != V[i]:
                V[i] = W
                moved = True
        if not moved:
            return V
    return None


def _finish(x, y, V, R, conditional) -> TightGeodesicRecord:
    rec = TightGeodesicRecord(x, y, V, R, conditional)
    rec.witnesses = [boundary_of_filling(V[i - 1], V[i + 1]) for i in range(1, len(V) - 1)]
    return rec


def tight_geodesic(x: NormalCurve, y: NormalCurve, R: int = DEFAULT_R,
                   dist: DistanceResult | None = None, budget: int = DEFAULT_BUDGET) -> TightGeodesicRecord:
    dist = dist or distance(x, y, R, budget)
    if dist.value is None:
        raise SearchError(f"distance not certified: bracket [{dist.lower}, {dist.upper}] at R={R}")
    d = dist.value
    if d <= 1 or dist.method == "farey":
        return _finish(x, y, [Multicurve([c]) for c in dist.path], dist.R, False)
    if d == 2:
        return _finish(x, y, [Multicurve([x]), boundary_of_filling(x, y), Multicurve([y])], None, False)
    counter = _Counter(budget)
    tried = 0
    try:
        for path in _paths(x, y, d, R, counter):
            tried += 1
            V = tighten(path)
            if V is None:
                continue
            rec = _finish(x, y, V, R, True)
            if is_tight(rec)[0]:
                return rec
    except BudgetExceeded:
        raise SearchError(f"budget exhausted after {tried} candidate paths at R={R}")
    I = intersection_number(x, y)
    raise SearchError(f"no tight geodesic among {tried} candidate paths; bounds R*i = {R * I}, R={R}")


# ---------------------------------------------------------------------------
# bounded geodesic image along a geodesic


@dataclass
class Lemma25Report:
    M: int
    pairs: int = 0
    skipped: int = 0
    vacuous: int = 0
    active: int = 0
    violated: list = field(default_factory=list)
    max_dz: int = 0

    @property
    def ok(self):
        return not self.violated

    def to_dict(self):
        return {"M": self.M, "pairs": self.pairs, "skipped": self.skipped, "vacuous": self.vacuous,
                "active": self.active, "violated": len(self.violated), "max_dZ": self.max_dz}


def lemma25_check(rec: TightGeodesicRecord, Z: Subsurface, M: int = 200, table=None) -> Lemma25Report:
    """If d_Z(v_p, v_q) > M then d_Z(x, v_p) <= M and d_Z(v_q, y) <= M, over all p < q.

    ``table`` is an optional memo with ``meets`` and ``d`` (see formula.ProjectionTable).
    """
    vs = rec.vertices
    rep = Lemma25Report(M)
    hits = table.meets if table is not None else meets
    dist = table.d if table is not None else proj_distance
    hit = [hits(Z, v) for v in vs]
    dz = {}

    def D(a, b):
        key = (a, b)
        if key not in dz:
            dz[key] = dist(Z, vs[a], vs[b])
        return dz[key]

    for p, q in itertools.combinations(range(len(vs)), 2):
        if not (hit[p] and hit[q]):
            rep.skipped += 1
            continue
        rep.pairs += 1
        val = D(p, q)
        rep.max_dz = max(rep.max_dz, val)
        if val <= M:
            rep.vacuous += 1
            continue
        rep.active += 1
        left = D(0, p) if hit[0] else 0
        right = D(q, len(vs) - 1) if hit[-1] else 0
        if (left is not UNDEFINED and left > M) or (right is not UNDEFINED and right > M):
            rep.violated.append((p, q, val, left, right))
    return rep


def path_distances_ok(path: list) -> bool:
    """Consecutive vertices of a path are distinct and disjoint."""
    return all(a != b and intersection_number(a, b) == 0 for a, b in zip(path, path[1:]))


def curves_of(rec: TightGeodesicRecord) -> list:
    return [c for V in rec.V for c in as_curves(V)]
