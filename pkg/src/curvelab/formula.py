"""Cutoff sums over large domains and empirical checks of the intersection bounds.

Domains on a complexity-two surface are S itself, the annulus around a curve c
and the complexity-one piece of S - c.  Domains are gathered from a pool of
core curves c with i(c, x) + i(c, y) below an envelope; that envelope is a
heuristic and every result carries it as a caveat.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from dataclasses import dataclass, field

from .curves import Multicurve, NormalCurve, enumerate_curves
from .farey import farey_distance
from .geodesics import DEFAULT_R, distance
from .intersection import boundary_of_filling, fills, intersection_number
from .projection import (UNDEFINED, DomainError, FareyChart, Subsurface,
                         domains_from_curves, lifts_distance, lifts_of, profile,
                         profile_value, project_nonannular)
from .surface import SCHEMA_VERSION


def cutoff(m: int, n: int) -> int:
    """[m]_n: m when m > n, else 0."""
    if m < 0 or n < 0:
        raise ValueError("cutoff arguments are nonnegative")
    return m if m > n else 0


def log2_cut(m: int, n: int) -> float:
    """log [m]_n with the zero terms dropped (contributing 0)."""
    c = cutoff(m, n)
    return math.log2(c) if c else 0.0


@dataclass(frozen=True)
class ConstantsConfig:
    M: int = 200
    N: int = 6
    R: int = DEFAULT_R
    k13: int | None = None
    k15: int | None = None

    def __post_init__(self):
        if self.N < 4:
            raise ValueError("N must be at least 4 for the non-filling case")
        if self.k13 is not None and self.k13 < self.N + 2 * self.M:
            raise ValueError("k must be at least N + 2M for the tight-geodesic bound")
        if self.k15 is not None and self.k15 < 2 * self.N:
            raise ValueError("k must be at least 2N for the geodesic bound")

    @property
    def k_tight(self) -> int:
        """Smallest k >= N + 2M with k <= 2(k - 2M) and k <= (k - 2M)^2."""
        if self.k13 is not None:
            return self.k13
        k = self.N + 2 * self.M
        while k > 2 * (k - 2 * self.M) or k > (k - 2 * self.M) ** 2:
            k += 1
        return k

    @property
    def k_geo(self) -> int:
        return self.k15 if self.k15 is not None else 2 * self.N

    @property
    def l_geo(self) -> int:
        return self.k_geo // 2

    def to_dict(self) -> dict:
        return {"M": self.M, "N": self.N, "R": self.R, "k_tight": self.k_tight,
                "k_geo": self.k_geo, "l_geo": self.l_geo}


# ---------------------------------------------------------------------------
# projections of many curves to many domains


class ProjectionTable:
    """Memoized projections of curves to domains, shared by a survey and its verifiers."""

    def __init__(self, whole_distance=None):
        self._proj_cache = {}
        self._lifts = {}
        self._charts = {}
        self._d = {}
        self._i = {}
        self._whole = whole_distance or (lambda a, b: distance(a, b).value)

    def i(self, a, b) -> int:
        key = (a, b) if not b < a else (b, a)
        v = self._i.get(key)
        if v is None:
            v = self._i[key] = intersection_number(a, b)
        return v

    def meets(self, W: Subsurface, v: NormalCurve) -> bool:
        if W.kind == "whole":
            return True
        if W.kind == "annular":
            return v != W.core and self.i(v, W.core) > 0
        if len(W.boundary) == 1 and v.surface.complexity == 2:
            # the rest of S - c is empty or a pair of pants, so every curve other
            # than c is either inside W or crosses c along essential arcs of W
            return v != W.boundary.components[0]
        return bool(self._proj(W, v))

    def _proj(self, W, v):
        key = (W, v)
        if key not in self._proj_cache:
            self._proj_cache[key] = list(project_nonannular(W, v))
        return self._proj_cache[key]

    def _lift(self, c, v):
        key = (c, v)
        if key not in self._lifts:
            self._lifts[key] = lifts_of(c, v)
        return self._lifts[key]

    def _diameter(self, W, curves) -> int:
        curves = sorted(set(curves))
        if len(curves) == 1:
            return 0
        eps = 1 if W.info.genus == 1 else 2
        # distinct curves in a complexity-one domain are adjacent iff they meet minimally
        if all(self.i(a, b) == eps for a, b in itertools.combinations(curves, 2)):
            return 1
        ch = self._charts.get(W)
        if ch is None:
            ch = self._charts[W] = FareyChart(W, curves)
        sl = sorted({ch.slope(c) for c in curves})
        return max(farey_distance(s, t) for s, t in itertools.combinations(sl, 2))

    def d(self, W: Subsurface, a: NormalCurve, b: NormalCurve):
        key = (W, a, b) if not b < a else (W, b, a)
        if key in self._d:
            return self._d[key]
        if W.kind == "whole":
            val = 0 if a == b else self._whole(a, b)
        elif W.kind == "annular":
            val = lifts_distance(self._lift(W.core, a), self._lift(W.core, b))
        else:
            pa, pb = self._proj(W, a), self._proj(W, b)
            val = self._diameter(W, pa + pb) if pa and pb else UNDEFINED
        self._d[key] = val
        return val


# ---------------------------------------------------------------------------
# domain enumeration


def envelope(x: NormalCurve, y: NormalCurve, n: int) -> int:
    """Heuristic core-curve bound: i(c, x) + i(c, y) <= 4 (i(x, y) + n)."""
    return 4 * (intersection_number(x, y) + n)


def _weighted_median(prof):
    pts = sorted((Fraction(r, s), m * s) for r, s, m in prof if s)
    if not pts:
        return Fraction(0)
    total = sum(w for _, w in pts)
    acc = 0
    for t, w in pts:
        acc += w
        if 2 * acc >= total:
            return t
    return pts[-1][0]


def _p_interval(prof, q: int, B: int, med: Fraction, span=None):
    """Integers p with value(p, q) <= B form an interval around med * q (convexity).

    ``span`` caps the distance from the centre; needed when the value is flat in p.
    """
    f = lambda p: profile_value(prof, p, q)
    c = math.floor(med * q)
    c = c if f(c) <= f(c + 1) else c + 1
    if f(c) > B:
        return None

    def edge(step):
        lo, hi = 0, 1
        while f(c + step * hi) <= B:
            if span is not None and hi >= span:
                return c + step * span
            lo, hi = hi, 2 * hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if f(c + step * mid) <= B:
                lo = mid
            else:
                hi = mid
        return c + step * lo

    return edge(-1), edge(1)


def _count_below(prof, B, qmax, med, span=None) -> int:
    total = 1 if profile_value(prof, 1, 0) <= B else 0
    for q in range(1, qmax + 1):
        iv = _p_interval(prof, q, B, med, span)
        if iv:
            total += iv[1] - iv[0] + 1
    return total


def bounded_slopes(prof, B: int, limit: int = 400, window: int = 24):
    """Slopes with profile value <= B, at most about ``limit`` of them.

    Returns (slopes, effective bound).  When the full set is larger the bound
    is lowered until it fits; when the profile vanishes (the curves miss part
    of the domain) denominators are capped at ``window``.
    """
    med = _weighted_median(prof)
    pts = [Fraction(r, s) for r, s, m in prof if s] or [Fraction(0)]
    gmin = min(sum(m * abs(t * s - r) for r, s, m in prof) for t in pts + [med])
    qmax = window if gmin == 0 else min(int(B / gmin), 10 ** 6)
    # all points at slope 1/0: the value ignores p, so cap its range as well
    flat = not any(s for _, s, _ in prof)
    span = window if gmin == 0 or flat else None
    Beff = B
    if _count_below(prof, B, qmax, med, span) > limit:
        lo, hi = 0, B
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _count_below(prof, mid, qmax, med, span) <= limit:
                lo = mid
            else:
                hi = mid
        Beff = lo
        if gmin:
            qmax = min(qmax, int(Beff / gmin))
    out = []
    if profile_value(prof, 1, 0) <= Beff:
        out.append((1, 0))
    for q in range(1, qmax + 1):
        iv = _p_interval(prof, q, Beff, med, span)
        if iv:
            out.extend((p, q) for p in range(iv[0], iv[1] + 1) if math.gcd(abs(p), q) == 1)
    out.sort(key=lambda sl: (profile_value(prof, *sl), sl[1], sl[0]))
    return out, Beff


def core_pool(x: NormalCurve, y: NormalCurve, B: int, extra=(), small_weight: int = 1,
              expand: bool = False, limit: int = 400):
    """Core curves c with i(c, x) + i(c, y) <= B.

    The pool holds the small curves, x, y and the extras, plus every curve in
    the envelope disjoint from x, from y or from an extra (read off a Farey
    chart of the complement).  ``expand`` also anchors on the small curves.
    Each chart contributes at most about ``limit`` curves; returns the sorted
    pool and the smallest bound actually enumerated to.
    """
    tri = x.tri
    small = set(enumerate_curves(tri, small_weight))
    pool = small | {x, y} | set(extra)
    anchors = sorted({x, y} | set(extra) | (small if expand else set()))
    effective = B
    for s in anchors:
        try:
            Z = Subsurface.complement(Multicurve([s]))
        except DomainError:
            continue
        arcs = [v for v in (x, y) if v != s and len(project_nonannular(Z, v))]
        if not arcs:
            continue
        seeds_in = [c for v in arcs for c in project_nonannular(Z, v)]
        ch = FareyChart(Z, seeds_in)
        prof = profile(ch.arc_slopes(arcs))
        slopes, Beff = bounded_slopes(prof, B, limit)
        effective = min(effective, Beff)
        for p, q in slopes:
            pool.add(ch.curve(p, q))
    out = [c for c in pool if intersection_number(c, x) + intersection_number(c, y) <= B]
    return sorted(out), effective


def domains_of(cores) -> list:
    return [Subsurface.whole()] + domains_from_curves(cores)


@dataclass
class DomainValue:
    domain: Subsurface
    d: int
    outside_filling: bool = False
    bracket: tuple | None = None  # (lower, upper) when d is not certified

    def exceeds(self, n: int) -> bool:
        if self.bracket is not None and self.bracket[1] is not None and self.bracket[1] <= n:
            return False
        return self.d is not UNDEFINED and self.d > n

    @property
    def kind(self):
        return self.domain.kind

    def to_dict(self):
        return {"domain": self.domain.label(), "kind": self.kind, "d": self.d,
                "outside_F": self.outside_filling}


@dataclass
class DomainSurvey:
    """All enumerated domains where x and y both project, with d_W(x, y)."""
    x: NormalCurve
    y: NormalCurve
    values: list
    bound: int
    pool_size: int
    effective_bound: int
    whole_certified: bool
    nonfill_violations: list = field(default_factory=list)
    table: ProjectionTable | None = None

    def caveat(self) -> dict:
        return {"core_bound": self.bound, "effective_core_bound": self.effective_bound,
                "pool_size": self.pool_size, "complete": False,
                "note": "domain list is complete only up to the heuristic core-curve envelope",
                "whole_distance_certified": self.whole_certified}

    def large(self, n: int) -> list:
        out = []
        for v in self.values:
            if not v.exceeds(n):
                continue
            if v.outside_filling and n >= 4:
                continue  # [d_W]_n vanishes outside F(x, y) once n >= 4
            out.append(v)
        return out


def survey(x: NormalCurve, y: NormalCurve, n: int, extra=(), table: ProjectionTable | None = None,
           bound: int | None = None, R: int = DEFAULT_R, d_whole=None, expand: bool = False,
           limit: int = 400) -> DomainSurvey:
    """``d_whole`` is a known DistanceResult for (x, y); otherwise it is computed."""
    if x.surface.complexity != 2:
        raise DomainError("domain enumeration is certified on complexity two only")
    B = bound if bound is not None else envelope(x, y, n)
    cores, Beff = core_pool(x, y, B, extra, expand=expand, limit=limit)
    doms = domains_of(cores)
    dS = d_whole if d_whole is not None else distance(x, y, R)
    whole = DomainValue(Subsurface.whole(), dS.value)
    if dS.value is None:
        # only the bracket is known; the lower end stands in for the value
        whole = DomainValue(Subsurface.whole(), dS.lower, bracket=(dS.lower, dS.upper))
    table = table or ProjectionTable()
    dF = None
    if intersection_number(x, y) > 0 and not fills(x, y):
        dF = boundary_of_filling(x, y)
    vals, bad = [], []
    for W in doms:
        if W.kind == "whole":
            vals.append(whole)
            continue
        if not (table.meets(W, x) and table.meets(W, y)):
            continue
        val = table.d(W, x, y)
        if val is UNDEFINED:
            continue
        outside = bool(dF is not None and any(table.meets(W, c) for c in dF))
        if outside and val > 4:
            bad.append((W.label(), val))
        vals.append(DomainValue(W, val, outside))
    return DomainSurvey(x, y, vals, B, len(cores), Beff, dS.value is not None, bad, table)


def large_domains(x: NormalCurve, y: NormalCurve, n: int, **kw) -> list:
    """Domains W with both projections nonempty and d_W(x, y) > n."""
    return survey(x, y, n, **kw).large(n)


@dataclass
class CutoffSum:
    n: int
    nonannular: list  # (label, d)
    annular: list
    caveat: dict

    @property
    def total(self) -> float:
        return (sum(cutoff(d, self.n) for _, d in self.nonannular)
                + sum(log2_cut(d, self.n) for _, d in self.annular))

    def to_dict(self) -> dict:
        return {"schema": SCHEMA_VERSION, "n": self.n, "total": self.total,
                "nonannular": self.nonannular, "annular": self.annular, "caveat": self.caveat}


def cutoff_sum_from(sv: DomainSurvey, n: int) -> CutoffSum:
    big = sv.large(n)
    na = [(v.domain.label(), v.d) for v in big if v.kind != "annular"]
    an = [(v.domain.label(), v.d) for v in big if v.kind == "annular"]
    return CutoffSum(n, na, an, sv.caveat())


def cutoff_sum(x: NormalCurve, y: NormalCurve, n: int, config: ConstantsConfig | None = None, **kw) -> CutoffSum:
    config = config or ConstantsConfig()
    if n < config.N:
        raise ValueError(f"cutoff {n} is below the configured N = {config.N}")
    return cutoff_sum_from(survey(x, y, n, **kw), n)


# ---------------------------------------------------------------------------
# intersection bounds along geodesics


def _log2(v: int) -> float:
    return math.log2(v) if v > 0 else float("-inf")


def _verts(rec_or_path) -> list:
    """Vertex multicurves of a record, or singletons of a bare path."""
    if hasattr(rec_or_path, "V"):
        return [list(V) for V in rec_or_path.V]
    return [[v] for v in rec_or_path]


@dataclass
class Thm13Report:
    ratios: list = field(default_factory=list)  # (p, q, i(v_p, v_q), rho)
    domains_checked: int = 0
    active: int = 0
    violations: list = field(default_factory=list)
    whole_violations: list = field(default_factory=list)
    caveat: dict = field(default_factory=dict)

    @property
    def max_ratio(self) -> float:
        return max((r for *_, r in self.ratios), default=0.0)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.whole_violations


def exponent_ratios(rec) -> list:
    """(p, q, i(v_p, v_q), log i(v_p, v_q) / log i(x, y)) over all p < q and components.

    Disjoint pairs are skipped; i = 1 gives ratio 0.
    """
    V = _verts(rec)
    I = intersection_number(V[0][0], V[-1][0])
    out = []
    for p, q in itertools.combinations(range(len(V)), 2):
        for a in V[p]:
            for b in V[q]:
                ipq = intersection_number(a, b)
                if ipq:
                    out.append((p, q, ipq, math.log2(ipq) / math.log2(I)))
    return out


def verify_thm_1_3(rec, config: ConstantsConfig | None = None, table: ProjectionTable | None = None,
                   surveyed: DomainSurvey | None = None) -> Thm13Report:
    """Exponent ratios log i(v_p, v_q) / log i(x, y) and the shifted domain inequalities."""
    config = config or ConstantsConfig()
    x, y, d = rec.x, rec.y, rec.d
    I = intersection_number(x, y)
    if d < 2 or I < 2:
        raise ValueError("needs a certified record with d >= 2 and i(x, y) >= 2")
    rep = Thm13Report()
    V = _verts(rec)
    rep.ratios = exponent_ratios(rec)
    k, M = config.k_tight, config.M
    # the whole-surface term: d_S(v_p, v_q) = q - p along a geodesic
    for p, q in itertools.combinations(range(d + 1), 2):
        if cutoff(q - p, k) > cutoff(d, k - 2 * M):
            rep.whole_violations.append((p, q))
    reps = [Vi[0] for Vi in V]
    surveyed = surveyed or survey(x, y, config.N, extra=[c for Vi in V for c in Vi])
    rep.caveat = surveyed.caveat()
    table = table or surveyed.table or ProjectionTable()
    for dv in surveyed.values:
        W = dv.domain
        if W.kind == "whole":
            continue
        rep.domains_checked += 1
        for p, q in itertools.combinations(range(d + 1), 2):
            a, b = reps[p], reps[q]
            if not (table.meets(W, a) and table.meets(W, b)):
                continue
            dpq = table.d(W, a, b)
            if dpq is UNDEFINED or cutoff(dpq, k) == 0:
                continue
            rep.active += 1
            dxy = dv.d
            ok = (dxy >= dpq - 2 * M
                  and cutoff(dpq, k) <= 2 * cutoff(dxy, k - 2 * M)
                  and log2_cut(dpq, k) <= 2 * log2_cut(dxy, k - 2 * M))
            if not ok:
                rep.violations.append((W.label(), p, q, dpq, dxy))
    return rep


def _conv_i(path: list, a: int, b: int) -> int:
    """i(v_a, v_b) with i(x, v_1) = i(v_{d-1}, y) = 1."""
    d = len(path) - 1
    if {a, b} in ({0, 1}, {d - 1, d}):
        return 1
    return intersection_number(path[a], path[b])


def _pq_product(path, p) -> int:
    return _conv_i(path, 0, p) * _conv_i(path, p, len(path) - 1)


@dataclass
class Thm15Report:
    taus: list = field(default_factory=list)  # (p, q, tau)
    covering_checked: int = 0
    covering_failures: list = field(default_factory=list)
    halving_active: int = 0
    halving_violations: list = field(default_factory=list)
    caveat: dict = field(default_factory=dict)

    @property
    def max_tau(self) -> float:
        return max((t for *_, t in self.taus), default=0.0)

    @property
    def ok(self) -> bool:
        return not self.covering_failures and not self.halving_violations


def verify_thm_1_5(path: list, config: ConstantsConfig | None = None,
                   table: ProjectionTable | None = None, surveyed: DomainSurvey | None = None) -> Thm15Report:
    """Exponent ratios for |p - q| > 2, the covering W^p ∪ W^q and the halving inequalities."""
    config = config or ConstantsConfig()
    d = len(path) - 1
    if d < 5:
        raise ValueError("geodesic must have length at least 5")
    x, y = path[0], path[-1]
    I = intersection_number(x, y)
    rep = Thm15Report()
    inner = range(1, d)
    pairs = [(p, q) for p, q in itertools.combinations(inner, 2) if q - p > 2]
    for p, q in pairs:
        prod = _pq_product(path, p) * _pq_product(path, q)
        if prod > 1 and I > 1:
            rep.taus.append((p, q, math.log2(I) / math.log2(prod)))
    surveyed = surveyed or survey(x, y, config.N, extra=path)
    rep.caveat = surveyed.caveat()
    table = table or surveyed.table or ProjectionTable()
    k, l = config.k_geo, config.l_geo
    for dv in surveyed.values:
        W = dv.domain
        if W.kind == "whole":
            continue
        for p, q in pairs:
            rep.covering_checked += 1
            inp, inq = table.meets(W, path[p]), table.meets(W, path[q])
            if not (inp or inq):
                rep.covering_failures.append((W.label(), p, q))
        if cutoff(dv.d, k) == 0:
            continue
        for r in sorted({p for pq in pairs for p in pq}):
            if not table.meets(W, path[r]):
                continue
            rep.halving_active += 1
            a = table.d(W, x, path[r])
            b = table.d(W, path[r], y)
            ok = (cutoff(dv.d, k) <= 2 * (cutoff(a, l) + cutoff(b, l))
                  and log2_cut(dv.d, k) <= 2 * (log2_cut(a, l) + log2_cut(b, l)))
            if not ok:
                rep.halving_violations.append((W.label(), r, dv.d, a, b))
    return rep


def vertex_products(path: list) -> list:
    """[i(x, v_p) i(v_p, y) for p = 1 .. d-1] with the conventions at both ends."""
    return [_pq_product(path, p) for p in range(1, len(path) - 1)]


def consecutive_block(idx: list, width: int = 3) -> bool:
    """Whether the indices fit in ``width`` consecutive positions."""
    return not idx or (max(idx) - min(idx) < width)


LOG_TOL = 1e-9  # fitted exponents are attained exactly, so ties must survive rounding


def _pow_le(a: float, b: float, e: float) -> bool:
    """a <= b^e, compared in log space."""
    return math.log(a) <= e * math.log(b) + LOG_TOL


def cor_1_6_exceptions_from(I: int, products: list, V_hat: float) -> list:
    """Indices p (1-based) with I > product_p^(2V)."""
    return [p + 1 for p, pr in enumerate(products) if not _pow_le(I, pr, 2 * V_hat)]


def cor_1_6_exceptions(path: list, V_hat: float) -> list:
    """Indices p with i(x, y) > (i(x, v_p) i(v_p, y))^(2V)."""
    I = intersection_number(path[0], path[-1])
    return cor_1_6_exceptions_from(I, vertex_products(path), V_hat)


def cor_1_6_check(path: list, V_hat: float) -> bool:
    return consecutive_block(cor_1_6_exceptions(path, V_hat))


@dataclass
class Cor17Report:
    pair_failures: list = field(default_factory=list)
    exceptions: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.pair_failures and consecutive_block(self.exceptions)


def cor_1_7_from(I: int, products: list, U_hat: float, V_hat: float) -> Cor17Report:
    rep = Cor17Report()
    d = len(products) + 1
    for p, q in itertools.combinations(range(1, d), 2):
        if q - p <= 2:
            continue
        prod = products[p - 1] * products[q - 1]
        if not (_pow_le(prod, I, 4 * U_hat) and _pow_le(I, prod, V_hat)):
            rep.pair_failures.append((p, q))
    for p in range(1, d):
        prod = products[p - 1]
        if not (_pow_le(prod, I, 2 * U_hat) and _pow_le(I, prod, 2 * V_hat)):
            rep.exceptions.append(p)
    return rep


def cor_1_7_check(path: list, U_hat: float, V_hat: float) -> Cor17Report:
    """Two-sided bounds along a tight geodesic with fitted exponents."""
    I = intersection_number(path[0], path[-1])
    return cor_1_7_from(I, vertex_products(path), U_hat, V_hat)
