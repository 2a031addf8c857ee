"""Subsurface projections and projection distances.

Regions of S - mu are found by union-find over the edge intervals cut out by
the normal multicurve mu.  A non-annular domain is a multicurve together with
the index of one complementary region.  Curves are projected by surgery along
the arcs of x inside the region.  Annular projections follow the lifts of x
that cross the core, read off the corridor structure in the universal cover.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .curves import (Component, Multicurve, NormalCurve, as_curves,
                     path_class, trace)
from .farey import farey_distance
from .intersection import (Diagram, Oriented, intersection_number, path_along,
                           system_of, twist)
from .surface import SCHEMA_VERSION, Triangulation, edge_of


class DomainError(ValueError):
    pass


UNDEFINED = None  # d_Z when one of the projections is empty


# ---------------------------------------------------------------------------
# complementary regions


class Region:
    def __init__(self, index, pieces, intervals, punctures, sides):
        self.index = index
        self.chi = pieces - intervals
        self.punctures = punctures
        self.sides = sides  # list of (component index, 'L' | 'R')
        b, n = len(sides), punctures
        g2 = 2 - self.chi - b - n
        if g2 < 0 or g2 % 2:
            raise AssertionError("region with impossible topology")
        self.genus = g2 // 2
        self.xi = 3 * self.genus + b + n - 3

    @property
    def is_pants(self):
        return self.genus == 0 and len(self.sides) + self.punctures == 3

    def __repr__(self):
        return f"Region({self.index}, g={self.genus}, b={len(self.sides)}, n={self.punctures})"


class Cut:
    """The complement of a multicurve: regions and curve sides."""

    def __init__(self, mu: Multicurve):
        self.mu = mu
        self.tri = tri = mu.tri
        self.comps = system_of(mu)
        w = mu.weights
        W = lambda s: w[edge_of(s)]
        nodes = {}
        for s in tri.sides:
            for k in range(W(s) + 1):
                nodes[(s, k)] = len(nodes)
        parent = list(range(len(nodes)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for s in tri.sides:
            n, p = tri.nxt[s], tri.prv[s]
            cA = (W(s) + W(p) - W(n)) // 2
            cB = W(s) - cA
            for k in range(cA + 1):
                union(nodes[(s, k)], nodes[(p, W(p) - k)])
            for k in range(cB + 1):
                union(nodes[(s, W(s) - k)], nodes[(n, k)])
        pieces = {find(v) for v in range(len(nodes))}
        for s in range(tri.edge_count):
            for k in range(W(s) + 1):
                union(nodes[(s, k)], nodes[(~s, W(s) - k)])
        self._nodes, self._find = nodes, find
        roots = sorted({find(v) for v in range(len(nodes))})
        self._rid = {r: i for i, r in enumerate(roots)}
        npieces = [0] * len(roots)
        for pr in pieces:
            npieces[self._rid[find(pr)]] += 1
        nint = [0] * len(roots)
        for s in range(tri.edge_count):
            for k in range(W(s) + 1):
                nint[self.region_at(s, k)] += 1
        npunct = [0] * len(roots)
        for cls in tri.vertex_classes:
            npunct[self.region_at(cls[0], 0)] += 1
        sides = [[] for _ in roots]
        self.left, self.right = [], []
        for ci, c in enumerate(self.comps):
            l = self.region_at(c.ent[0], c.eidx[0])
            r = self.region_at(c.ent[0], c.eidx[0] + 1)
            self.left.append(l)
            self.right.append(r)
            sides[l].append((ci, "L"))
            sides[r].append((ci, "R"))
        self.regions = [Region(i, npieces[i], nint[i], npunct[i], sides[i]) for i in range(len(roots))]
        self.comp_class = [NormalCurve(tri, c.weights, check=False) for c in self.comps]

    def region_at(self, s: int, k: int) -> int:
        """Region containing interval k (between points k-1 and k) of side s."""
        return self._rid[self._find(self._nodes[(s, k)])]

    def locate(self, x: NormalCurve) -> int | None:
        """Region containing a curve disjoint from mu (None if x is in mu)."""
        if x in self.comp_class:
            return None
        union_w = [a + b for a, b in zip(self.mu.weights, x.weights)]
        for c in trace(self.tri, union_w):
            if c.weights != x.weights:
                continue
            s, k = c.ent[0], c.eidx[0]
            # points below k on s belonging to mu: trace mu points by position
            below = self._mu_points_below(union_w, c, s, k)
            return self.region_at(s, below)
        raise AssertionError("curve not found in union trace")

    def _mu_points_below(self, union_w, xc: Component, s: int, k: int) -> int:
        comps = trace(self.tri, union_w)
        xpts = set()
        for c in comps:
            if c.weights == xc.weights and c.ent[0] == xc.ent[0] and c.eidx[0] == xc.eidx[0]:
                for t in range(len(c)):
                    xpts.add((c.ent[t], c.eidx[t]))
                    xpts.add((~c.ent[t], union_w[edge_of(c.ent[t])] - 1 - c.eidx[t]))
        return sum(1 for j in range(k) if (s, j) not in xpts)

    def non_pants(self) -> list:
        return [r for r in self.regions if not r.is_pants]


_CUT_CACHE: dict = {}


def cut_of(mu: Multicurve) -> Cut:
    key = (mu.tri, mu.components)
    c = _CUT_CACHE.get(key)
    if c is None:
        if len(_CUT_CACHE) > 4096:
            _CUT_CACHE.clear()
        c = _CUT_CACHE[key] = Cut(mu)
    return c


# ---------------------------------------------------------------------------
# domains


@dataclass(frozen=True)
class Subsurface:
    kind: str  # 'whole', 'nonannular' or 'annular'
    boundary: Multicurve | None = None
    region: int | None = None
    core: NormalCurve | None = None

    @classmethod
    def whole(cls):
        return cls("whole")

    @classmethod
    def annulus(cls, c: NormalCurve):
        return cls("annular", core=c)

    @classmethod
    def complement(cls, mu, region: int | None = None):
        mu = mu if isinstance(mu, Multicurve) else Multicurve(as_curves(mu))
        cut = cut_of(mu)
        cands = cut.non_pants()
        if region is None:
            if len(cands) != 1:
                raise DomainError(f"{len(cands)} non-pants regions; pass a selector")
            region = cands[0].index
        if cut.regions[region].is_pants:
            raise DomainError("a pair of pants is not a projection domain")
        if cut.regions[region].xi < 1:
            raise DomainError("domain complexity below one")
        return cls("nonannular", boundary=mu, region=region)

    @property
    def cut(self) -> Cut:
        return cut_of(self.boundary)

    @property
    def info(self) -> Region:
        return self.cut.regions[self.region]

    @property
    def xi(self) -> int:
        if self.kind == "annular":
            return 0
        if self.kind == "whole":
            return None
        return self.info.xi

    def key(self):
        if self.kind == "whole":
            return ("S",)
        if self.kind == "annular":
            return ("A", self.core.weights)
        return ("Z", tuple(c.weights for c in self.boundary), self.region)

    def label(self) -> str:
        if self.kind == "whole":
            return "S"
        if self.kind == "annular":
            return "A" + ".".join(map(str, self.core.weights))
        return "Z" + "|".join(".".join(map(str, c.weights)) for c in self.boundary) + f"#{self.region}"

    def to_dict(self) -> dict:
        d = {"schema": SCHEMA_VERSION, "kind": self.kind}
        if self.kind == "annular":
            d["core"] = self.core.to_dict()
        elif self.kind == "nonannular":
            d["boundary"] = [c.to_dict() for c in self.boundary]
            d["region"] = self.region
        return d

    def __hash__(self):
        return hash(self.key())

    def __eq__(self, other):
        return isinstance(other, Subsurface) and self.key() == other.key()


def subsurface_from_dict(d: dict, tri: Triangulation) -> Subsurface:
    if d["kind"] == "whole":
        return Subsurface.whole()
    if d["kind"] == "annular":
        return Subsurface.annulus(NormalCurve(tri, d["core"]["weights"]))
    mu = Multicurve(NormalCurve(tri, c["weights"]) for c in d["boundary"])
    return Subsurface.complement(mu, d.get("region"))


# ---------------------------------------------------------------------------
# non-annular projection


def _arc_outcomes(Z: Subsurface, x: NormalCurve, first_only: bool = False, per_arc: bool = False) -> list:
    """Surgery outcomes of the arcs of x in Z, in traversal order along x.

    With ``per_arc`` the result holds one pair (joins_two_sides, outcomes) per arc.
    """
    cut = Z.cut
    tri = x.tri
    D = Diagram([x.component], cut.comps)
    lst = D.along_a[0]
    if not lst:
        r = cut.locate(x)
        inside = [x] if r == Z.region else []
        return [(False, inside)] if per_arc and inside else inside
    mu_set = set(cut.comp_class)
    out = []
    n = len(lst)
    for k in range(n):
        P = D.crossings[lst[k]]
        k2, seg = D.step(0, 0, k, 1)
        Q = D.crossings[lst[k2]]
        tauP, tauQ = -P.sigma, -Q.sigma
        reg = cut.right[P.bi] if tauP == 1 else cut.left[P.bi]
        if reg != Z.region:
            continue
        s1 = (P.bi, "R" if tauP == 1 else "L")
        s2 = (Q.bi, "L" if tauQ == 1 else "R")
        paths = []
        if s1 != s2:
            uQ = P.a_place + _unrolled_gap(D, k, k2, len(x.component))
            back = path_along(x.component, uQ, P.a_place)
            m2 = len(cut.comps[Q.bi])
            m1 = len(cut.comps[P.bi])
            loop2 = path_along(cut.comps[Q.bi], Q.b_place, Q.b_place + Q.sigma * m2)
            loop1 = path_along(cut.comps[P.bi], P.b_place, P.b_place - P.sigma * m1)
            paths.append(seg + loop2 + back + loop1)
        else:
            nP, nQ = lst[k], lst[k2]
            for d in (Q.sigma, -Q.sigma):
                paths.append(seg + _walk_b(D, Q.bi, nQ, nP, d))
        here = []
        for pth in paths:
            kind, w = path_class(tri, pth)
            if kind != "curve":
                continue
            c = NormalCurve(tri, w, check=False)
            if c in mu_set:
                continue
            here.append(c)
        if per_arc:
            out.append((s1 != s2, here))
            continue
        out.extend(here)
        if first_only and out:
            return out
    return out


def arc_regions(mu: Multicurve, x: NormalCurve) -> list:
    """Regions of S - mu entered by the arcs of x, in traversal order along x."""
    cut = cut_of(mu)
    D = Diagram([x.component], cut.comps)
    lst = D.along_a[0]
    if not lst:
        r = cut.locate(x)
        return [] if r is None else [r]
    out = []
    for n in lst:
        P = D.crossings[n]
        out.append(cut.right[P.bi] if P.sigma == -1 else cut.left[P.bi])
    return out


def _unrolled_gap(D: Diagram, k: int, k2: int, m: int) -> int:
    lst = D.along_a[0]
    u = D.crossings[lst[k]].a_place
    v = D.crossings[lst[k2]].a_place + (m if k2 <= k else 0)
    return v - u


def _walk_b(D: Diagram, bi: int, n_from: int, n_to: int, d: int) -> list:
    """Path along B-component bi from crossing n_from to crossing n_to moving in direction d.

    Equal, up to backtracking, to stepping crossing by crossing.
    """
    k, kt = D.pos_b[n_from], D.pos_b[n_to]
    c = D.B[bi]
    m = len(c)
    u = D.crossings[n_from].b_place
    v = D.crossings[n_to].b_place
    if d == 1 and kt <= k:
        v += m
    elif d == -1 and kt >= k:
        v -= m
    return path_along(c, u, v)


def project_nonannular(Z: Subsurface, x) -> Multicurve:
    """π_Z(x): all surgery outcomes of all arcs, as a set of curves."""
    if Z.kind != "nonannular":
        raise DomainError("project_nonannular needs a non-annular proper domain")
    out = set()
    for c in as_curves(x):
        out.update(_arc_outcomes(Z, c))
    return Multicurve(out)


def project_first(Z: Subsurface, x: NormalCurve, exclude=()) -> NormalCurve | None:
    """A single outcome: the first arc of x whose outcome is not excluded."""
    ex = set(exclude)
    for c in _arc_outcomes(Z, x):
        if c not in ex:
            return c
    return None


def meets(Z: Subsurface, x) -> bool:
    """Whether π_Z(x) is nonempty."""
    if Z.kind == "whole":
        return True
    if Z.kind == "annular":
        return any(intersection_number(c, Z.core) > 0 for c in as_curves(x))
    return len(project_nonannular(Z, x)) > 0


# ---------------------------------------------------------------------------
# annular projection


class AnnularLifts:
    """Lifts of x crossing the core c, as pairs of ends on the two sides of c."""

    def __init__(self, c: NormalCurve, x: NormalCurve):
        self.c, self.x = c, x
        D = Diagram([c.component], [x.component])
        self.m = m = len(c.component)
        cc = c.component
        L, R = [], []
        for P in D.crossings:
            xv = Oriented(x.component, P.eps)
            i, j, Lc = P.a_visit, P.b_visit, P.length
            back_c, fwd_c = i - 1, i + Lc - 1
            ends = [(back_c, (xv, j - 2, -1)), (fwd_c, (xv, j + Lc, 1))]
            le = [e for e in ends if cc.turn[e[0] % m] == 1]
            re = [e for e in ends if cc.turn[e[0] % m] == -1]
            assert len(le) == 1 and len(re) == 1
            (lp, li), (rp, ri) = le[0], re[0]
            shift = (lp // m) * m
            L.append((lp - shift, li))
            R.append((rp - shift, ri))
        self.left, self.right = L, R

    def __len__(self):
        return len(self.left)


_ITIN = {}


def _itinerary(end, n: int) -> bytes:
    """Turn sequence leaving an end, encoded so byte order matches -1 < 1."""
    v, start, step = end
    key = (v.comp, v.eps, start % v.m, step, n)
    out = _ITIN.get(key)
    if out is None:
        m, turn = v.m, v.turn
        if step == 1:
            seq = [turn[(start + t) % m] for t in range(n)]
        else:
            seq = [-turn[(start - t) % m] for t in range(n)]
        out = _ITIN[key] = bytes(t + 1 for t in seq)
        if len(_ITIN) > 1 << 14:
            _ITIN.clear()
    return out


def _earlier(e1, e2, side: str, n: int) -> bool:
    """At equal positions: is end e1 earlier along the core than e2."""
    a, b = _itinerary(e1, n), _itinerary(e2, n)
    if a == b:
        return False
    return a < b if side == "L" else a > b


def _n_boundary(pu, eu, pv, ev, m, side, n):
    d = pu - pv
    q, r = divmod(d, m)
    if r == 0 and _earlier(eu, ev, side, n):
        return q
    return q + 1


def annular_pair(U: AnnularLifts, V: AnnularLifts, a: int, b: int) -> int:
    """Signed intersection of lift a of U with lift b of V in the annular cover."""
    m = U.m
    n = len(U.x.component) + len(V.x.component) + 4
    (pl, el), (pr, er) = U.left[a], U.right[a]
    (ql, fl), (qr, fr) = V.left[b], V.right[b]
    NL = _n_boundary(pl, el, ql, fl, m, "L", n)
    NR = _n_boundary(pr, er, qr, fr, m, "R", n)
    return NL - NR


def _signed_matrix(U: AnnularLifts, V: AnnularLifts) -> np.ndarray:
    m = U.m
    n = len(U.x.component) + len(V.x.component) + 4
    pl = np.array([e[0] for e in U.left]); pr = np.array([e[0] for e in U.right])
    ql = np.array([e[0] for e in V.left]); qr = np.array([e[0] for e in V.right])
    dl = pl[:, None] - ql[None, :]
    dr = pr[:, None] - qr[None, :]
    NL = dl // m + 1
    NR = dr // m + 1
    for a, b in zip(*np.nonzero(dl % m == 0)):
        if _earlier(U.left[a][1], V.left[b][1], "L", n):
            NL[a, b] -= 1
    for a, b in zip(*np.nonzero(dr % m == 0)):
        if _earlier(U.right[a][1], V.right[b][1], "R", n):
            NR[a, b] -= 1
    return NL - NR


def relative_twist(c: NormalCurve, x: NormalCurve, y: NormalCurve) -> int:
    """Signed relative twisting of y against x around c (median over lift pairs)."""
    if intersection_number(x, c) == 0 or intersection_number(y, c) == 0:
        raise DomainError("both curves must cross the core")
    S = _signed_matrix(AnnularLifts(c, x), AnnularLifts(c, y))
    return int(np.median(S))


def project_annular(c: NormalCurve, x: NormalCurve, y: NormalCurve) -> int:
    return relative_twist(c, x, y)


def lifts_of(c: NormalCurve, A) -> list:
    return [AnnularLifts(c, a) for a in as_curves(A) if intersection_number(a, c) > 0]


def lifts_distance(lifts: list, lifts_b: list):
    """Diameter in the arc graph of the annulus of two families of lifts."""
    if not lifts or not lifts_b:
        return UNDEFINED
    allL = lifts + lifts_b
    if sum(len(u) for u in allL) <= 1:
        return 0
    best = 1
    for U, V in itertools.combinations_with_replacement(allL, 2):
        S = np.abs(_signed_matrix(U, V))
        best = max(best, 1 + int(S.max()))
    return best


def annular_distance(c: NormalCurve, A, B):
    return lifts_distance(lifts_of(c, A), lifts_of(c, B))


# ---------------------------------------------------------------------------
# Farey charts on complexity-one domains


class FareyChart:
    """Slope coordinates on a complexity-one domain from a basis alpha, beta.

    alpha has slope 1/0, beta slope 0/1 and i(alpha, beta) = eps, where eps is
    1 on a one-holed torus and 2 on a four-holed sphere.  The twist
    T_alpha(beta) fixes the orientation: it has slope t/1 with t = 1 or 2
    (full twists on a four-holed sphere act by p/q -> (p + 2q)/q).
    """

    def __init__(self, Z: Subsurface, seeds=()):
        self.Z = Z
        if Z.kind == "whole":
            self._mu = set()
        elif Z.kind == "nonannular":
            if Z.info.xi != 1:
                raise DomainError("Farey charts need a complexity-one domain")
            self._mu = set(Z.cut.comp_class)
        else:
            raise DomainError("annuli carry no Farey chart")
        self.genus = Z.info.genus if Z.kind == "nonannular" else None
        seeds = sorted(set(seeds))
        if not seeds:
            raise DomainError("chart needs a curve in the domain")
        if Z.kind == "whole":
            spec = seeds[0].surface
            if spec.complexity != 1:
                raise DomainError("whole-surface charts need complexity one")
            self.genus = spec.genus
        self.eps = 1 if self.genus == 1 else 2
        self.t = 1 if self.eps == 1 else 2
        self.tri = seeds[0].tri
        self.alpha = seeds[0]
        self._memo = {}
        self.beta = self._find_partner(seeds)
        self.delta = twist(self.beta, self.alpha, 1)
        self._memo = {self.alpha: (1, 0), self.beta: (0, 1)}
        self._curves = {(1, 0): self.alpha, (0, 1): self.beta}

    def _in_domain_curves(self, cands):
        if self.Z.kind == "whole":
            return list(cands)
        out = []
        for c in cands:
            out.extend(project_nonannular(self.Z, c))
        return out

    def _find_partner(self, seeds) -> NormalCurve:
        a = self.alpha
        pool = [s for s in seeds if intersection_number(s, a) > 0]
        if not pool:
            from .curves import enumerate_curves
            probe = self._in_domain_curves(enumerate_curves(a.tri, 2))
            pool = sorted({s for s in probe if intersection_number(s, a) > 0})
        if not pool:
            raise DomainError("no curve in the domain meets the chart base")
        b = min(pool, key=lambda s: (intersection_number(s, a), s.weights))
        while intersection_number(b, a) > self.eps:
            b = self._reduce(b)
        return b

    def _surgeries(self, b: NormalCurve, a: NormalCurve, spans=(1, 2, 3)):
        """Curves made of one arc of b between crossings with a and one arc of a."""
        tri = a.tri
        D = Diagram([b.component], [a.component])
        lst = D.along_a[0]
        for span in spans:
            found = []
            for k in range(len(lst)):
                kk, seg = k, []
                for _ in range(span):
                    kk, s2 = D.step(0, 0, kk, 1)
                    seg = seg + s2
                if lst[kk] == lst[k]:
                    continue
                for d in (1, -1):
                    pth = seg + _walk_b(D, 0, lst[kk], lst[k], d)
                    kind, w = path_class(tri, pth)
                    if kind != "curve":
                        continue
                    c = NormalCurve(tri, w, check=False)
                    if c not in self._mu:
                        found.append(c)
            yield span, found

    def _reduce(self, b: NormalCurve) -> NormalCurve:
        a = self.alpha
        ib = intersection_number(a, b)
        for _, found in self._surgeries(b, a):
            scored = sorted((intersection_number(c, a), c.weights, c) for c in found)
            scored = [t for t in scored if 0 < t[0] < ib]
            if scored:
                return scored[0][2]
        raise DomainError("surgery failed to lower the intersection with the chart base")

    def slope(self, g: NormalCurve) -> tuple:
        s = self._memo.get(g)
        if s is not None:
            return s
        e, t = self.eps, self.t
        q, qr = divmod(intersection_number(g, self.alpha), e)
        p, pr = divmod(intersection_number(g, self.beta), e)
        r, rr = divmod(intersection_number(g, self.delta), e)
        if qr or pr or rr:
            raise DomainError("intersection numbers not divisible by the domain edge value")
        if q == 0:
            s = (1, 0)
        elif r == abs(p - t * q):
            s = (p, q)
        elif r == p + t * q:
            s = (-p, q)
        else:
            raise DomainError("inconsistent slope coordinates")
        self._memo[g] = s
        return s

    # -- building curves from slopes ---------------------------------------
    def _twisted(self, v, sv, u, su, k):
        """Curve of slope sv + k*su (k a multiple of t) as a twist of v about u."""
        want = _nslope(sv[0] + k * su[0], sv[1] + k * su[1])
        for power in (k // self.t, -k // self.t):
            c = twist(v, u, power)
            if self.slope(c) == want:
                return c
        raise AssertionError("twist did not reach the expected slope")

    def _sum(self, v, sv, u, su):
        """Curve of slope sv + su: resolve every crossing of v and u the same way."""
        want = _nslope(sv[0] + su[0], sv[1] + su[1])
        for sa in (1, -1):
            c = _resolve(v, u, sa)
            if c is not None and self.slope(c) == want:
                return c
        raise AssertionError("resolution did not produce the sum slope")

    def _combine(self, v, sv, u, su, k):
        if k == 0:
            return v
        if self.t == 1 or k % 2 == 0:
            return self._twisted(v, sv, u, su, k)
        w = self._sum(v, sv, u, su)
        sw = (sv[0] + su[0], sv[1] + su[1])
        return self._twisted(w, sw, u, su, k - 1) if k != 1 else w

    def curve(self, p: int, q: int) -> NormalCurve:
        key = _nslope(p, q)
        c = self._curves.get(key)
        if c is not None:
            return c
        p, q = key
        # continued fraction convergents h_n/k_n: h_n = a_n h_{n-1} + h_{n-2}
        h2, c2 = (0, 1), self.beta                # h_{-2}/k_{-2} = 0/1
        h1, c1 = (1, 0), self.alpha               # h_{-1}      = 1/0
        a_, b_ = p, q
        while b_:
            an = a_ // b_
            hn = (h2[0] + an * h1[0], h2[1] + an * h1[1])
            key_n = _nslope(*hn)
            cn = self._curves.get(key_n)
            if cn is None:
                cn = self._combine(c2, h2, c1, h1, an)
                self._curves[key_n] = cn
                self._memo[cn] = key_n
            h2, c2, h1, c1 = h1, c1, hn, cn
            a_, b_ = b_, a_ - an * b_
        return c1

    # -- intersection profile of a curve -------------------------------------
    def arc_slopes(self, y) -> list:
        """Slopes of the arcs of y across the domain, with multiplicity.

        For v in the domain, i(v, y) = sum over the list of |p s - q r|.  An arc
        is listed once per unit of |det| it contributes: eps times for a closed
        curve, once for an arc joining two boundary sides and eps times for an
        arc returning to the side it left.
        """
        out = []
        for c in as_curves(y):
            if self.Z.kind == "whole":
                out.extend([self.slope(c)] * self.eps)
                continue
            for band, outs in _arc_outcomes(self.Z, c, per_arc=True):
                if outs:
                    out.extend([self.slope(outs[0])] * (1 if band else self.eps))
        return out


def _resolve(v: NormalCurve, u: NormalCurve, sa: int):
    """Walk v forwards, turning by sa onto u and by -sa back onto v at each crossing."""
    D = Diagram([v.component], [u.component])
    if not D.crossings:
        return None
    start = state = (0, 0, 0, 1)
    path, seen = [], set()
    while True:
        if state in seen:
            return None
        seen.add(state)
        side, comp, k, d = state
        k2, seg = D.step(side, comp, k, d)
        path.extend(seg)
        n = D.order(side, comp)[k2]
        P = D.crossings[n]
        if side == 0:
            state = (1, P.bi, D.pos_b[n], sa * P.sigma * d)
        else:
            state = (0, P.ai, D.pos_a[n], sa * P.sigma * d)
        if state == start:
            break
    kind, w = path_class(v.tri, path)
    return NormalCurve(v.tri, w, check=False) if kind == "curve" else None


def _nslope(p, q):
    if q < 0 or (q == 0 and p < 0):
        return -p, -q
    return p, q


def _arc_outcome_classes(Z: Subsurface, x: NormalCurve) -> list:
    """One essential outcome per arc of x in Z (a closed x in Z counts as itself)."""
    per_arc = _arc_outcomes(Z, x, per_arc=True)
    return [outs[0] for _, outs in per_arc if outs]


def profile(arcs) -> list:
    """Merge equal arc slopes: list of (r, s, multiplicity) with i = sum m |p s - q r|."""
    cnt = {}
    for r, s in arcs:
        cnt[(r, s)] = cnt.get((r, s), 0) + 1
    return sorted((r, s, m) for (r, s), m in cnt.items())


def profile_value(prof, p: int, q: int, scale: int = 1) -> int:
    return scale * sum(m * abs(p * s - q * r) for r, s, m in prof)


def slopes_below(prof, B: int, scale: int = 1) -> list:
    """All primitive slopes p/q (q >= 0) with scale * sum m |p s - q r| <= B."""
    from fractions import Fraction
    from math import gcd
    out = []
    if profile_value(prof, 1, 0, scale) <= B:
        out.append((1, 0))
    pts = [Fraction(r, s) for r, s, m in prof if s]
    weights = {Fraction(r, s): 0 for r, s, m in prof if s}
    for r, s, m in prof:
        if s:
            weights[Fraction(r, s)] += m * s
    g = lambda tt: scale * sum(m * abs(tt * s - r) for r, s, m in prof)
    if pts:
        gmin = min(g(tt) for tt in pts)
    else:
        gmin = g(Fraction(0))
    if gmin <= 0:
        raise DomainError("profile vanishes somewhere: the curves do not fill the domain")
    qmax = int(B / gmin)
    # weighted median of the breakpoints locates the minimum over p
    order = sorted(weights.items())
    total = sum(wt for _, wt in order)
    acc, med = 0, Fraction(0)
    for tt, wt in order:
        acc += wt
        if 2 * acc >= total:
            med = tt
            break
    for q in range(1, qmax + 1):
        p0 = int(med * q)
        for start, step in ((p0, -1), (p0 + 1, 1)):
            p = start
            while True:
                val = profile_value(prof, p, q, scale)
                if val > B:
                    # convex in p: once past the minimum and above B we can stop
                    if (step == -1 and p <= med * q) or (step == 1 and p >= med * q):
                        break
                elif gcd(abs(p), q) == 1:
                    out.append((p, q))
                p += step
    out.sort(key=lambda sl: (profile_value(prof, *sl, scale=scale), sl[1], sl[0]))
    return out


def farey_diameter(chart: FareyChart, curves) -> int:
    sl = sorted({chart.slope(c) for c in curves})
    best = 0
    for a, b in itertools.combinations(sl, 2):
        best = max(best, farey_distance(a, b))
    return best


# ---------------------------------------------------------------------------
# projection distance


def proj_distance(Z: Subsurface, A, B, whole_distance=None):
    """d_Z(A,B) = diam of π_Z(A) ∪ π_Z(B); UNDEFINED if either is empty."""
    if Z.kind == "annular":
        return annular_distance(Z.core, A, B)
    if Z.kind == "whole":
        if whole_distance is None:
            from .geodesics import distance
            whole_distance = lambda a, b: distance(a, b).value
        curves = sorted(set(as_curves(A)) | set(as_curves(B)))
        return max((whole_distance(a, b) for a, b in itertools.combinations(curves, 2)), default=0)
    pa = project_nonannular(Z, A)
    pb = project_nonannular(Z, B)
    if not len(pa) or not len(pb):
        return UNDEFINED
    allc = list(pa) + list(pb)
    if Z.info.xi == 1:
        chart = FareyChart(Z, allc)
        return farey_diameter(chart, allc)
    raise DomainError("projection distances are implemented for domains of complexity one")


# ---------------------------------------------------------------------------
# domain enumeration and the verification predicates


def domains_from_curves(curves) -> list:
    """Proper domains determined by single curves: annuli and non-pants pieces."""
    out = []
    for c in sorted(set(curves)):
        out.append(Subsurface.annulus(c))
        cut = cut_of(Multicurve([c]))
        for r in cut.non_pants():
            out.append(Subsurface("nonannular", boundary=Multicurve([c]), region=r.index))
    return out


@dataclass
class LipschitzReport:
    checked: int = 0
    undefined: int = 0
    max_value: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def lipschitz_check(x: NormalCurve, y: NormalCurve, domains, table=None) -> LipschitzReport:
    """d_Z(x, y) <= 2 on every domain both project to; ``table`` memoizes projections."""
    if x != y and intersection_number(x, y) > 0:
        raise DomainError("precondition d_S(x,y) <= 1 fails")
    rep = LipschitzReport()
    dist = table.d if table is not None else proj_distance
    for Z in domains:
        if Z.kind == "whole":
            continue
        d = dist(Z, x, y)
        if d is UNDEFINED:
            rep.undefined += 1
            continue
        rep.checked += 1
        rep.max_value = max(rep.max_value, d)
        if d > 2:
            rep.violations.append((Z.label(), d))
    return rep


@dataclass
class BGITReport:
    value: int
    bound: int

    @property
    def ok(self):
        return self.value <= self.bound


def bgit_check(vertices, Z: Subsurface, M: int = 200, table=None) -> BGITReport:
    hits = table.meets if table is not None else meets
    for v in vertices:
        if not hits(Z, v):
            raise DomainError("some vertex misses the domain")
    dist = table.d if table is not None else proj_distance
    d = dist(Z, vertices[0], vertices[-1])
    return BGITReport(d, M)
