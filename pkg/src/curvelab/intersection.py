"""Geometric intersection numbers, crossing diagrams, twists and ∂F(A,B).

Two normal curves that enter a triangle through the same side run side by side
along a *corridor* of triangles until their turns differ.  In the universal
cover the corridor is where two lifts are adjacent; the lifts cross exactly
when they swap sides between the ends of the corridor.  Counting linked
corridors over all start positions gives i(a, b) directly.  No bigons can
occur because crossings are counted between lifts, never between arcs.

The order of parallel strands on an edge is the lexicographic order of their
forward turn sequences (a right turn, +1, is higher).  Turn sequences are
periodic, so their order is decided by prefix doubling.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .curves import (Component, CurveError, Multicurve, NormalCurve, as_curves,
                     path_class, trace)
from .surface import SCHEMA_VERSION


# ---------------------------------------------------------------------------
# oriented views and periodic ranks


class Oriented:
    """A component read forwards (eps=+1) or backwards (eps=-1)."""

    __slots__ = ("comp", "eps", "m", "ent", "eidx", "xidx", "turn")

    def __init__(self, comp: Component, eps: int):
        self.comp, self.eps, self.m = comp, eps, len(comp)
        if eps == 1:
            self.ent, self.eidx, self.xidx, self.turn = comp.ent, comp.eidx, comp.xidx, comp.turn
        else:
            self.ent = comp.ext[::-1]
            self.eidx = comp.xidx[::-1]
            self.xidx = comp.eidx[::-1]
            self.turn = tuple(-t for t in comp.turn[::-1])

    def fwd(self, t: int) -> int:
        """Forward visit index of oriented visit t (unrolled)."""
        return t if self.eps == 1 else self.m - 1 - t


PREFIX_BYTES = 1 << 20  # above this many key bytes, rank by doubling instead


def periodic_ranks(words: list) -> list:
    """Rank every rotation of every cyclic +-1 word as an infinite sequence.

    Two periodic sequences with periods m, n that agree on m + n symbols agree
    forever (Fine and Wilf), so any prefix order at that length is exact.
    Equal sequences share a rank.  Small inputs sort byte prefixes directly;
    large ones use prefix doubling, which avoids the quadratic key size.
    """
    lens = [len(w) for w in words]
    top = sorted(lens)[-2:]
    need = sum(top) if len(top) == 2 else 2 * top[0]
    if sum(lens) * need > PREFIX_BYTES:
        return _doubling_ranks(words, lens, need)
    keys = []
    for w, m in zip(words, lens):
        b = bytes(t + 1 for t in w) * (need // m + 2)
        keys.append([b[t:t + need] for t in range(m)])
    rank = {k: r for r, k in enumerate(sorted({k for ks in keys for k in ks}))}
    return [[rank[k] for k in ks] for ks in keys]


def _doubling_ranks(words, lens, need):
    ln = np.array(lens)
    m = np.repeat(ln, ln)
    start = np.repeat(np.cumsum(ln) - ln, ln)
    pos = np.arange(len(m)) - start
    r = (np.concatenate([np.asarray(w, dtype=np.int64) for w in words]) + 1) // 2
    step = 1
    while step < need:
        r2 = r[start + (pos + step) % m]
        order = np.lexsort((r2, r))
        a, b = r[order], r2[order]
        new = np.empty_like(r)
        new[order] = np.cumsum(np.r_[0, (a[1:] != a[:-1]) | (b[1:] != b[:-1])])
        r = new
        step *= 2
    flat = r.tolist()
    out, k = [], 0
    for n in lens:
        out.append(flat[k:k + n])
        k += n
    return out


# ---------------------------------------------------------------------------
# systems of components sharing coordinates


def system_of(A) -> list:
    """Components of a curve or multicurve traced jointly, with their classes."""
    if isinstance(A, NormalCurve):
        return [A.component]
    curves = as_curves(A)
    if len(curves) == 1:
        return [curves[0].component]
    tri = curves[0].tri
    w = [sum(ws) for ws in zip(*(c.weights for c in curves))]
    return trace(tri, w)


def _strands(views, ranks):
    """Per side: lists of (back_turn, rank, view index, visit)."""
    out: dict = {}
    for vi, (v, rk) in enumerate(zip(views, ranks)):
        m = v.m
        for t in range(m):
            out.setdefault(v.ent[t], []).append((v.turn[t - 1], rk[t], vi, t))
    return out


def _linked_count(A: list, B: list) -> int:
    av = [Oriented(c, 1) for c in A]
    bv = [Oriented(c, e) for c in B for e in (1, -1)]
    ranks = periodic_ranks([v.turn for v in av + bv])
    sa = _strands(av, ranks[:len(av)])
    sb = _strands(bv, ranks[len(av):])
    total = 0
    for s, alist in sa.items():
        blist = sb.get(s)
        if not blist:
            continue
        b_hi = sorted(r for bt, r, _, _ in blist if bt == 1)
        b_lo = sorted(r for bt, r, _, _ in blist if bt == -1)
        # a high before and b low before: linked iff a ends lower
        for bt, r, _, _ in alist:
            if bt == 1:
                total += len(b_lo) - bisect.bisect_right(b_lo, r)
            else:
                total += bisect.bisect_left(b_hi, r)
    return total


@lru_cache(maxsize=1 << 15)
def _pair_number(a: NormalCurve, b: NormalCurve) -> int:
    return _linked_count([a.component], [b.component])


def intersection_number(a, b) -> int:
    """i(a, b); for multicurves the sum over component pairs."""
    if isinstance(a, NormalCurve) and isinstance(b, NormalCurve):
        if a.tri != b.tri:
            raise CurveError("curves live on different triangulations")
        return _pair_number(a, b) if not b < a else _pair_number(b, a)
    A, B = as_curves(a), as_curves(b)
    if not A or not B:
        return 0
    if A[0].tri != B[0].tri:
        raise CurveError("curves live on different triangulations")
    return _linked_count([c.component for c in A], [c.component for c in B])


def i(a, b) -> int:
    return intersection_number(a, b)


# ---------------------------------------------------------------------------
# crossing diagrams


@dataclass
class Crossing:
    ai: int
    bi: int
    a_place: int
    a_ell: int
    a_key: int
    b_place: int
    b_ell: int
    b_key: int
    sigma: int  # +1 when b (forwards) crosses a from a's left to its right
    a_visit: int
    b_visit: int
    eps: int
    length: int


class Diagram:
    """Crossings between the components of two systems, ordered along each."""

    def __init__(self, A: list, B: list):
        self.A, self.B = A, B
        self.crossings: list = []
        av = [Oriented(c, 1) for c in A]
        bv = [Oriented(c, e) for c in B for e in (1, -1)]
        if A and B:
            ranks = periodic_ranks([v.turn for v in av + bv])
            sa = _strands(av, ranks[:len(av)])
            sb = _strands(bv, ranks[len(av):])
            for s, alist in sa.items():
                blist = sb.get(s)
                if not blist:
                    continue
                hi = sorted((r, vi, t) for bt, r, vi, t in blist if bt == 1)
                lo = sorted((r, vi, t) for bt, r, vi, t in blist if bt == -1)
                hi_r = [x[0] for x in hi]
                lo_r = [x[0] for x in lo]
                for bt, r, ai, t in alist:
                    if bt == 1:
                        partners = lo[bisect.bisect_right(lo_r, r):]
                    else:
                        partners = hi[:bisect.bisect_left(hi_r, r)]
                    for _, vi, tb in partners:
                        self.crossings.append(self._make(av[ai], ai, t, bv[vi], vi // 2, tb))
        self.along_a = [[] for _ in A]
        self.along_b = [[] for _ in B]
        for n, P in enumerate(self.crossings):
            self.along_a[P.ai].append(n)
            self.along_b[P.bi].append(n)
        for lst in self.along_a:
            lst.sort(key=lambda n: (self.crossings[n].a_ell, self.crossings[n].a_key))
        for lst in self.along_b:
            lst.sort(key=lambda n: (self.crossings[n].b_ell, self.crossings[n].b_key))
        self.pos_a = {}
        self.pos_b = {}
        for lst in self.along_a:
            for k, n in enumerate(lst):
                self.pos_a[n] = k
        for lst in self.along_b:
            for k, n in enumerate(lst):
                self.pos_b[n] = k

    @staticmethod
    def _make(a: Oriented, ai: int, i: int, b: Oriented, bi: int, j: int) -> Crossing:
        ma, mb = a.m, b.m
        L = 1
        limit = ma + mb + 2
        while a.turn[(i + L - 1) % ma] == b.turn[(j + L - 1) % mb]:
            L += 1
            if L > limit:
                raise AssertionError("parallel strands reported as linked")
        back_a, fwd_a = i - 1, i + L - 1
        back_b, fwd_b = j - 1, j + L - 1
        a_high_back = a.turn[back_a % ma] == 1
        if a_high_back:
            a_ell, a_key = back_a, -b.eidx[back_b % mb]
        else:
            a_ell, a_key = fwd_a, -b.xidx[fwd_b % mb]
        comp_b = b.comp
        if comp_b.turn[b.fwd(back_b) % mb] == 1:
            b_ell, b_key = b.fwd(back_b), -a.eidx[back_a % ma]
        else:
            b_ell, b_key = b.fwd(fwd_b), -a.xidx[fwd_a % ma]
        a_place, b_place = i, b.fwd(j)
        sa = (a_ell // ma) * ma
        sb = (b_ell // mb) * mb
        sigma = b.eps if a_high_back else -b.eps
        return Crossing(ai, bi, a_place - sa, a_ell - sa, a_key, b_place - sb, b_ell - sb, b_key,
                        sigma, i % ma, j % mb, b.eps, L)

    def __len__(self):
        return len(self.crossings)

    # -- walking -------------------------------------------------------
    def order(self, side: int, comp: int) -> list:
        return self.along_a[comp] if side == 0 else self.along_b[comp]

    def place(self, side: int, n: int) -> int:
        P = self.crossings[n]
        return P.a_place if side == 0 else P.b_place

    def step(self, side: int, comp: int, k: int, d: int):
        """From position k on a component move one crossing in direction d.

        Returns (new position, entries walked, unrolled place of the target).
        """
        lst = self.order(side, comp)
        c = (self.A if side == 0 else self.B)[comp]
        m = len(c)
        u = self.place(side, lst[k])
        k2 = k + d
        wrap = 0
        if k2 >= len(lst):
            k2, wrap = 0, m
        elif k2 < 0:
            k2, wrap = len(lst) - 1, -m
        v = self.place(side, lst[k2]) + wrap
        return k2, path_along(c, u, v)

    def faces(self) -> list:
        """Boundary paths of a regular neighbourhood of the crossing graph."""
        seen = set()
        out = []
        for side, orders in ((0, self.along_a), (1, self.along_b)):
            for comp, lst in enumerate(orders):
                for k in range(len(lst)):
                    for d in (1, -1):
                        if (side, comp, k, d) in seen:
                            continue
                        out.append(self._face(side, comp, k, d, seen))
        return out

    def _face(self, side, comp, k, d, seen) -> list:
        path: list = []
        start = (side, comp, k, d)
        state = start
        guard = 4 * len(self.crossings) + 4
        while True:
            seen.add(state)
            side, comp, k, d = state
            k2, seg = self.step(side, comp, k, d)
            path.extend(seg)
            n = self.order(side, comp)[k2]
            P = self.crossings[n]
            if side == 0:
                state = (1, P.bi, self.pos_b[n], d * P.sigma)
            else:
                state = (0, P.ai, self.pos_a[n], -d * P.sigma)
            if state == start:
                return path
            guard -= 1
            if guard < 0:
                raise AssertionError("face walk did not close")

    def bigons(self) -> list:
        """Pairs of crossings cobounding an embedded disc of an a-arc and a b-arc."""
        tri = (self.A or self.B)[0].tri
        found = []
        for ai, lst in enumerate(self.along_a):
            for k in range(len(lst)):
                k2, seg_a = self.step(0, ai, k, 1)
                n1, n2 = lst[k], lst[k2]
                if n1 == n2:
                    continue
                P, Q = self.crossings[n1], self.crossings[n2]
                if P.bi != Q.bi:
                    continue
                blist = self.along_b[P.bi]
                kb = self.pos_b[n2]
                for d in (1, -1):
                    kb2, seg_b = self.step(1, P.bi, kb, d)
                    if blist[kb2] == n1 and path_class(tri, seg_a + seg_b)[0] == "trivial":
                        found.append((n1, n2))
        return found

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "crossings": [
                {"a": P.ai, "b": P.bi, "a_visit": P.a_visit, "b_visit": P.b_visit,
                 "corridor": P.length, "sign": P.sigma,
                 "order_a": self.pos_a[n], "order_b": self.pos_b[n]}
                for n, P in enumerate(self.crossings)
            ],
            "bigons": len(self.bigons()),
        }


def path_along(c: Component, u: int, v: int) -> list:
    """Entry sides walked along c from unrolled visit u to v."""
    m, ent = len(c), c.ent
    if v >= u:
        return [ent[t % m] for t in range(u + 1, v + 1)]
    return [~ent[t % m] for t in range(u, v, -1)]


def minimal_position(a, b) -> Diagram:
    return Diagram(system_of(a), system_of(b))


# ---------------------------------------------------------------------------
# twists


def twist(x: NormalCurve, c: NormalCurve, k: int) -> NormalCurve:
    """k-th Dehn twist of x about c; positive twists turn left onto c."""
    if k == 0:
        return x
    D = Diagram([x.component], [c.component])
    if not D.crossings:
        return x
    lst = D.along_a[0]
    m_c = len(c.component)
    path: list = []
    for k0 in range(len(lst)):
        k2, seg = D.step(0, 0, k0, 1)
        path.extend(seg)
        P = D.crossings[lst[k2]]
        d = -P.sigma if k > 0 else P.sigma
        pb = P.b_place
        path.extend(path_along(c.component, pb, pb + d * abs(k) * m_c))
    kind, w = path_class(x.tri, path)
    if kind != "curve":
        raise AssertionError("twist produced an inessential path")
    return NormalCurve(x.tri, w, check=False)


# ---------------------------------------------------------------------------
# filling


def face_curves(A, B) -> list:
    """Essential non-peripheral boundary classes of N(A ∪ B), without repeats.

    Components of either system that meet nothing in the other contribute
    themselves (an annulus whose two boundaries are the curve).
    """
    SA, SB = system_of(A), system_of(B)
    tri = (SA or SB)[0].tri
    D = Diagram(SA, SB)
    out = set()
    for path in D.faces():
        kind, w = path_class(tri, path)
        if kind == "curve":
            out.add(NormalCurve(tri, w, check=False))
    for comps, orders in ((SA, D.along_a), (SB, D.along_b)):
        for c, lst in zip(comps, orders):
            if not lst and not c.peripheral:
                out.add(NormalCurve(tri, c.weights, check=False))
    return sorted(out)


def boundary_of_filling(A, B) -> Multicurve:
    """∂F(A,B) as a multicurve; empty exactly when A and B fill."""
    return Multicurve(face_curves(A, B))


def fills(a, b) -> bool:
    return len(face_curves(a, b)) == 0


@dataclass
class FillingSubsurface:
    boundary: Multicurve
    whole: bool

    def to_dict(self):
        return {"schema": SCHEMA_VERSION, "whole_surface": self.whole, "boundary": self.boundary.to_dict()}


def filling_subsurface(A, B) -> FillingSubsurface:
    bd = boundary_of_filling(A, B)
    return FillingSubsurface(bd, len(bd) == 0)
