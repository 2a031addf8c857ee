"""Pants decompositions and markings built from a filling pair.

Completion grows x one curve at a time by projecting y to a non-pants piece of
the complement, and likewise for y.  Transversals come from projecting the
other curve into the complexity-one window around each pants curve.  Every
intersection bound the construction promises is recorded as a ledger row
(lhs, rhs) and checked in exact integer arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .curves import CurveError, Multicurve, NormalCurve, as_curves
from .intersection import fills, intersection_number
from .projection import Subsurface, _arc_outcomes, arc_regions, cut_of, project_first
from .surface import SCHEMA_VERSION


class MarkingError(RuntimeError):
    """A step the construction guarantees could not be carried out."""


def i_sum(A, B) -> int:
    """Total intersection of two finite collections of curves."""
    return sum(intersection_number(a, b) for a in as_curves(A) for b in as_curves(B))


@dataclass
class LedgerRow:
    step: str
    lhs: int
    rhs: int

    @property
    def slack(self) -> int:
        return self.rhs - self.lhs

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs

    def as_tuple(self):
        return (self.step, self.lhs, self.rhs, self.slack)


@dataclass
class Ledger:
    rows: list = field(default_factory=list)

    def add(self, step, lhs, rhs):
        self.rows.append(LedgerRow(step, int(lhs), int(rhs)))

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def failures(self) -> list:
        return [r for r in self.rows if not r.ok]

    def csv_rows(self) -> list:
        return [r.as_tuple() for r in self.rows]


def complement_domain(mu: Multicurve, y: NormalCurve) -> Subsurface:
    """S - mu: the non-pants piece holding the first arc of y that enters one."""
    cut = cut_of(mu)
    for r in arc_regions(mu, y):
        if not cut.regions[r].is_pants:
            return Subsurface.complement(mu, r)
    raise MarkingError("y enters no non-pants piece of the complement")


def _grow(xs: Multicurve, y: NormalCurve) -> NormalCurve:
    Z = complement_domain(xs, y)
    c = project_first(Z, y, exclude=xs.components)
    if c is None:
        raise MarkingError("every surgery outcome is isotopic into the current multicurve")
    return c


@dataclass
class CompletionTrace:
    xs: list  # x_1 .. x_xi
    ys: list
    ledger: Ledger

    def to_dict(self) -> dict:
        return {
            "x": [[list(c.weights) for c in X] for X in self.xs],
            "y": [[list(c.weights) for c in Y] for Y in self.ys],
            "ledger": self.ledger.csv_rows(),
        }


def pants_completion(x: NormalCurve, y: NormalCurve):
    """Pants decompositions sigma_p ∋ x and tau_p ∋ y with the per-step bounds checked."""
    xi = x.surface.complexity
    if xi < 2:
        raise CurveError("pants completion needs complexity at least two")
    if not fills(x, y):
        raise CurveError("x and y must fill")
    I = intersection_number(x, y)
    X, Y = Multicurve([x]), Multicurve([y])
    xs, ys, led = [X], [Y], Ledger()
    for step in range(1, xi):
        a = _grow(X, y)  # π_{S - x_i}(y)
        b = _grow(Y, x)  # π_{S - y_i}(x)
        Ixy = i_sum(X, Y)
        led.add(f"{step}:new_x_vs_y", i_sum(a, Y), 2 * Ixy)
        led.add(f"{step}:x_vs_new_y", i_sum(X, b), 2 * Ixy)
        led.add(f"{step}:new_x_vs_new_y", i_sum(a, b), 4 * Ixy + 4 * I)
        X, Y = X.union([a]), Y.union([b])
        led.add(f"{step}:growth", i_sum(X, Y), 9 * Ixy + 4 * I)
        xs.append(X)
        ys.append(Y)
    for P in (X, Y):
        if len(P) != xi or any(intersection_number(a, b) for a, b in itertools.combinations(P, 2)):
            raise MarkingError("completion is not a pants decomposition")
    return X, Y, CompletionTrace(xs, ys, led)


def window(pants: Multicurve, a: NormalCurve) -> Subsurface:
    """The complexity-one piece of S - (pants - a) that contains a."""
    rest = Multicurve([c for c in pants if c != a])
    cut = cut_of(rest)
    r = cut.locate(a)
    Z = Subsurface.complement(rest, r)
    if Z.info.xi != 1:
        raise MarkingError("window around a pants curve should have complexity one")
    return Z


def _transversals(pants: Multicurve, other: NormalCurve) -> list:
    out = []
    for a in pants:
        W = window(pants, a)
        outs = _arc_outcomes(W, other)
        if not outs:
            raise MarkingError("empty projection to a complexity-one window")
        # the window of a curve added by completion is the piece it was projected
        # to, so the first outcome can be a itself; take the first one crossing a
        t = next((c for c in outs if intersection_number(c, a) > 0), None)
        if t is None:
            raise MarkingError("no outcome in the window crosses its pants curve")
        out.append((a, t))
    return out


@dataclass
class Marking:
    pants: Multicurve
    transversals: list  # (pants curve, transversal)

    @property
    def curves(self) -> list:
        return list(self.pants) + [t for _, t in self.transversals]

    def transversal_set(self) -> list:
        return [t for _, t in self.transversals]

    def fills(self) -> bool:
        # every curve disjoint from a pants decomposition is one of its curves
        return all(intersection_number(a, t) > 0 for a, t in self.transversals)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "pants": [list(c.weights) for c in self.pants],
            "transversals": [[list(a.weights), list(t.weights)] for a, t in self.transversals],
        }


def add_transversals(sp: Multicurve, tp: Multicurve, x: NormalCurve, y: NormalCurve):
    """Complete sp, tp to markings (a^t = π_W(y), b^t = π_V(x)) with every bound checked."""
    if x not in sp or y not in tp:
        raise CurveError("x must lie in sigma_p and y in tau_p")
    xi = x.surface.complexity
    I = intersection_number(x, y)
    Ip = i_sum(sp, tp)
    led = Ledger()
    s_t = _transversals(sp, y)
    t_t = _transversals(tp, x)
    st = [t for _, t in s_t]
    tt = [t for _, t in t_t]
    led.add("sigma_t_vs_tau_p", i_sum(st, tp), 2 * xi * Ip)
    led.add("sigma_t_vs_x", i_sum(st, x), 2 * xi * I)
    sigma = list(sp) + st
    for k, (b, bt) in enumerate(t_t):
        led.add(f"b{k}:sigma_p_vs_b_t", i_sum(sp, bt), 2 * Ip)
        led.add(f"b{k}:sigma_t_vs_b_t", i_sum(st, bt), 4 * xi * Ip + 4 * xi * I)
        led.add(f"b{k}:sigma_vs_b_t", i_sum(sigma, bt), 6 * xi * (Ip + I))
    led.add("sigma_vs_tau_t", i_sum(sigma, tt), 6 * xi * xi * (Ip + I))
    return Marking(sp, s_t), Marking(tp, t_t), led


@dataclass
class MarkingResult:
    sigma: Marking
    tau: Marking
    completion: CompletionTrace
    transversal_ledger: Ledger
    i_markings: int
    i_pants: int
    i_xy: int

    @property
    def ok(self) -> bool:
        return (self.completion.ledger.ok and self.transversal_ledger.ok
                and self.sigma.fills() and self.tau.fills())

    def ledger_rows(self) -> list:
        rows = [("completion:" + r.step, r.lhs, r.rhs, r.slack) for r in self.completion.ledger.rows]
        rows += [("transversal:" + r.step, r.lhs, r.rhs, r.slack) for r in self.transversal_ledger.rows]
        return rows

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "sigma": self.sigma.to_dict(),
            "tau": self.tau.to_dict(),
            "i_sigma_tau": self.i_markings,
            "i_sigma_p_tau_p": self.i_pants,
            "i_xy": self.i_xy,
            "ledger": self.ledger_rows(),
        }


def marking_from_pair(x: NormalCurve, y: NormalCurve) -> MarkingResult:
    sp, tp, trace = pants_completion(x, y)
    sigma, tau, led = add_transversals(sp, tp, x, y)
    return MarkingResult(sigma, tau, trace, led, i_sum(sigma.curves, tau.curves),
                         i_sum(sp, tp), intersection_number(x, y))
