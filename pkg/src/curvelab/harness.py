"""Seeded experiment suites, deterministic CSV/JSON output and constant estimates.

A suite is a per-sample function (pure in the plan and the sample index) and a
reduction over the samples.  Samples run in a worker pool when
CURVELAB_WORKERS > 1 and are merged by index, so output does not depend on
the number of workers.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import multiprocessing
import os
import time
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache
from pathlib import Path

import numpy as np

from .curves import (Multicurve, apply_word, base_curve, enumerate_curves,
                     make_rng, random_filling_pair, random_word,
                     second_base_curve, slope_curve)
from .formula import (ConstantsConfig, consecutive_block, cor_1_6_exceptions_from,
                      cor_1_7_from, cutoff_sum_from, exponent_ratios, survey,
                      vertex_products, verify_thm_1_3, verify_thm_1_5)
from .geodesics import (DEFAULT_BUDGET, DistanceResult, SearchError, _chart,
                        check_multigeodesic, curves_of, distance,
                        growth_violations, is_tight, lemma25_check,
                        neighbour_candidates, tight_geodesic,
                        TightGeodesicRecord)
from .intersection import fills, intersection_number, twist
from .markings import marking_from_pair
from .projection import bgit_check, lipschitz_check
from .surface import SCHEMA_VERSION, parse_surface, standard_triangulation

SUITES = ("backend-agreement", "lemma-2.3", "lemma-2.6", "lemma-2.7", "tightness", "lemma-2.5",
          "thm-1.3", "thm-1.5", "cor-1.6", "cor-1.7", "thm-2.9-fit", "bgit")

DEFAULT_SURFACE = {
    "backend-agreement": "1,1", "lemma-2.3": "0,5", "lemma-2.6": "0,5", "lemma-2.7": "0,5",
    "tightness": "0,5", "lemma-2.5": "0,5", "thm-1.3": "0,5", "thm-1.5": "1,2",
    "cor-1.6": "1,2", "cor-1.7": "1,2", "thm-2.9-fit": "1,2", "bgit": "0,5",
}

ATTEMPTS = 5000  # pairs tried per sample when a target distance is wanted
TWIST_KS = tuple(range(2, 41))
FIT_NS = (6, 10, 20)


@dataclass(frozen=True)
class ExperimentPlan:
    surface: str
    suite: str
    samples: int
    seed: int
    config: ConstantsConfig = field(default_factory=ConstantsConfig)
    budget: int = DEFAULT_BUDGET
    pool_limit: int = 200

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        parse_surface(self.surface)

    @property
    def spec(self):
        return parse_surface(self.surface)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["config"] = self.config.to_dict()
        d["schema"] = SCHEMA_VERSION
        return d


@dataclass
class SuiteResult:
    plan: ExperimentPlan
    columns: list
    rows: list
    summary: dict
    samples: list = field(default_factory=list, repr=False)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.summary.get("pass"))

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["schema"] + self.columns)
        for r in self.rows:
            w.writerow([SCHEMA_VERSION] + [_cell(v) for v in r])
        return buf.getvalue()

    def summary_dict(self) -> dict:
        return {"schema": SCHEMA_VERSION, "plan": self.plan.to_dict(), "summary": self.summary,
                "seconds": round(self.seconds, 1)}


def _cell(v):
    if isinstance(v, float):
        return repr(round(v, 12))
    if isinstance(v, (list, tuple)):
        return " ".join(map(str, v))
    return v


def _seed(plan: ExperimentPlan, i: int, *tag: int) -> int:
    return int(make_rng(plan.seed, i, *tag).integers(2 ** 31))


def _tri(plan):
    return standard_triangulation(plan.spec)


# ---------------------------------------------------------------------------
# sample generators


@lru_cache(maxsize=1024)
def _pair_at_distance(surface: str, seed: int, i: int, target: int, L: int, budget: int):
    """First seeded filling pair at distance ``target`` (searching up to 5 when asked)."""
    spec = parse_surface(surface)
    for j in range(ATTEMPTS):
        s = int(make_rng(seed, i, j, target).integers(2 ** 31))
        x, y = random_filling_pair(spec, s, L)
        D = distance(x, y, budget=budget, max_search=max(4, target))
        if D.value == target:
            return x, y, D, j
    raise SearchError(f"no pair at distance {target} within {ATTEMPTS} tries")


def _record_sample(plan, i, target):
    L = {3: 3, 4: 5, 5: 6}[target]
    x, y, D, tries = _pair_at_distance(plan.surface, plan.seed, i, target, L, plan.budget)
    rec = tight_geodesic(x, y, plan.config.R, dist=D, budget=plan.budget)
    return x, y, D, rec, tries


def _bgit_and_l25(rec, sv, M):
    """Bounded-geodesic-image statistics over the surveyed domains."""
    table = sv.table
    vs = rec.vertices
    n_dom, max_d, bad = 0, 0, 0
    l25 = {"pairs": 0, "active": 0, "violated": 0, "max_dZ": 0}
    for dv in sv.values:
        W = dv.domain
        if W.kind == "whole":
            continue
        r = lemma25_check(rec, W, M, table=table)
        l25["pairs"] += r.pairs
        l25["active"] += r.active
        l25["violated"] += len(r.violated)
        l25["max_dZ"] = max(l25["max_dZ"], r.max_dz)
        if all(table.meets(W, v) for v in vs):
            b = bgit_check(vs, W, M, table=table)
            n_dom += 1
            max_d = max(max_d, b.value)
            bad += not b.ok
    return {"domains": n_dom, "max_d": max_d, "violations": bad}, l25


# ---------------------------------------------------------------------------
# per-sample functions (return JSON-friendly dicts)


def _slopes(limit=20):
    out = []
    for q in range(0, limit + 1):
        for p in range(-limit, limit + 1):
            if math.gcd(abs(p), q) == 1 and (q > 0 or p == 1):
                out.append((p, q))
    return out


def s_backend(plan, i):
    spec = plan.spec
    sl = _slopes()
    p, q = sl[i]
    a = slope_curve(spec, p, q)
    factor = 1 if spec.genus == 1 else 2
    bad = 0
    for r, s in sl[i:]:
        b = slope_curve(spec, r, s)
        if intersection_number(a, b) != factor * abs(p * s - q * r):
            bad += 1
    return {"rows": [(f"{p}/{q}", len(sl) - i, bad)], "bad": bad}


def s_lemma23(plan, i):
    tri = _tri(plan)
    rng = make_rng(plan.seed, i, 23)
    word = random_word(tri, rng, 2 + i % 3)
    x = apply_word(base_curve(tri), word)
    if i % 10 == 0:
        y, dS = x, 0
    else:
        w = apply_word(second_base_curve(tri), word)
        ch, _ = _chart(x, w)
        while True:
            q = int(rng.integers(1, 5))
            p = int(rng.integers(-4, 5))
            if math.gcd(abs(p), q) == 1:
                break
        y, dS = ch.curve(p, q), 1
    dw = DistanceResult(dS, dS, dS, "equal" if dS == 0 else "disjoint", [x, y])
    sv = survey(x, y, plan.config.N, d_whole=dw, limit=plan.pool_limit)
    rep = lipschitz_check(x, y, [v.domain for v in sv.values], table=sv.table)
    row = (i, dS, intersection_number(x, y), sv.pool_size, rep.checked, rep.max_value, len(rep.violations))
    return {"rows": [row], "violations": len(rep.violations), "max": rep.max_value,
            "bound": sv.effective_bound}


def _marking_sample(plan, i):
    spec = plan.spec
    L = 2 + i % 4
    x, y = random_filling_pair(spec, _seed(plan, i, 26), L)
    return x, y, marking_from_pair(x, y)


def s_lemma26(plan, i):
    x, y, res = _marking_sample(plan, i)
    rows = [(i, r.step, r.lhs, r.rhs, r.slack, r.ok) for r in res.completion.ledger.rows]
    return {"rows": rows, "violations": sum(not r.ok for r in res.completion.ledger.rows)}


def s_lemma27(plan, i):
    x, y, res = _marking_sample(plan, i)
    rows = [(i, r.step, r.lhs, r.rhs, r.slack, r.ok) for r in res.transversal_ledger.rows]
    ok_fill = res.sigma.fills() and res.tau.fills()
    rows.append((i, "markings_fill", int(not ok_fill), 0, int(ok_fill) - 1, ok_fill))
    pairs = [intersection_number(a, t) for a, t in res.sigma.transversals + res.tau.transversals]
    return {"rows": rows, "violations": sum(not r.ok for r in res.transversal_ledger.rows) + (not ok_fill),
            "i_xy": res.i_xy, "i_markings": res.i_markings, "i_a_at": pairs}


def _target(i):
    return 4 if i % 5 == 4 else 3


def s_tightness(plan, i):
    R = plan.config.R
    x, y, D, rec, tries = _record_sample(plan, i, _target(i))
    tight, idx = is_tight(rec)
    mg = check_multigeodesic(rec, R)
    grow = growth_violations(rec, R)
    # planted counter-fixture: swap V_1 for another curve disjoint from x
    cands = neighbour_candidates(x, y, R * intersection_number(x, y), R)
    w = next(c for c in cands.curves if c not in rec.V[1] and c != x)
    planted = TightGeodesicRecord(x, y, [rec.V[0], Multicurve([w])] + rec.V[2:], R, True)
    p_ok, p_idx = is_tight(planted)
    row = (i, rec.d, intersection_number(x, y), tries, tight, idx if idx is not None else "",
           len(mg), " ".join(map(str, grow)), p_idx if p_idx is not None else "")
    return {"rows": [row], "d": rec.d, "tight": tight, "multigeodesic_bad": len(mg),
            "growth": grow, "planted_index": p_idx, "planted_ok": (not p_ok) and p_idx == 1}


def _surveyed_record(plan, i, target):
    x, y, D, rec, tries = _record_sample(plan, i, target)
    sv = survey(x, y, plan.config.N, extra=curves_of(rec), d_whole=D, limit=plan.pool_limit)
    return x, y, D, rec, sv


def s_lemma25(plan, i):
    x, y, D, rec, sv = _surveyed_record(plan, i, _target(i))
    bg, l25 = _bgit_and_l25(rec, sv, plan.config.M)
    row = (i, rec.d, len(sv.values), l25["pairs"], l25["active"], l25["violated"], l25["max_dZ"])
    return {"rows": [row], "l25": l25, "bgit": bg}


def s_bgit(plan, i):
    x, y, D, rec, sv = _surveyed_record(plan, i, _target(i))
    bg, l25 = _bgit_and_l25(rec, sv, plan.config.M)
    row = (i, rec.d, bg["domains"], bg["max_d"], bg["violations"])
    return {"rows": [row], "l25": l25, "bgit": bg}


def s_thm13(plan, i):
    x, y, D, rec, sv = _surveyed_record(plan, i, 3)
    rep = verify_thm_1_3(rec, plan.config, surveyed=sv)
    bg, l25 = _bgit_and_l25(rec, sv, plan.config.M)
    ok = rep.ok
    I = intersection_number(x, y)
    rows = [(i, rec.d, I, p, q, ipq, rho, ok) for p, q, ipq, rho in rep.ratios]
    return {"rows": rows, "max_rho": rep.max_ratio, "ledger_ok": ok, "active": rep.active,
            "domains": rep.domains_checked, "violations": len(rep.violations),
            "whole_violations": len(rep.whole_violations), "bgit": bg, "l25": l25}


@lru_cache(maxsize=8)
def _geodesic5(surface, seed, i, budget, R, N, limit):
    x, y, D, _ = _pair_at_distance(surface, seed, i, 5, 6, budget)
    rec = tight_geodesic(x, y, R, dist=D, budget=budget)
    sv = survey(x, y, N, extra=list(D.path) + curves_of(rec), d_whole=D, limit=limit)
    return x, y, D, rec, sv


def s_thm15(plan, i):
    c = plan.config
    x, y, D, rec, sv = _geodesic5(plan.surface, plan.seed, i, plan.budget, c.R, c.N, plan.pool_limit)
    path = list(D.path)
    rep = verify_thm_1_5(path, c, surveyed=sv)
    tight_path = rec.vertices
    rep_t = verify_thm_1_5(tight_path, c, surveyed=sv)
    bg, l25 = _bgit_and_l25(rec, sv, c.M)
    I = intersection_number(x, y)
    ok = rep.ok
    rows = [(i, len(path) - 1, I, p, q, tau, ok) for p, q, tau in rep.taus]

    return {"rows": rows, "i_xy": I, "taus": [t for *_, t in rep.taus],
            "covering_checked": rep.covering_checked, "covering_failures": len(rep.covering_failures),
            "halving_active": rep.halving_active, "halving_violations": len(rep.halving_violations),
            "products": vertex_products(path), "tight_products": vertex_products(tight_path),
            "tight_taus": [t for *_, t in rep_t.taus], "tight_ok": rep_t.ok,
            "tight_rhos": [r for *_, r in exponent_ratios(rec)],
            "bgit": bg, "l25": l25}


def _twist_fixture(tri):
    cs = list(enumerate_curves(tri, 2))
    I, x, c = min((intersection_number(a, b), a, b) for a, b in itertools.combinations(cs, 2) if fills(a, b))
    return x, c


def s_thm29(plan, i):
    tri = _tri(plan)
    x, c = _twist_fixture(tri)
    k = TWIST_KS[i]
    y = twist(x, c, k)
    dxc = distance(x, c, plan.config.R).value
    # x -> c -> T_c^k(x) along a geodesic and its image bounds d_S(x, y) by 2 d(x, c)
    dw = DistanceResult(None, 3 if fills(x, y) else 2, 2 * dxc, "twist-path", [])
    sv = survey(x, y, max(FIT_NS), extra=[c], d_whole=dw, limit=plan.pool_limit)
    sweep = [cutoff_sum_from(sv, n).total for n in range(plan.config.N, 41)]
    mono = all(a >= b for a, b in zip(sweep, sweep[1:]))
    I = intersection_number(x, y)
    tot = {n: cutoff_sum_from(sv, n).total for n in FIT_NS}
    row = (k, I, math.log2(I)) + tuple(tot[n] for n in FIT_NS) + (mono,)
    return {"rows": [row], "log_i": math.log2(I), "totals": [tot[n] for n in FIT_NS], "monotone": mono,
            "d_whole_upper": 2 * dxc}


# ---------------------------------------------------------------------------
# reductions


def _drift(values_half, values_full):
    a, b = max(values_half, default=0.0), max(values_full, default=0.0)
    return abs(b - a) / b if b else 0.0


def _pct(vals, q):
    return float(np.percentile(vals, q)) if len(vals) else None


def r_backend(plan, S):
    bad = sum(s["bad"] for s in S)
    return {"pass": bad == 0, "slopes": len(S), "mismatches": bad}


def r_lemma23(plan, S):
    v = sum(s["violations"] for s in S)
    return {"pass": v == 0, "violations": v, "max_dZ": max(s["max"] for s in S),
            "min_effective_core_bound": min(s["bound"] for s in S)}


def r_ledger(plan, S):
    v = sum(s["violations"] for s in S)
    out = {"pass": v == 0, "violations": v, "rows": sum(len(s["rows"]) for s in S)}
    if "i_markings" in S[0]:
        xs = np.array([s["i_xy"] for s in S], dtype=float)
        ys = np.array([s["i_markings"] for s in S], dtype=float)
        K, C0 = np.polyfit(xs, ys, 1)
        C = float(np.max(ys - K * xs))
        hist = {}
        for s in S:
            for t in s["i_a_at"]:
                hist[t] = hist.get(t, 0) + 1
        out.update({"envelope_K": float(K), "envelope_C": C,
                    "max_ratio": float(np.max(ys / xs)),
                    "i_pants_curve_vs_transversal": {str(k): hist[k] for k in sorted(hist)}})
    return out


def r_tightness(plan, S):
    d3 = sum(s["d"] == 3 for s in S)
    d4 = sum(s["d"] == 4 for s in S)
    checks = {
        "counts": d3 >= 100 and d4 >= 20,
        "all_tight": all(s["tight"] for s in S),
        "multigeodesic": all(s["multigeodesic_bad"] == 0 for s in S),
        "planted": all(s["planted_ok"] for s in S),
    }
    flagged = [i for i, s in enumerate(S) if s["growth"]]
    return {"pass": all(checks.values()), "checks": checks, "d3": d3, "d4": d4,
            "growth_flagged": flagged, "R": plan.config.R}


def r_l25(plan, S):
    v = sum(s["l25"]["violated"] for s in S)
    act = sum(s["l25"]["active"] for s in S)
    return {"pass": v == 0, "violations": v, "active": act, "vacuous": act == 0,
            "max_dZ": max(s["l25"]["max_dZ"] for s in S), "M": plan.config.M}


def r_bgit(plan, S):
    v = sum(s["bgit"]["violations"] for s in S)
    return {"pass": v == 0, "violations": v, "domains": sum(s["bgit"]["domains"] for s in S),
            "max_dZ": max(s["bgit"]["max_d"] for s in S), "M": plan.config.M}


def r_thm13(plan, S):
    rhos = [s["max_rho"] for s in S]
    half = rhos[: len(rhos) // 2]
    drift = _drift(half, rhos)
    checks = {
        "samples": len(S) >= 200,
        "domain_ledger": all(s["violations"] == 0 for s in S),
        "whole_surface_term": all(s["whole_violations"] == 0 for s in S),
        "stable": drift <= 0.10,
    }
    return {"pass": all(checks.values()), "checks": checks, "U_hat": max(rhos),
            "U_half": max(half, default=0.0), "drift": drift,
            "rho_p50": _pct(rhos, 50), "rho_p90": _pct(rhos, 90),
            "active_domains": sum(s["active"] for s in S), "domains": sum(s["domains"] for s in S),
            "k": plan.config.k_tight}


def _v_hat(S, key="taus"):
    return max((t for s in S for t in s[key]), default=0.0)


def r_thm15(plan, S):
    per = [max(s["taus"], default=0.0) for s in S]
    half = per[: len(per) // 2]
    drift = _drift(half, per)
    checks = {
        "samples": len(S) >= 200,
        "covering": all(s["covering_failures"] == 0 for s in S),
        "halving": all(s["halving_violations"] == 0 for s in S),
        "stable": drift <= 0.10,
    }
    return {"pass": all(checks.values()), "checks": checks, "V_hat": max(per),
            "V_half": max(half, default=0.0), "drift": drift,
            "tau_p50": _pct(per, 50), "halving_active": sum(s["halving_active"] for s in S),
            "covering_checked": sum(s["covering_checked"] for s in S), "k": plan.config.k_geo,
            "l": plan.config.l_geo}


def r_cor16(plan, S):
    V = _v_hat(S)
    bad, sizes = [], []
    for j, s in enumerate(S):
        ex = cor_1_6_exceptions_from(s["i_xy"], s["products"], V)
        sizes.append(len(ex))
        if not consecutive_block(ex):
            bad.append(j)
    return {"pass": not bad, "V_hat": V, "failing_samples": bad,
            "max_exceptional": max(sizes, default=0)}


def r_cor17(plan, S):
    U = max((r for s in S for r in s["tight_rhos"]), default=0.0)
    V = _v_hat(S, "tight_taus")
    bad = [j for j, s in enumerate(S) if not cor_1_7_from(s["i_xy"], s["tight_products"], U, V).ok]
    return {"pass": not bad, "U_hat": U, "V_hat": V, "failing_samples": bad}


def r_thm29(plan, S):
    li = np.array([s["log_i"] for s in S])
    fits = {}
    ok = all(s["monotone"] for s in S)
    for j, n in enumerate(FIT_NS):
        tot = np.array([s["totals"][j] for s in S])
        a, b = np.polyfit(li, tot, 1)
        res = tot - (a * li + b)
        h = len(res) // 2
        lo, hi = float(np.max(np.abs(res[:h]))), float(np.max(np.abs(res[h:])))
        fits[str(n)] = {"slope": float(a), "offset": float(b), "max_residual": float(np.max(np.abs(res))),
                        "residual_low_k": lo, "residual_high_k": hi}
        # bounded residuals: no growth from the lower to the upper half of k
        ok = ok and a > 0 and hi <= lo + 1.0
    return {"pass": bool(ok), "fits": fits, "monotone_in_n": all(s["monotone"] for s in S)}


COLUMNS = {
    "backend-agreement": ["slope", "pairs", "mismatches"],
    "lemma-2.3": ["sample", "d_S", "i_xy", "pool", "domains", "max_dZ", "violations"],
    "lemma-2.6": ["sample", "step", "lhs", "rhs", "slack", "ok"],
    "lemma-2.7": ["sample", "step", "lhs", "rhs", "slack", "ok"],
    "tightness": ["sample", "d", "i_xy", "tries", "tight", "fail_index", "multigeodesic_bad",
                  "growth_flagged", "planted_fail_index"],
    "lemma-2.5": ["sample", "d", "domains", "pairs", "active", "violated", "max_dZ"],
    "bgit": ["sample", "d", "domains", "max_dZ", "violations"],
    "thm-1.3": ["sample", "d", "i_xy", "p", "q", "i_pq", "rho", "ledger_ok"],
    "thm-1.5": ["sample", "d", "i_xy", "p", "q", "tau", "ledger_ok"],
    "cor-1.6": ["sample", "d", "i_xy", "p", "q", "tau", "ledger_ok"],
    "cor-1.7": ["sample", "d", "i_xy", "p", "q", "tau", "ledger_ok"],
    "thm-2.9-fit": ["k", "i_xy", "log2_i"] + [f"sum_n{n}" for n in FIT_NS] + ["monotone_in_n"],
}

SAMPLE_FN = {
    "backend-agreement": s_backend, "lemma-2.3": s_lemma23, "lemma-2.6": s_lemma26,
    "lemma-2.7": s_lemma27, "tightness": s_tightness, "lemma-2.5": s_lemma25, "bgit": s_bgit,
    "thm-1.3": s_thm13, "thm-1.5": s_thm15, "cor-1.6": s_thm15, "cor-1.7": s_thm15,
    "thm-2.9-fit": s_thm29,
}

REDUCE_FN = {
    "backend-agreement": r_backend, "lemma-2.3": r_lemma23, "lemma-2.6": r_ledger,
    "lemma-2.7": r_ledger, "tightness": r_tightness, "lemma-2.5": r_l25, "bgit": r_bgit,
    "thm-1.3": r_thm13, "thm-1.5": r_thm15, "cor-1.6": r_cor16, "cor-1.7": r_cor17,
    "thm-2.9-fit": r_thm29,
}


def sample_count(plan: ExperimentPlan) -> int:
    if plan.suite == "backend-agreement":
        return len(_slopes())
    if plan.suite == "thm-2.9-fit":
        return min(plan.samples, len(TWIST_KS)) if plan.samples else len(TWIST_KS)
    return plan.samples


def _run_one(args):
    plan, i = args
    try:
        return SAMPLE_FN[plan.suite](plan, i)
    except SearchError as e:
        # budget exhaustion is reported per sample; the suite carries on
        return {"rows": [], "error": f"{type(e).__name__}: {e}", "index": i}


def workers_from_env() -> int:
    try:
        return max(1, int(os.environ.get("CURVELAB_WORKERS", "1")))
    except ValueError:
        return 1


def collect(plan: ExperimentPlan, workers: int | None = None) -> list:
    """Per-sample payloads in index order."""
    n = sample_count(plan)
    workers = workers or workers_from_env()
    args = [(plan, i) for i in range(n)]
    if workers <= 1 or n <= 1:
        return [_run_one(a) for a in args]
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(workers) as pool:
        return list(pool.imap(_run_one, args, chunksize=1))


def reduce_samples(plan: ExperimentPlan, samples: list, seconds: float = 0.0) -> SuiteResult:
    rows = [r for s in samples for r in s["rows"]]
    good = [s for s in samples if "error" not in s]
    summary = REDUCE_FN[plan.suite](plan, good) if good else {"pass": False}
    summary["sample_errors"] = [[s["index"], s["error"]] for s in samples if "error" in s]
    return SuiteResult(plan, COLUMNS[plan.suite], rows, summary, samples, seconds)


def run_plan(plan: ExperimentPlan, out_dir: str | Path | None = None, workers: int | None = None,
             samples: list | None = None) -> SuiteResult:
    """Run a suite end to end; ``samples`` reuses payloads from a sibling suite."""
    t0 = time.time()
    if samples is None:
        samples = collect(plan, workers)
    res = reduce_samples(plan, samples, time.time() - t0)
    if out_dir is not None:
        write_result(res, out_dir)
    return res


def run_suite(plan: ExperimentPlan, out_dir, workers: int | None = None):
    """Run a plan and write its reports; returns (result, [csv path, json path])."""
    res = run_plan(plan, out_dir, workers)
    csv_path = write_result(res, out_dir)
    return res, [csv_path, csv_path.with_suffix(".json")]


def derived_plan(plan: ExperimentPlan, suite: str) -> ExperimentPlan:
    """A plan for a suite sharing samples with ``plan`` (thm-1.5, cor-1.6, cor-1.7)."""
    return replace(plan, suite=suite)


def write_result(res: SuiteResult, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{res.plan.suite}_{res.plan.surface.replace(',', '_')}"
    (out / f"{stem}.csv").write_text(res.csv_text())
    (out / f"{stem}.json").write_text(json.dumps(res.summary_dict(), indent=2, sort_keys=True, default=str))
    return out / f"{stem}.csv"


def report_constants(results) -> dict:
    """Fitted constants from a set of suite results, keyed by name."""
    if not results:
        return {"schema": SCHEMA_VERSION, "empty": True}
    out = {"schema": SCHEMA_VERSION, "empty": False}
    for r in results:
        s = r.summary
        for key in ("U_hat", "V_hat", "envelope_K", "envelope_C", "max_dZ"):
            if key in s:
                out[f"{r.plan.suite}:{key}"] = s[key]
        if "fits" in s:
            for n, f in s["fits"].items():
                out[f"{r.plan.suite}:slope_n{n}"] = f["slope"]
                out[f"{r.plan.suite}:offset_n{n}"] = f["offset"]
    return out


def plot_result(res: SuiteResult, out_dir) -> Path | None:
    """Static PNG summary for the fit and ratio suites; None without matplotlib."""
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return None
    fig, ax = plt.subplots(figsize=(5, 3.5))
    suite = res.plan.suite
    if suite == "thm-2.9-fit":
        li = [s["log_i"] for s in res.samples]
        for j, n in enumerate(FIT_NS):
            ax.plot(li, [s["totals"][j] for s in res.samples], "o-", ms=3, label=f"n = {n}")
        ax.set_xlabel("log2 i(x, y)")
        ax.set_ylabel("cutoff sum")
        ax.legend()
    elif suite in ("thm-1.3", "thm-1.5"):
        ax.hist([r[-2] for r in res.rows], bins=30)
        ax.set_xlabel("exponent ratio")
    else:
        plt.close(fig)
        return None
    path = Path(out_dir) / f"{suite}_{res.plan.surface.replace(',', '_')}.png"
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path
