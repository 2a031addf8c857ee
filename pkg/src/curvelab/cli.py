"""Command line entry point: ``curvelab <command> ...``.

Curve arguments are a JSON file, inline JSON, or a slope ``p/q`` on a
complexity-one surface.  Results go to standard output as JSON.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .curves import CurveError, curve_from_dict, load_curve
from .surface import SCHEMA_VERSION, ComplexityError, Triangulation, parse_surface, standard_triangulation


def _text(arg: str) -> str:
    p = Path(arg)
    if p.suffix == ".json" or (len(arg) < 4096 and p.is_file()):
        return p.read_text()
    return arg


def _tri(args):
    if getattr(args, "triangulation", None):
        return Triangulation.from_dict(json.loads(_text(args.triangulation)))
    return None


def _curve(arg: str, args):
    text = _text(arg).strip()
    tri = _tri(args)
    if text.startswith("{"):
        return curve_from_dict(json.loads(text), tri)
    spec = parse_surface(args.surface) if args.surface else None
    c = load_curve(text, spec)
    if tri is not None and tri != c.tri:
        raise CurveError("slope shorthand is only defined on the standard triangulation")
    return c


def _domain(arg: str, tri):
    from .projection import subsurface_from_dict
    return subsurface_from_dict(json.loads(_text(arg)), tri)


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2, sort_keys=True, default=str)
    sys.stdout.write("\n")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


# ---------------------------------------------------------------------------
# commands


def cmd_triangulation(args):
    _emit(standard_triangulation(parse_surface(args.surface)).to_dict())


def cmd_intersect(args):
    from .intersection import intersection_number, minimal_position
    a, b = _curve(args.a, args), _curve(args.b, args)
    if args.diagram:
        _emit(minimal_position(a, b).to_dict())
    else:
        print(intersection_number(a, b))


def cmd_project(args):
    from .projection import AnnularLifts, meets, project_nonannular
    x = _curve(args.curve, args)
    Z = _domain(args.domain, x.tri)
    out = {"schema": SCHEMA_VERSION, "domain": Z.to_dict(), "meets": bool(meets(Z, x))}
    if Z.kind == "annular":
        out["lifts"] = len(AnnularLifts(Z.core, x)) if out["meets"] else 0
    elif Z.kind == "nonannular":
        out["curves"] = [c.to_dict() for c in project_nonannular(Z, x)]
    else:
        out["curves"] = [x.to_dict()]
    _emit(out)


def cmd_projdist(args):
    from .projection import UNDEFINED, proj_distance
    A, B = _curve(args.a, args), _curve(args.b, args)
    d = proj_distance(_domain(args.domain, A.tri), A, B)
    _emit({"schema": SCHEMA_VERSION, "distance": None if d is UNDEFINED else d,
           "defined": d is not UNDEFINED})


def cmd_marking(args):
    from .markings import marking_from_pair
    res = marking_from_pair(_curve(args.x, args), _curve(args.y, args))
    header = ["step", "lhs", "rhs", "slack"]
    if args.ledger:
        _write_csv(args.ledger, header, res.ledger_rows())
        _emit(res.to_dict())
    else:
        _emit(res.to_dict())
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        w.writerows(res.ledger_rows())
    return 0 if res.ok else 1


def cmd_distance(args):
    from .geodesics import distance
    r = distance(_curve(args.x, args), _curve(args.y, args), R=args.R, budget=int(args.budget))
    _emit(r.to_dict())


def cmd_tight(args):
    from .geodesics import tight_geodesic
    rec = tight_geodesic(_curve(args.x, args), _curve(args.y, args), R=args.R, budget=int(args.budget))
    _emit(rec.to_dict())


def cmd_formula_sum(args):
    from .formula import ConstantsConfig, cutoff_sum
    x, y = _curve(args.x, args), _curve(args.y, args)
    res = cutoff_sum(x, y, args.n, ConstantsConfig(N=min(args.n, 6)), limit=args.limit)
    _emit(res.to_dict())


VERIFY_SUITES = {"1.3": "thm-1.3", "1.5": "thm-1.5", "1.6": "cor-1.6", "1.7": "cor-1.7"}


def _plan(args, suite):
    from .harness import DEFAULT_SURFACE, ExperimentPlan
    from .formula import ConstantsConfig
    surface = args.surface or DEFAULT_SURFACE[suite]
    return ExperimentPlan(surface, suite, args.samples, args.seed,
                          ConstantsConfig(M=args.M, N=args.N, R=args.R),
                          budget=int(args.budget), pool_limit=args.pool_limit)


def _run(plan, out, workers):
    from .harness import derived_plan, run_plan
    if plan.suite in ("cor-1.6", "cor-1.7"):
        base = run_plan(derived_plan(plan, "thm-1.5"), out, workers)
        return [base, run_plan(plan, out, samples=base.samples)]
    return [run_plan(plan, out, workers)]


def cmd_verify(args):
    from .harness import report_constants
    plan = _plan(args, VERIFY_SUITES[args.which])
    results = _run(plan, None, args.workers)
    res = results[-1]
    if args.csv:
        Path(args.csv).write_text(res.csv_text())
    _emit({"suite": plan.suite, "pass": res.passed, "summary": res.summary,
           "constants": report_constants(results)})
    return 0 if all(r.passed for r in results) else 1


def cmd_run(args):
    from .harness import plot_result, report_constants
    plan = _plan(args, args.suite)
    results = _run(plan, args.out, args.workers)
    consts = report_constants(results)
    Path(args.out, "constants.json").write_text(json.dumps(consts, indent=2, sort_keys=True))
    if args.plot:
        for r in results:
            plot_result(r, args.out)
    for r in results:
        print(f"{r.plan.suite} {r.plan.surface}: {'pass' if r.passed else 'FAIL'}"
              f" ({len(r.samples)} samples, {r.seconds:.0f} s)")
    _emit(consts)
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    from .geodesics import DEFAULT_BUDGET, DEFAULT_R
    from .harness import SUITES

    ap = argparse.ArgumentParser(prog="curvelab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def curve_cmd(name, fn, *names, help=None):
        p = sub.add_parser(name, help=help)
        for n in names:
            p.add_argument(n)
        p.add_argument("--surface", help="g,n for slope shorthand (default 1,1)")
        p.add_argument("--triangulation", help="triangulation JSON (file or inline)")
        p.set_defaults(fn=fn)
        return p

    p = sub.add_parser("triangulation", help="print the standard triangulation of S_{g,n}")
    p.add_argument("--surface", required=True)
    p.set_defaults(fn=cmd_triangulation)

    p = curve_cmd("intersect", cmd_intersect, "a", "b", help="geometric intersection number")
    p.add_argument("--diagram", action="store_true", help="emit the crossing diagram as JSON")

    p = curve_cmd("project", cmd_project, "curve", help="subsurface projection of a curve")
    p.add_argument("--domain", required=True)
    p = curve_cmd("projdist", cmd_projdist, "a", "b", help="projection distance in a domain")
    p.add_argument("--domain", required=True)

    p = curve_cmd("marking", cmd_marking, "x", "y", help="markings from a filling pair")
    p.add_argument("--ledger", help="write the ledger CSV here instead of standard output")

    for name, fn in (("distance", cmd_distance), ("tight", cmd_tight)):
        p = curve_cmd(name, fn, "x", "y")
        p.add_argument("--R", type=int, default=DEFAULT_R)
        p.add_argument("--budget", type=float, default=DEFAULT_BUDGET)

    p = curve_cmd("formula-sum", cmd_formula_sum, "x", "y", help="cutoff sum over domains")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--limit", type=int, default=400, help="slopes per chart in the domain survey")

    def plan_args(p, samples):
        p.add_argument("--surface")
        p.add_argument("--samples", type=int, default=samples)
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--M", type=int, default=200)
        p.add_argument("--N", type=int, default=6)
        p.add_argument("--R", type=int, default=DEFAULT_R)
        p.add_argument("--budget", type=float, default=DEFAULT_BUDGET)
        p.add_argument("--pool-limit", type=int, default=200)
        p.add_argument("--workers", type=int, help="overrides CURVELAB_WORKERS")

    p = sub.add_parser("verify", help="sampled check of an intersection estimate")
    p.add_argument("which", choices=sorted(VERIFY_SUITES))
    plan_args(p, 200)
    p.add_argument("--csv")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("run", help="run an experiment suite and write CSV/JSON reports")
    p.add_argument("--suite", required=True, choices=SUITES)
    plan_args(p, 200)
    p.add_argument("--out", required=True)
    p.add_argument("--plot", action="store_true", help="also write PNG summaries (needs matplotlib)")
    p.set_defaults(fn=cmd_run)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rc = args.fn(args)
    except (CurveError, ComplexityError, ValueError) as e:
        print(f"curvelab: error: {e}", file=sys.stderr)
        return 2
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
