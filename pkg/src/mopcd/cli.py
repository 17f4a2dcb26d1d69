"""Command line front end.

    mopcd compute --config W.json --index 1,1
    mopcd verify  --config W.json --index 2,2 --path roundrobin
    mopcd kernel  --config W.json --index 2,2 --grid=-4:4:50,-4:4:50 --out K.csv
    mopcd rmt-sim --alpha=1,-1 --index 3,3 --samples 200000 --seed 7

Exit codes: 0 success, 1 a check or comparison failed, 2 usage,
configuration or solver error (JSON payload on stderr).
"""
import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from .errors import MOPError
from .fields import parse_rational
from .kernel import KernelContext, kernel_cd, kernel_diagonal
from .mop import MOPSolver, MultiIndex, Path, canonical_path, dumps, export_solution, \
    path_from_increments, scalar_json
from .rmt import SourceModel, correlation_kernel, density_compare
from .suite import all_passed, run_suite
from .weights import load_weight_system


class UsageError(Exception):
    pass


def _fail(payload, code=2):
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return code


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _num(v):
    v = scalar_json(v)
    return v if isinstance(v, str) else repr(v)


def _index(args, ws):
    if not args.index:
        raise UsageError("--index is required")
    n = MultiIndex.parse(args.index)
    if ws is not None and n.m != ws.m:
        raise UsageError(f"index {tuple(n)} has {n.m} components, weight system has {ws.m}")
    if min(n) < 0:
        raise UsageError("index components must be non-negative")
    return n


def _path(spec, n):
    if spec in (None, "block", "roundrobin", "round-robin"):
        return canonical_path(n, spec or "block")
    with open(spec, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc and all(isinstance(v, int) for v in doc):
        p = path_from_increments(n.m, doc)
    else:
        p = Path([MultiIndex(v) for v in doc])
    if p.end != n:
        raise UsageError(f"path in {spec} ends at {tuple(p.end)}, not {tuple(n)}")
    return p


def _axis(text, exact):
    try:
        lo, hi, steps = text.split(":")
        steps = int(steps)
    except ValueError:
        raise UsageError(f"bad grid axis {text!r}, expected lo:hi:steps") from None
    if steps < 1:
        raise UsageError("grid needs at least one step")
    if exact:
        lo, hi = parse_rational(lo), parse_rational(hi)
        if steps == 1:
            return [lo]
        return [lo + (hi - lo) * Fraction(i, steps - 1) for i in range(steps)]
    return [float(v) for v in np.linspace(float(lo), float(hi), steps)]


def _load(args):
    if not args.config:
        raise UsageError("--config is required")
    return load_weight_system(args.config)


def cmd_compute(args):
    ws = _load(args)
    n = _index(args, ws)
    if not args.no_type1 and n.total < 1:
        raise UsageError("type I polynomials need |n| >= 1 (use --no-type1 for P only)")
    out = export_solution(MOPSolver(ws), n, include_type1=not args.no_type1)
    out["weights"] = ws.to_json()
    _write(dumps(out) + "\n", args.out)
    return 0


def cmd_verify(args):
    ws = _load(args)
    n = _index(args, ws)
    path = _path(args.path, n)
    reports = run_suite(ws, n, path, tol=args.tol, riemann_hilbert=not args.no_rh)
    ok = all_passed(reports)
    doc = {"index": list(n), "path": path.increments(), "pass": ok,
           "results": [r.to_json() for r in reports]}
    _write(dumps(doc) + "\n", args.out)
    for r in reports:
        if not r.passed and not r.extra.get("informational"):
            sys.stderr.write(f"FAIL {r.identity} {r.indices} rel={r.residual_rel:.3e} "
                             f"tol={r.tol:.1e}\n")
    return 0 if ok else 1


def cmd_kernel(args):
    ws = _load(args)
    n = _index(args, ws)
    ctx = KernelContext(ws, _path(args.path, n))
    ctx.require_full_index()
    if not args.grid:
        raise UsageError("--grid is required")
    axes = args.grid.split(",")
    if len(axes) not in (1, 2):
        raise UsageError("--grid takes one axis (diagonal) or two axes")
    exact = ws.field.exact
    lines = []
    if len(axes) == 1:
        lines.append("x,K")
        for x in _axis(axes[0], exact):
            lines.append(f"{_num(x)},{_num(kernel_diagonal(ctx, x))}")
    else:
        xs, ys = _axis(axes[0], exact), _axis(axes[1], exact)
        lines.append("x,y,K")
        for x in xs:
            for y in ys:
                k = kernel_cd(ctx, x, y, near_diagonal="direct")
                lines.append(f"{_num(x)},{_num(y)},{_num(k)}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _model(args):
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            doc = json.load(fh)
        return SourceModel(doc["alphas"], doc["multiplicities"])
    if not args.alpha or not args.index:
        raise UsageError("rmt-sim needs --config or both --alpha and --index")
    alphas = [float(parse_rational(a)) for a in args.alpha.split(",")]
    return SourceModel(alphas, MultiIndex.parse(args.index))


def cmd_rmt_sim(args):
    model = _model(args)
    try:
        lo, hi = (float(v) for v in args.range.split(":"))
    except ValueError:
        raise UsageError(f"bad --range {args.range!r}, expected lo:hi") from None
    tol = 0.03 if args.tol is None else args.tol
    report = density_compare(model, args.samples, args.bins, lo, hi, seed=args.seed, tol=tol,
                             ctx=correlation_kernel(model))
    _write(report.to_csv(), args.out)
    summary = json.dumps(report.summary_json(), sort_keys=True) + "\n"
    if args.summary:
        _write(summary, args.summary)
    if args.out not in (None, "-") or args.summary:
        sys.stdout.write(summary)
    return 0 if report.passed else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="mopcd", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, path=True):
        p.add_argument("--config", help="weight system JSON document")
        p.add_argument("--index", help='multi-index "n1,n2,..."')
        if path:
            p.add_argument("--path", default="block",
                           help="block, roundrobin, or a JSON file with the path")
        p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("compute", help="type II / type I polynomials and h-table as JSON")
    common(p, path=False)
    p.add_argument("--no-type1", action="store_true", help="only P_n and the h-table")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="run the identity suite")
    common(p)
    p.add_argument("--tol", type=float, help="override every tolerance")
    p.add_argument("--no-rh", action="store_true", help="skip the Riemann-Hilbert checks")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kernel", help="tabulate K_n on a grid as CSV")
    common(p)
    p.add_argument("--grid", help='"lo:hi:steps" (diagonal) or "lo:hi:steps,lo:hi:steps"')
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("rmt-sim", help="Monte Carlo density of GUE plus external source")
    p.add_argument("--config", help='JSON {"alphas": [...], "multiplicities": [...]}')
    p.add_argument("--alpha", help='source eigenvalues "a1,a2,..."')
    p.add_argument("--index", help="multiplicities")
    p.add_argument("--samples", type=int, default=200000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bins", type=int, default=40)
    p.add_argument("--range", default="-4.5:4.5", help="histogram range lo:hi")
    p.add_argument("--tol", type=float, help="max relative deviation (default 0.03)")
    p.add_argument("--out", help="histogram CSV (default stdout)")
    p.add_argument("--summary", help="summary JSON file")
    p.set_defaults(func=cmd_rmt_sim)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MOPError as exc:
        return _fail(exc.payload())
    except UsageError as exc:
        return _fail({"error": "UsageError", "message": str(exc)})
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        return _fail({"error": "ConfigError", "message": str(exc)})


if __name__ == "__main__":
    sys.exit(main())
