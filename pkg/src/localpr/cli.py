"""Command-line frontend: ``localpr <command> [flags]``.

Commands: ``contributions``, ``pagerank``, ``bench-scaling`` and ``generate``.
Reports go to stdout as JSON, or as CSV rows with ``--format csv``. Exit
codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

import numpy as np

from . import bench
from .bippr import bippr_adaptive, bippr_fixed
from .detect import detect_adaptive, detect_known_npi
from .errors import LocalPRError
from .exact import exact_contributions, exact_pagerank, ppr_apply
from .graph import load_edge_list, validate_out_degrees
from .instances import export_instance, gen_contribution_hard, gen_pagerank_hard
from .montecarlo import WalkConfig, mc_pagerank
from .oracle import AccessOracle
from .push import ORDERS, approx_contributions
from .streams import stream

__all__ = ["main", "build_parser"]

_VARIANT_ALIASES = {"indeg": "indeg", "outdeg": "outdeg", "sqrtm": "sqrt_m",
                    "sqrt_m": "sqrt_m", "combined": "combined"}


class _Usage(Exception):
    pass


def _csv_floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _graph_flags(p):
    src = p.add_argument_group("graph source")
    src.add_argument("--graph", metavar="PATH", help="edge-list file")
    src.add_argument("--gen", choices=("contrib", "pr-family"), help="generate a hard instance")
    src.add_argument("--remap", action="store_true", help="compact arbitrary node ids")
    src.add_argument("--dangling", choices=("reject", "add_self_loops"), default="reject")
    gen = p.add_argument_group("generator parameters")
    gen.add_argument("--n", type=int, default=1000)
    gen.add_argument("--m", type=int, default=None, help="edge budget (default 10 n)")
    gen.add_argument("--d", type=int, default=4)
    gen.add_argument("--vsize", type=int, default=None, help="|V| (default 16)")
    gen.add_argument("--p", type=int, default=4)
    gen.add_argument("--i", type=int, default=None, help="H_i index (default p)")
    gen.add_argument("--arity", type=int, default=None)
    gen.add_argument("--multilevel", action="store_true")


def _common_flags(p):
    p.add_argument("--t", type=int, default=None, metavar="NODE")
    p.add_argument("--alpha", type=float, default=None, help="decay factor (default 0.2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order", choices=ORDERS, default="fifo")
    p.add_argument("--verify", action="store_true", help="compare with the exact solver")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="localpr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("contributions", help="backward push or contributing-set detection")
    _graph_flags(c)
    _common_flags(c)
    c.add_argument("--eps", type=float, default=0.01)
    c.add_argument("--detect", action="store_true")
    c.add_argument("--delta", type=float, default=None)
    c.add_argument("--variant", choices=sorted(_VARIANT_ALIASES), default="indeg")
    c.add_argument("--npi", type=float, default=None, help="known n*pi(t): single push")
    c.add_argument("--budget", type=float, default=None, help="budget constant B")

    r = sub.add_parser("pagerank", help="single-node PageRank estimation")
    _graph_flags(r)
    _common_flags(r)
    r.add_argument("--method", choices=("mc", "bippr", "bippr-adaptive"), default="bippr-adaptive")
    r.add_argument("--samples", type=int, default=10000)
    r.add_argument("--eps", type=float, default=0.01)
    r.add_argument("--nr", type=int, default=1000)
    r.add_argument("--c", type=float, default=0.25)
    r.add_argument("--pf", type=float, default=1 / 3)
    r.add_argument("--K", type=float, default=48.0, help="certification constant")
    r.add_argument("--B0", type=float, default=64.0, help="initial query budget")

    b = sub.add_parser("bench-scaling", help="parameter sweeps with slope fits")
    _graph_flags(b)
    _common_flags(b)
    b.add_argument("--sweep", choices=("eps", "d", "n"), required=True)
    b.add_argument("--eps-values", type=_csv_floats, default=None)
    b.add_argument("--d-values", type=_csv_floats, default=None)
    b.add_argument("--n-values", type=_csv_floats, default=None)
    b.add_argument("--variant", choices=sorted(_VARIANT_ALIASES), default="indeg")
    b.add_argument("--delta", type=float, default=None)
    b.add_argument("--c", type=float, default=0.25)
    b.add_argument("--pf", type=float, default=1 / 3)
    b.add_argument("--seeds", type=int, default=10, help="seeds per point (n sweep)")

    g = sub.add_parser("generate", help="write a hard instance as .el + .json")
    _graph_flags(g)
    g.add_argument("--alpha", type=float, default=None)
    g.add_argument("--out", required=True, metavar="PREFIX")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def _alpha(args, default=0.2):
    return default if args.alpha is None else args.alpha


def _generate(args, alpha):
    m = 10 * args.n if args.m is None else args.m
    vsize = 16 if args.vsize is None else args.vsize
    if args.gen == "contrib":
        return gen_contribution_hard(args.n, m, args.d, vsize, args.multilevel,
                                     args.arity, alpha=alpha)
    i = args.p if args.i is None else args.i
    return gen_pagerank_hard(args.n, m, args.d, vsize, args.p, i, args.multilevel,
                             args.arity, alpha=alpha)


def _load(args, alpha):
    """Graph, target and a descriptor string from --graph or --gen."""
    if bool(args.graph) == bool(args.gen):
        raise _Usage("exactly one of --graph and --gen is required")
    if args.graph:
        if args.t is None:
            raise _Usage("--t is required with --graph")
        g = validate_out_degrees(load_edge_list(args.graph, remap=args.remap), args.dangling)
        return g, args.t, f"file:{args.graph}", None
    g, meta = _generate(args, alpha)
    t = meta.t if args.t is None else args.t
    return g, t, f"gen:{args.gen} " + bench._desc(meta.params), meta


def _emit(args, record: bench.BenchRecord, report: dict, out) -> None:
    if args.format == "csv":
        bench.records_to_csv([record], out)
    else:
        out.write(json.dumps(report, indent=2, default=_jsonable) + "\n")


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


def cmd_contributions(args, out) -> int:
    alpha = _alpha(args)
    g, t, desc, _ = _load(args, alpha)
    variant = _VARIANT_ALIASES[args.variant]
    oracle = AccessOracle(g)
    t0 = time.perf_counter()
    report = {"command": "contributions", "graph": desc, "t": t, "alpha": alpha,
              "order": args.order}
    rec = bench.BenchRecord(command="contributions", graph=desc, alpha=alpha)
    if args.detect:
        if args.delta is None:
            raise _Usage("--detect needs --delta")
        if args.npi is not None:
            res = detect_known_npi(oracle, t, alpha, args.delta, args.npi, args.order)
        else:
            res = detect_adaptive(oracle, t, alpha, args.delta, variant, args.budget, args.order)
        rec.wall_time = time.perf_counter() - t0
        report.update(res.to_dict())
        report["delta"] = args.delta
        rec.delta, rec.variant, rec.eps = args.delta, res.variant, res.final_eps
        rec.method, rec.value, rec.queries = "detect", float(len(res.nodes)), res.stats
        if args.verify:
            contrib = exact_contributions(g, t, alpha).values
            npi = float(contrib.sum())
            truth = {int(v) for v in np.flatnonzero(contrib >= args.delta * npi)}
            report["truth"] = sorted(truth)
            report["superset"] = truth <= res.nodes
            rec.truth, rec.bound_ok = npi, report["superset"]
    else:
        pr = approx_contributions(oracle, t, alpha, args.eps, args.order)
        rec.wall_time = time.perf_counter() - t0
        report.update(pr.to_dict())
        rec.eps, rec.method, rec.pushbacks, rec.queries = args.eps, "push", pr.pushbacks, pr.stats
        rec.value = pr.reserve_sum()
        if args.verify:
            contrib = exact_contributions(g, t, alpha).values
            p = np.zeros(g.n)
            for v, x in pr.reserves.items():
                p[v] = x
            err = float(np.max(contrib - p))
            resid = float(np.max(np.abs(contrib - p - ppr_apply(g, pr.residues, alpha))))
            npi = float(contrib.sum())
            report.update(max_error=err, invariant_residual=resid, npi=npi,
                          pushback_bound=npi / (alpha * args.eps) + 1.0,
                          within_eps=err <= args.eps)
            rec.truth, rec.bound = npi, report["pushback_bound"]
            rec.bound_ok = err <= args.eps and pr.pushbacks <= rec.bound
    report["wall_time"] = rec.wall_time
    _emit(args, rec, report, out)
    return 0


def cmd_pagerank(args, out) -> int:
    alpha = _alpha(args)
    g, t, desc, meta = _load(args, alpha)
    oracle = AccessOracle(g)
    t0 = time.perf_counter()
    rec = bench.BenchRecord(command="pagerank", graph=desc, alpha=alpha, seed=args.seed,
                            method=args.method)
    if args.method == "mc":
        est = mc_pagerank(oracle, t, WalkConfig(alpha, args.seed), args.samples)
    elif args.method == "bippr":
        est = bippr_fixed(oracle, t, alpha, args.eps, args.nr, stream(args.seed), args.order)
    else:
        est = bippr_adaptive(oracle, t, alpha, args.c, args.pf, args.seed, K=args.K,
                             B0=args.B0, order=args.order)
        rec.c, rec.pf = args.c, args.pf
    rec.wall_time = time.perf_counter() - t0
    rec.eps, rec.value, rec.queries = est.eps, est.value, est.queries
    report = {"command": "pagerank", "graph": desc, "t": t, "alpha": alpha,
              "method": args.method, "seed": args.seed, **est.to_dict(),
              "wall_time": rec.wall_time}
    if args.verify:
        truth = meta.pi_t if meta is not None and meta.pi_t is not None and t == meta.t \
            else float(exact_pagerank(g, alpha).values[t])
        rel = abs(est.value - truth) / truth
        report.update(truth=truth, relative_error=rel)
        rec.truth = truth
        if args.method == "bippr-adaptive":
            rec.bound, rec.bound_ok = args.c, rel <= args.c
            report["within_c"] = rec.bound_ok
    _emit(args, rec, report, out)
    return 0


def cmd_bench_scaling(args, out) -> int:
    if args.graph:
        raise _Usage("bench-scaling drives generated instances; use the generator flags")
    if args.sweep == "eps":
        # multi-level H: with arity (1 - alpha) = 1 the number of nodes whose
        # contribution exceeds eps grows like 1/eps
        alpha = _alpha(args, 0.5)
        arity = args.arity or 2
        vsize = 1024 if args.vsize is None else args.vsize
        n = max(args.n, 4 * vsize)
        m = 10 * n if args.m is None else args.m
        eps_values = args.eps_values or [2.0 ** -k for k in range(8)]
        recs = bench.sweep_eps(n, m, args.d, vsize, eps_values, alpha, True, arity,
                               args.order)
        xs, ys = [r.x for r in recs], [r.pushbacks for r in recs]
        slope = bench.fit_slope(xs, ys, bench.EPS_SWEEP_MIN_COUNT)
        summary = {"x": "npi_over_eps", "y": "pushbacks", "slope": slope,
                   "min_count": bench.EPS_SWEEP_MIN_COUNT,
                   "all_bounds_ok": all(r.bound_ok for r in recs)}
    elif args.sweep == "d":
        alpha = _alpha(args)
        d_values = [int(x) for x in (args.d_values or [2, 4, 8, 16, 32])]
        m = 10 * args.n if args.m is None else args.m
        recs = bench.sweep_d(args.n, m, 16 if args.vsize is None else args.vsize,
                             d_values, alpha,
                             _VARIANT_ALIASES[args.variant], args.multilevel, args.arity,
                             args.delta)
        slope = bench.fit_slope([r.x for r in recs], [r.queries.local_total for r in recs])
        summary = {"x": "d", "y": "local_queries", "slope": slope,
                   "all_supersets": all(r.bound_ok for r in recs)}
    else:
        alpha = _alpha(args)
        n_values = [int(x) for x in (args.n_values or [1000, 4000, 16000, 64000])]
        recs = bench.sweep_n(n_values, args.d, args.p, args.i, args.c, args.pf,
                             range(args.seed, args.seed + args.seeds), alpha)
        means = {}
        for r in recs:
            means.setdefault(r.x, []).append(r.queries.total)
        xs = sorted(means)
        slope = bench.fit_slope(xs, [float(np.mean(means[x])) for x in xs])
        ok = [r.bound_ok for r in recs]
        summary = {"x": "n", "y": "mean_total_queries", "slope": slope,
                   "success_rate": float(np.mean(ok))}
    if args.format == "csv":
        bench.records_to_csv(recs, out)
        print(f"# slope={summary['slope']:.4f}", file=sys.stderr)
    else:
        out.write(json.dumps({"command": "bench-scaling", "sweep": args.sweep, **summary,
                              "records": [r.to_dict() for r in recs]},
                             indent=2, default=_jsonable) + "\n")
    return 0


def cmd_generate(args, out) -> int:
    if not args.gen:
        raise _Usage("generate needs --gen")
    g, meta = _generate(args, _alpha(args))
    el, js = export_instance(g, meta, args.out)
    info = {"edge_list": el, "metadata": js, **meta.to_dict()}
    if args.format == "csv":
        out.write("key,value\n")
        for k, v in info.items():
            out.write(f"{k},{json.dumps(v, default=_jsonable)}\n")
    else:
        out.write(json.dumps(info, indent=2, default=_jsonable) + "\n")
    return 0


_COMMANDS = {
    "contributions": cmd_contributions,
    "pagerank": cmd_pagerank,
    "bench-scaling": cmd_bench_scaling,
    "generate": cmd_generate,
}


def main(argv: Optional[list] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, out)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"localpr: error: {exc}", file=sys.stderr)
        return 2
    except (LocalPRError, OSError, ValueError) as exc:
        print(f"localpr: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
