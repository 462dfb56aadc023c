"""Benchmark records, parameter sweeps and log-log slope fits.

Each :class:`BenchRecord` carries everything needed to rerun it: the graph
descriptor, every algorithm parameter and the master seed. The CSV layout is
versioned by :data:`SCHEMA_VERSION`; changing :data:`CSV_COLUMNS` requires a
version bump.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .bippr import bippr_adaptive
from .detect import detect_adaptive
from .instances import gen_contribution_hard, gen_pagerank_hard
from .oracle import AccessOracle, QueryStats
from .push import approx_contributions

__all__ = [
    "SCHEMA_VERSION",
    "CSV_COLUMNS",
    "BenchRecord",
    "fit_slope",
    "records_to_csv",
    "sweep_eps",
    "sweep_d",
    "sweep_n",
    "balanced_vsize",
    "EPS_SWEEP_MIN_COUNT",
]

# rows of an eps sweep with fewer pushbacks are excluded from the slope fit
EPS_SWEEP_MIN_COUNT = 10

SCHEMA_VERSION = 1

CSV_COLUMNS = [
    "schema", "command", "graph", "alpha", "eps", "delta", "c", "pf", "seed", "variant",
    "method", "x_name", "x", "value", "pushbacks", "n_indeg", "n_outdeg", "n_parent",
    "n_child", "n_jump", "local_total", "wall_time", "truth", "bound", "bound_ok",
]


@dataclass
class BenchRecord:
    command: str
    graph: str
    alpha: float = 0.2
    eps: Optional[float] = None
    delta: Optional[float] = None
    c: Optional[float] = None
    pf: Optional[float] = None
    seed: Optional[int] = None
    variant: Optional[str] = None
    method: Optional[str] = None
    x_name: Optional[str] = None
    x: Optional[float] = None
    value: Optional[float] = None
    pushbacks: Optional[int] = None
    queries: QueryStats = field(default_factory=QueryStats)
    wall_time: float = 0.0
    truth: Optional[float] = None
    bound: Optional[float] = None
    bound_ok: Optional[bool] = None
    extra: dict = field(default_factory=dict)

    def row(self) -> dict:
        d = asdict(self)
        q = d.pop("queries")
        d.pop("extra")
        d.update(q)
        d["local_total"] = self.queries.local_total
        d["schema"] = SCHEMA_VERSION
        return {k: d.get(k) for k in CSV_COLUMNS}

    def to_dict(self) -> dict:
        d = self.row()
        d.pop("schema")
        d["queries"] = self.queries.to_dict()
        for k in ("n_indeg", "n_outdeg", "n_parent", "n_child", "n_jump", "local_total"):
            d.pop(k)
        d.update(self.extra)
        return d


def records_to_csv(records: Iterable[BenchRecord], out=None) -> str:
    buf = io.StringIO() if out is None else out
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow({k: ("" if v is None else v) for k, v in r.row().items()})
    return buf.getvalue() if out is None else ""


def fit_slope(xs: Sequence[float], ys: Sequence[float], min_y: float = 0.0) -> float:
    """Least-squares slope of ``log y`` against ``log x``.

    Points with ``y <= 0`` or ``y < min_y`` are left out; small integer counts
    are dominated by rounding rather than by the scaling being measured.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    keep = (y > 0) & (y >= min_y)
    if keep.sum() < 2:
        raise ValueError("need at least two points to fit a slope")
    return float(np.polyfit(np.log(x[keep]), np.log(y[keep]), 1)[0])


def _desc(params: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in params.items() if v is not None)


def sweep_eps(n: int, m: int, d: int, vsize: int, eps_values: Sequence[float],
              alpha: float = 0.2, multilevel: bool = False, arity: Optional[int] = None,
              order: str = "fifo") -> list:
    """Pushback counts on one generated H over a range of eps.

    ``x`` is ``n pi(t) / eps``; ``bound`` is ``(1/alpha) n pi(t) / eps + 1``.
    """
    g, meta = gen_contribution_hard(n, m, d, vsize, multilevel, arity, alpha=alpha)
    desc = "gen:contrib " + _desc(meta.params)
    out = []
    for eps in eps_values:
        oracle = AccessOracle(g)
        t0 = time.perf_counter()
        pr = approx_contributions(oracle, meta.t, alpha, eps, order)
        wall = time.perf_counter() - t0
        bound = meta.npi / (alpha * eps) + 1.0
        out.append(BenchRecord(
            command="bench-scaling", graph=desc, alpha=alpha, eps=eps, method="push",
            x_name="npi_over_eps", x=meta.npi / eps, value=float(pr.pushbacks),
            pushbacks=pr.pushbacks, queries=pr.stats, wall_time=wall, truth=meta.npi,
            bound=bound, bound_ok=pr.pushbacks <= bound))
    return out


def sweep_d(n: int, m: int, vsize: int, d_values: Sequence[int], alpha: float = 0.2,
            variant: str = "indeg", multilevel: bool = False, arity: Optional[int] = None,
            delta: Optional[float] = None) -> list:
    """Adaptive detection cost on H with fixed ``|V|`` as ``d`` grows.

    ``delta`` defaults to the value recorded by the generator for each instance.
    """
    out = []
    for d in d_values:
        g, meta = gen_contribution_hard(n, max(m, 2 * d * max(d, vsize)), d, vsize,
                                        multilevel, arity, alpha=alpha)
        dl = meta.delta if delta is None else delta
        oracle = AccessOracle(g)
        t0 = time.perf_counter()
        res = detect_adaptive(oracle, meta.t, alpha, dl, variant)
        wall = time.perf_counter() - t0
        ok = set(range(*meta.U)) <= res.nodes
        out.append(BenchRecord(
            command="bench-scaling", graph="gen:contrib " + _desc(meta.params), alpha=alpha,
            eps=res.final_eps, delta=dl, variant=variant, method="detect", x_name="d", x=d,
            value=float(len(res.nodes)), pushbacks=None, queries=res.stats, wall_time=wall,
            bound_ok=ok, extra={"fallback": res.fallback}))
    return out


def balanced_vsize(n: int, d: int) -> int:
    return max(1, round(math.sqrt(n / d)))


def sweep_n(n_values: Sequence[int], d: int = 4, p: int = 4, i: Optional[int] = None,
            c: float = 0.25, pf: float = 1 / 3, seeds: Sequence[int] = range(10),
            alpha: float = 0.2, m_factor: int = 32, **kw) -> list:
    """bippr_adaptive on H_i with ``|V| = sqrt(n / d)``; one record per (n, seed).

    The isolated filler has degree ``m_factor`` so that the instance keeps
    ``Theta(n)`` nodes while carrying ``m = m_factor * n`` edges.
    """
    out = []
    for n in n_values:
        vs = balanced_vsize(n, d)
        g, meta = gen_pagerank_hard(n, m_factor * n, d, vs, p, p if i is None else i,
                                    alpha=alpha, delta_in=max(m_factor, vs),
                                    delta_out=m_factor)
        desc = "gen:pr-family " + _desc(meta.params)
        oracle = AccessOracle(g)
        for seed in seeds:
            t0 = time.perf_counter()
            est = bippr_adaptive(oracle, meta.t, alpha, c, pf, seed, **kw)
            wall = time.perf_counter() - t0
            rel = abs(est.value - meta.pi_t) / meta.pi_t
            out.append(BenchRecord(
                command="bench-scaling", graph=desc, alpha=alpha, eps=est.eps, c=c, pf=pf,
                seed=seed, method="bippr-adaptive", x_name="n", x=n, value=est.value,
                queries=est.queries, wall_time=wall, truth=meta.pi_t, bound=c,
                bound_ok=rel <= c, extra={"converged_by": est.converged_by}))
    return out
