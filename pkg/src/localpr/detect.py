"""Detection of the delta-contributing set {v : pi(v, t) >= delta * n * pi(t)}.

Two entry points. :func:`detect_known_npi` is a single push at
``eps = delta * npi / 2`` when ``n * pi(t)`` is known. :func:`detect_adaptive`
needs nothing but ``t`` and ``delta``: it reruns the push with
``eps = 1, 1/2, 1/4, ...`` and sums a per-run tally ``T_eps`` until the sum
would pass ``B / delta``, then returns the nonzero reserves of the last run
that finished inside the budget.

Tallies per variant (SP = pushes on v, RP = receipts at v):

* ``indeg``:  sum_v SP(v)
* ``outdeg``: sum_v RP(v) / d_out(v)
* ``sqrt_m``: sqrt(sum_v SP(v)) * sqrt(sum_v SP(v) g(v)), g(v) = sum_{u in N_in(v)} 1/d_out(u)
* ``combined``: all three tracked on the same runs; the first to exhaust its
  budget stops the search.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import ParameterError
from .oracle import QueryStats
from .push import BackwardPush, PushResult, approx_contributions, residual_mass

__all__ = [
    "VARIANTS",
    "DetectionResult",
    "default_budget",
    "detect_known_npi",
    "detect_adaptive",
]

VARIANTS = ("indeg", "outdeg", "sqrt_m", "combined")
_SINGLE = ("indeg", "outdeg", "sqrt_m")


def default_budget(alpha: float, variant: str) -> float:
    """Budget constant ``B`` that makes the superset guarantee provable.

    With ``SP(v) < pi(v,t) / (alpha eps)`` every tally is at most
    ``C * n pi(t) / eps``; summing the halving sequence down to the first
    ``eps < delta n pi(t)`` costs at most ``4 C / delta``. ``C`` is ``1/alpha``
    for indeg, ``1/(alpha (1-alpha))`` for outdeg and ``1/(alpha sqrt(1-alpha))``
    for sqrt_m.
    """
    if variant == "indeg":
        return 4.0 / alpha
    if variant == "outdeg":
        return 4.0 / (alpha * (1.0 - alpha))
    if variant == "sqrt_m":
        return 4.0 / (alpha * math.sqrt(1.0 - alpha))
    raise ParameterError(f"unknown variant {variant!r}")


@dataclass
class DetectionResult:
    nodes: set
    final_eps: float
    t_eps_history: list
    variant: str
    stats: QueryStats
    stopped_by: Optional[str] = None
    fallback: bool = False
    histories: dict = field(default_factory=dict)
    push: Optional[PushResult] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "nodes": sorted(self.nodes),
            "final_eps": self.final_eps,
            "t_eps_history": [list(p) for p in self.t_eps_history],
            "stopped_by": self.stopped_by,
            "fallback": self.fallback,
            "queries": self.stats.to_dict(),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _check_delta(delta):
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")


def detect_known_npi(oracle, t: int, alpha: float, delta: float, npi: float,
                     order: str = "fifo") -> DetectionResult:
    """Push once at ``eps = delta * npi / 2`` and keep nodes with reserve >= eps.

    The output contains the delta-contributing set and is contained in the
    (delta/2)-contributing set.
    """
    _check_delta(delta)
    if not npi > 0:
        raise ParameterError(f"npi must be positive, got {npi}")
    eps = delta * npi / 2.0
    pr = approx_contributions(oracle, t, alpha, eps, order)
    nodes = {v for v, p in pr.reserves.items() if p >= eps}
    return DetectionResult(nodes, eps, [(eps, pr.t_eps("indeg"))], "known_npi",
                           pr.stats, push=pr)


def detect_adaptive(oracle, t: int, alpha: float, delta: float, variant: str = "indeg",
                    budget: Optional[float] = None, order: str = "fifo",
                    work_cap: Optional[float] = None,
                    min_eps: float = 2.0 ** -60) -> DetectionResult:
    """Contributing-set detection without knowledge of ``n * pi(t)``.

    ``budget`` is the constant ``B`` (per-variant :func:`default_budget` when
    None). A run whose tally would push the cumulative sum past ``B / delta``
    is aborted mid-run and the previous completed run is returned.

    ``work_cap`` bounds the total local queries; once passed, the answer falls
    back to all of ``V`` (always a superset) with ``fallback=True``. The default
    ``2 (n + m)`` is the cost of reading the whole graph in both directions.
    """
    _check_delta(delta)
    if variant not in VARIANTS:
        raise ParameterError(f"variant must be one of {VARIANTS}, got {variant!r}")
    names = _SINGLE if variant == "combined" else (variant,)
    if budget is None:
        limits = {v: default_budget(alpha, v) / delta for v in names}
    else:
        limits = {v: budget / delta for v in names}
    cap = 2.0 * (oracle.n + oracle.m) if work_cap is None else work_cap
    start = oracle.snapshot_stats()

    eps = 1.0
    last = approx_contributions(oracle, t, alpha, eps, order)
    cum = {v: last.t_eps(v) for v in names}
    histories = {v: [(eps, last.t_eps(v))] for v in names}
    stopped_by = None
    fallback = False

    def over_cap():
        return (oracle.snapshot_stats() - start).local_total > cap

    while residual_mass(last) > 0.0 and eps / 2.0 >= min_eps:
        eps /= 2.0
        bp = BackwardPush(oracle, t, alpha, eps, order)

        def abort(run, _cum=cum):
            for v in names:
                if _cum[v] + run.t_eps(v) > limits[v]:
                    return True
            return over_cap()

        pr = bp.run(abort)
        if pr.aborted:
            exceeded = [v for v in names if cum[v] + pr.t_eps(v) > limits[v]]
            if exceeded:
                stopped_by = exceeded[0]
            else:
                fallback = True
            break
        for v in names:
            tv = pr.t_eps(v)
            cum[v] += tv
            histories[v].append((eps, tv))
        last = pr

    if fallback:
        nodes = set(range(oracle.n))
    else:
        nodes = {v for v, p in last.reserves.items() if p > 0.0}
    key = stopped_by if variant == "combined" and stopped_by else names[0]
    return DetectionResult(
        nodes=nodes,
        final_eps=last.epsilon,
        t_eps_history=histories[key],
        variant=variant,
        stats=oracle.snapshot_stats() - start,
        stopped_by=stopped_by,
        fallback=fallback,
        histories=histories,
        push=last,
    )
