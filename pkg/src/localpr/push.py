"""Backward push (ApproxContributions) with per-node push accounting.

Starting from residue 1 on the target, every node whose residue exceeds
``eps`` is pushed: ``alpha`` of its residue moves to its reserve and the rest
is spread over its parents, each parent ``u`` receiving
``(1 - alpha) * r / outdeg(u)``. At every step

    pi(s, t) = reserve(s) + sum_v pi(s, v) * residue(v)     for all s,

so on exit ``pi(v, t) - eps <= reserve(v) <= pi(v, t)``.

The three stopping tallies used by adaptive contributing-set detection are
maintained incrementally from values the push loop already queries, so they
cost no extra oracle calls.
"""

from __future__ import annotations

import heapq
import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import ParameterError
from .oracle import QueryStats

__all__ = [
    "ORDERS",
    "PushResult",
    "BackwardPush",
    "approx_contributions",
    "residual_mass",
]

ORDERS = ("fifo", "lifo", "max_residue")


@dataclass
class PushResult:
    target: int
    alpha: float
    epsilon: float
    order: str
    reserves: dict
    residues: dict
    sp: dict
    rp: dict
    pushbacks: int
    stats: QueryStats
    # sum over receipts of 1/outdeg(receiver), i.e. sum_v RP(v)/d_out(v)
    rp_over_dout: float = 0.0
    # sum over pushbacks of g(v) = sum_{u parent of v} 1/d_out(u)
    sp_g: float = 0.0
    aborted: bool = False
    g: dict = field(default_factory=dict, repr=False)

    def t_eps(self, variant: str) -> float:
        """Stopping tally of this run for ``indeg``, ``outdeg`` or ``sqrt_m``."""
        if variant == "indeg":
            return float(self.pushbacks)
        if variant == "outdeg":
            return self.rp_over_dout
        if variant == "sqrt_m":
            return math.sqrt(self.pushbacks) * math.sqrt(self.sp_g)
        raise ParameterError(f"unknown variant {variant!r}")

    def reserve_sum(self) -> float:
        return math.fsum(self.reserves.values())

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "alpha": self.alpha,
            "epsilon": self.epsilon,
            "order": self.order,
            "reserves": {str(k): v for k, v in sorted(self.reserves.items())},
            "residues": {str(k): v for k, v in sorted(self.residues.items())},
            "pushbacks": self.pushbacks,
            "queries": self.stats.to_dict(),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def residual_mass(pr: PushResult) -> float:
    return math.fsum(pr.residues.values())


class BackwardPush:
    """Resumable push process; :func:`approx_contributions` is the usual entry.

    ``step()`` performs one pushback and is what the invariant tests drive.
    """

    def __init__(self, oracle, t: int, alpha: float, eps: float, order: str = "fifo"):
        if not 0.0 < alpha < 1.0:
            raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
        if not eps > 0:
            raise ParameterError(f"eps must be positive, got {eps}")
        if not 0 <= t < oracle.n:
            raise ParameterError(f"target {t} outside [0, {oracle.n})")
        if order not in ORDERS:
            raise ParameterError(f"order must be one of {ORDERS}, got {order!r}")
        self.oracle = oracle
        self.t = t
        self.alpha = alpha
        self.eps = eps
        self.order = order
        self.reserves: dict = {}
        self.residues: dict = {t: 1.0}
        self.sp: dict = {}
        self.rp: dict = {}
        self.g: dict = {}
        self.pushbacks = 0
        self.rp_over_dout = 0.0
        self.sp_g = 0.0
        self._start = oracle.snapshot_stats()
        self._queued: set = set()
        self._seq = 0
        if order == "max_residue":
            self._heap: list = []
        else:
            self._work: deque = deque()
        self._offer(t, 1.0)

    def _offer(self, v, r):
        if r <= self.eps:
            return
        if self.order == "max_residue":
            self._seq += 1
            heapq.heappush(self._heap, (-r, self._seq, v))
        elif v not in self._queued:
            self._queued.add(v)
            self._work.append(v)

    def _pop(self):
        if self.order == "max_residue":
            heap, res = self._heap, self.residues
            while heap:
                negr, _, v = heapq.heappop(heap)
                r = res.get(v, 0.0)
                if r == -negr and r > self.eps:
                    return v
            return None
        if not self._work:
            return None
        v = self._work.popleft() if self.order == "fifo" else self._work.pop()
        self._queued.discard(v)
        return v

    def step(self) -> bool:
        """Push one node with residue above ``eps``; False when none is left."""
        v = self._pop()
        if v is None:
            return False
        oracle = self.oracle
        res = self.residues
        rp = self.rp
        alpha = self.alpha
        r = res.pop(v)
        self.reserves[v] = self.reserves.get(v, 0.0) + alpha * r
        self.sp[v] = self.sp.get(v, 0) + 1
        self.pushbacks += 1
        share = (1.0 - alpha) * r
        gsum = 0.0
        for i in range(1, oracle.indeg(v) + 1):
            u = oracle.parent(v, i)
            du = oracle.outdeg(u)
            nu = res.get(u, 0.0) + share / du
            res[u] = nu
            rp[u] = rp.get(u, 0) + 1
            gsum += 1.0 / du
            self._offer(u, nu)
        self.rp_over_dout += gsum
        self.g[v] = gsum
        self.sp_g += gsum
        return True

    def run(self, abort: Optional[Callable[["BackwardPush"], bool]] = None) -> PushResult:
        """Push until no residue exceeds ``eps``.

        ``abort`` is consulted after every pushback; returning True stops the
        run early and marks the result as aborted.
        """
        step = self.step
        if abort is None:
            while step():
                pass
            return self.result()
        while step():
            if abort(self):
                return self.result(aborted=True)
        return self.result()

    def t_eps(self, variant: str) -> float:
        if variant == "indeg":
            return float(self.pushbacks)
        if variant == "outdeg":
            return self.rp_over_dout
        return math.sqrt(self.pushbacks) * math.sqrt(self.sp_g)

    def queries_used(self) -> QueryStats:
        return self.oracle.snapshot_stats() - self._start

    def result(self, aborted: bool = False) -> PushResult:
        return PushResult(
            target=self.t,
            alpha=self.alpha,
            epsilon=self.eps,
            order=self.order,
            reserves=dict(self.reserves),
            residues={k: v for k, v in self.residues.items() if v != 0.0},
            sp=dict(self.sp),
            rp=dict(self.rp),
            pushbacks=self.pushbacks,
            stats=self.queries_used(),
            rp_over_dout=self.rp_over_dout,
            sp_g=self.sp_g,
            aborted=aborted,
            g=dict(self.g),
        )


def approx_contributions(oracle, t: int, alpha: float = 0.2, eps: float = 0.01,
                         order: str = "fifo") -> PushResult:
    """Approximate the contribution vector of ``t`` to additive error ``eps``.

    ``eps >= 1`` is legal and returns the initial state (``r(t) = 1``) without
    any query. Pushes use strict ``residue > eps``.
    """
    return BackwardPush(oracle, t, alpha, eps, order).run()
