"""Bidirectional single-node PageRank estimation.

A backward push from ``t`` leaves reserves ``p`` and residues ``r`` with
``pi(t) = sum(p)/n + sum_v pi(v) r(v)``. Replacing ``pi(v)`` by the indicator
that a random walk ends at ``v`` gives the estimator

    q(t) = sum(p)/n + r(terminal node of one walk),

unbiased for ``pi(t)`` with variance at most ``eps * pi(t)`` because every
residue is at most ``eps``. Averaging ``n_r`` walks divides the variance by
``n_r``.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .errors import ParameterError
from .estimate import Estimate
from .exact import exact_pagerank
from .graph import Graph
from .montecarlo import WalkConfig, sample_walk
from .oracle import QueryStats
from .push import BackwardPush, PushResult, approx_contributions, residual_mass
from .streams import master_seed_of, stream

__all__ = [
    "bippr_fixed",
    "walk_estimates",
    "empirical_variance_check",
    "chebyshev_walks",
    "median_trials",
    "bippr_adaptive",
]


def walk_estimates(oracle, pr: PushResult, cfg: WalkConfig, rng: np.random.Generator,
                   count: int) -> np.ndarray:
    """``count`` independent single-walk realizations of q(t) for push result ``pr``."""
    floor = pr.reserve_sum() / oracle.n
    res = pr.residues
    out = np.empty(count)
    for i in range(count):
        out[i] = floor + res.get(sample_walk(oracle, cfg, rng)[0], 0.0)
    return out


def _walk_mean(oracle, pr, cfg, rng, n_r):
    res = pr.residues
    acc = 0.0
    for _ in range(n_r):
        acc += res.get(sample_walk(oracle, cfg, rng)[0], 0.0)
    return pr.reserve_sum() / oracle.n + acc / n_r


def bippr_fixed(oracle, t: int, alpha: float, eps: float, n_r: int,
                rng: np.random.Generator, order: str = "fifo") -> Estimate:
    """One push at ``eps`` followed by ``n_r`` walks."""
    if n_r < 1:
        raise ParameterError("n_r must be >= 1")
    start = oracle.snapshot_stats()
    pr = approx_contributions(oracle, t, alpha, eps, order)
    mid = oracle.snapshot_stats()
    cfg = WalkConfig(alpha)
    value = _walk_mean(oracle, pr, cfg, rng, n_r)
    end = oracle.snapshot_stats()
    return Estimate(value, eps, n_r, 1, end - start, "fixed",
                    floor=pr.reserve_sum() / oracle.n,
                    push_queries=mid - start, walk_queries=end - mid)


def _true_pagerank(oracle, t, alpha):
    return float(exact_pagerank(oracle.graph, alpha).values[t])


def empirical_variance_check(oracle, t: int, alpha: float, eps: float, samples: int,
                             rng: Optional[np.random.Generator] = None,
                             pi_t: Optional[float] = None) -> tuple[float, float]:
    """Sample variance of single-walk q(t) against its bound ``eps * pi(t)``.

    ``pi(t)`` comes from the exact solver unless supplied.
    """
    if samples < 2:
        raise ParameterError("samples must be >= 2")
    rng = stream(0) if rng is None else rng
    pr = approx_contributions(oracle, t, alpha, eps)
    q = walk_estimates(oracle, pr, WalkConfig(alpha), rng, samples)
    if pi_t is None:
        pi_t = _true_pagerank(oracle, t, alpha)
    return float(np.var(q, ddof=1)), eps * pi_t


def chebyshev_walks(eps: float, c: float, pi_t: float) -> int:
    """Walk count ``ceil(3 eps / (c^2 pi(t)))`` that gives a (1 +- c) estimate w.p. >= 2/3."""
    return max(1, math.ceil(3.0 * eps / (c * c * pi_t)))


def median_trials(p_f: float) -> int:
    """Median-trick repetitions: 1 when ``p_f >= 1/3``, else ``ceil(8 ln(1/p_f))``."""
    if not 0.0 < p_f < 1.0:
        raise ParameterError(f"p_f must lie in (0, 1), got {p_f}")
    if p_f >= 1.0 / 3.0:
        return 1
    return math.ceil(8.0 * math.log(1.0 / p_f))


def _explore_pagerank(oracle, t, alpha):
    # reads every out-edge through the oracle, then solves on the copy
    edges = []
    for v in range(oracle.n):
        for i in range(1, oracle.outdeg(v) + 1):
            edges.append((v, oracle.child(v, i)))
    g = Graph.from_edges(oracle.n, np.asarray(edges, dtype=np.int64).reshape(-1, 2))
    return float(exact_pagerank(g, alpha).values[t])


def _push_within(oracle, t, alpha, allowance, eps_floor, order):
    """Halve eps from 1 while the cumulative push cost stays within ``allowance``.

    Returns the last completed run and the local queries spent, counting the
    aborted run too.
    """
    last = approx_contributions(oracle, t, alpha, 1.0, order)
    spent = 0
    eps = 1.0
    while residual_mass(last) > 0.0 and eps > eps_floor:
        bp = BackwardPush(oracle, t, alpha, eps / 2.0, order)
        base = spent
        pr = bp.run(lambda run: base + run.queries_used().local_total > allowance)
        spent += pr.stats.local_total
        if pr.aborted:
            break
        last = pr
        eps /= 2.0
    return last, spent


def bippr_adaptive(oracle, t: int, alpha: float, c: float, p_f: float, seed=0, *,
                   K: float = 48.0, B0: float = 64.0, order: str = "fifo",
                   max_budget: Optional[float] = None) -> Estimate:
    """Multiplicative (1 +- c) estimate of ``pi(t)`` with failure probability ``p_f``.

    Each round gets a query budget ``B`` (``B0, 2 B0, 4 B0, ...``). Half of it
    funds the push phase, halving ``eps`` until the next run would overspend;
    the other half funds the walk phase, split over the median-trick trials.
    The round certifies when ``n_r * median >= K * eps / c^2``.

    Halving stops once ``eps <= c^2 alpha / (K n)``: since ``pi(t) >= alpha / n``
    such a push already certifies with a single walk. Once ``B`` exceeds
    ``max_budget`` (default ``2 (n + m)``) the graph is read in full and
    ``pi(t)`` solved exactly, flagged ``fallback_exploration``.

    Random streams are keyed by ``(round, trial)`` under the master seed.
    """
    if not 0.0 < c < 1.0:
        raise ParameterError(f"c must lie in (0, 1), got {c}")
    if not 0 <= t < oracle.n:
        raise ParameterError(f"target {t} outside [0, {oracle.n})")
    trials = median_trials(p_f)
    master = master_seed_of(seed)
    n = oracle.n
    cap = 2.0 * (n + oracle.m) if max_budget is None else max_budget
    per_walk = 1.0 + 2.0 * (1.0 - alpha) / alpha
    eps_floor = c * c * alpha / (K * n)
    cfg = WalkConfig(alpha)
    start = oracle.snapshot_stats()
    budget = float(B0)
    rnd = 0
    while True:
        if budget > cap:
            value = _explore_pagerank(oracle, t, alpha)
            return Estimate(value, 0.0, 0, trials, oracle.snapshot_stats() - start,
                            "fallback_exploration", rounds=rnd + 1)
        round_start = oracle.snapshot_stats()
        pr, _ = _push_within(oracle, t, alpha, budget / 2.0, eps_floor, order)
        mid = oracle.snapshot_stats()
        floor = pr.reserve_sum() / n
        if residual_mass(pr) == 0.0:
            # every residue is gone: the floor is exact
            return Estimate(floor, pr.epsilon, 0, trials, mid - start, "adaptive_certified",
                            floor=floor, push_queries=mid - round_start,
                            walk_queries=QueryStats(), rounds=rnd + 1, trial_values=[floor])
        n_r = max(1, int(budget / 2.0 / (trials * per_walk)))
        values = [_walk_mean(oracle, pr, cfg, stream(master, rnd, k), n_r) for k in range(trials)]
        pi_hat = float(np.median(values))
        end = oracle.snapshot_stats()
        if n_r * pi_hat >= K * pr.epsilon / (c * c):
            return Estimate(pi_hat, pr.epsilon, n_r, trials, end - start, "adaptive_certified",
                            floor=floor, push_queries=mid - round_start,
                            walk_queries=end - mid, rounds=rnd + 1, trial_values=values)
        budget *= 2.0
        rnd += 1
