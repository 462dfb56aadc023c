"""Whole-graph reference solvers used as test oracles.

These read the full graph and are not local algorithms. They iterate the
defining linear recursions from the zero vector; the error after ``k`` rounds
is at most ``(1 - alpha)**k`` because every score lies in ``[0, 1]``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import ParameterError
from .graph import Graph

__all__ = [
    "DenseScoreVector",
    "exact_pagerank",
    "exact_contributions",
    "exact_ppr_matrix",
    "ppr_apply",
    "iteration_cap",
    "write_scores_csv",
]

DEFAULT_TOL = 1e-12


@dataclass
class DenseScoreVector:
    values: np.ndarray
    tol: float
    kind: str = "pagerank"
    target: Optional[int] = None
    iterations: int = 0

    def __getitem__(self, v):
        return self.values[v]

    def __len__(self):
        return len(self.values)


def iteration_cap(alpha: float, tol: float) -> int:
    return math.ceil(math.log(1.0 / tol) / math.log(1.0 / (1.0 - alpha))) + 8


def _check(alpha, tol):
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    if tol <= 0:
        raise ParameterError(f"tol must be positive, got {tol}")


def _iterate(step, n, alpha, tol, history):
    x = np.zeros(n)
    # stopping on the increment: remaining error <= diff * (1-alpha)/alpha
    stop = tol * alpha / (1.0 - alpha)
    cap = iteration_cap(alpha, tol)
    it = 0
    for it in range(1, cap + 1):
        nxt = step(x)
        diff = np.max(np.abs(nxt - x)) if n else 0.0
        x = nxt
        if history is not None:
            history.append(x.copy())
        if diff <= stop:
            break
    return x, it


def exact_pagerank(g: Graph, alpha: float = 0.2, tol: float = DEFAULT_TOL,
                   history: Optional[list] = None) -> DenseScoreVector:
    """PageRank vector from ``pi = alpha/n + (1-alpha) * P^T pi``.

    Dangling nodes are not handled; validate the graph first.
    """
    _check(alpha, tol)
    pt = g.transition_matrix().T.tocsr()
    base = np.full(g.n, alpha / g.n)
    x, it = _iterate(lambda x: base + (1.0 - alpha) * (pt @ x), g.n, alpha, tol, history)
    return DenseScoreVector(x, tol, "pagerank", None, it)


def exact_contributions(g: Graph, t: int, alpha: float = 0.2, tol: float = DEFAULT_TOL,
                        history: Optional[list] = None) -> DenseScoreVector:
    """Contribution vector ``x[u] = pi(u, t)`` from ``x = alpha*e_t + (1-alpha) * P x``."""
    _check(alpha, tol)
    if not 0 <= t < g.n:
        raise ParameterError(f"target {t} outside [0, {g.n})")
    p = g.transition_matrix()
    e = np.zeros(g.n)
    e[t] = alpha
    x, it = _iterate(lambda x: e + (1.0 - alpha) * (p @ x), g.n, alpha, tol, history)
    return DenseScoreVector(x, tol, "contributions", t, it)


def ppr_apply(g: Graph, weights, alpha: float = 0.2, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``y[s] = sum_v pi(s, v) * weights[v]`` for every source ``s``.

    ``weights`` is a dense array or a sparse ``{node: weight}`` map. Used to
    evaluate the push invariant on graphs too large for the dense matrix.
    """
    _check(alpha, tol)
    w = np.zeros(g.n)
    if isinstance(weights, dict):
        for v, x in weights.items():
            w[v] = x
    else:
        w[:] = weights
    scale = float(np.max(np.abs(w))) if g.n else 0.0
    if scale == 0.0:
        return np.zeros(g.n)
    p = g.transition_matrix()
    src = alpha * w
    y, _ = _iterate(lambda y: src + (1.0 - alpha) * (p @ y), g.n, alpha, tol * scale, None)
    return y


def exact_ppr_matrix(g: Graph, alpha: float = 0.2) -> np.ndarray:
    """All-pairs ``Pi[s, v] = pi(s, v) = alpha * (I - (1-alpha) P)^-1`` by a dense solve.

    Independent of the iterative solvers; intended for graphs with a few
    thousand nodes at most.
    """
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    p = g.transition_matrix().toarray()
    a = np.eye(g.n) - (1.0 - alpha) * p
    return alpha * np.linalg.solve(a, np.eye(g.n))


def write_scores_csv(scores: Union[DenseScoreVector, np.ndarray], dest) -> None:
    vals = scores.values if isinstance(scores, DenseScoreVector) else np.asarray(scores)
    lines = ["node,score"] + [f"{i},{v!r}" for i, v in enumerate(vals.tolist())]
    text = "\n".join(lines) + "\n"
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w") as fh:
            fh.write(text)
    else:
        dest.write(text)
