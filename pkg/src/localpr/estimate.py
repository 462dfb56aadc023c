from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .oracle import QueryStats

__all__ = ["Estimate"]

CONVERGED_BY = ("fixed", "monte_carlo", "adaptive_certified", "fallback_exploration")


@dataclass
class Estimate:
    """A PageRank estimate and the configuration that produced it.

    Plain Monte Carlo is the ``eps = 1`` special case of the bidirectional
    estimator (no pushes, residue 1 on the target), and is recorded that way.
    """

    value: float
    eps: float
    n_r: int
    trials: int
    queries: QueryStats
    converged_by: str = "fixed"
    floor: float = 0.0
    push_queries: Optional[QueryStats] = None
    walk_queries: Optional[QueryStats] = None
    rounds: int = 1
    trial_values: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {
            "value": self.value,
            "eps": self.eps,
            "n_r": self.n_r,
            "trials": self.trials,
            "converged_by": self.converged_by,
            "queries": self.queries.to_dict(),
        }
        if self.push_queries is not None:
            d["push_queries"] = self.push_queries.to_dict()
        if self.walk_queries is not None:
            d["walk_queries"] = self.walk_queries.to_dict()
        if self.rounds != 1:
            d["rounds"] = self.rounds
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)
