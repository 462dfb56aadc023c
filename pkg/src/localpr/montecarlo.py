"""alpha-discounted random walks from a uniform start (SampleNode).

The terminal node of such a walk is distributed as PageRank. Termination is
drawn per step with probability alpha, and the next child is chosen with an
unbiased bounded integer draw (``Generator.integers``).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ParameterError
from .estimate import Estimate

__all__ = ["WalkConfig", "sample_walk", "sample_node", "mc_pagerank", "min_safe_steps"]

log = logging.getLogger(__name__)


def min_safe_steps(alpha: float) -> int:
    """Smallest cap for which a walk is truncated with probability below 1e-15."""
    return math.ceil(math.log(1e-15) / math.log(1.0 - alpha))


@dataclass
class WalkConfig:
    alpha: float = 0.2
    seed: int = 0
    max_steps: Optional[int] = None
    truncations: int = field(default=0, compare=False)

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        floor = min_safe_steps(self.alpha)
        if self.max_steps is None:
            self.max_steps = floor
        elif self.max_steps < floor:
            raise ParameterError(f"max_steps={self.max_steps} below safe minimum {floor}")

    def rng(self) -> np.random.Generator:
        from .streams import stream

        return stream(self.seed)


def sample_walk(oracle, cfg: WalkConfig, rng: np.random.Generator) -> tuple[int, int]:
    """Run one walk and return ``(terminal node, number of steps taken)``."""
    alpha = cfg.alpha
    random = rng.random
    integers = rng.integers
    while True:
        v = oracle.jump(rng)
        for steps in range(cfg.max_steps + 1):
            if random() < alpha:
                return v, steps
            v = oracle.child(v, int(integers(oracle.outdeg(v))) + 1)
        cfg.truncations += 1
        log.warning("walk exceeded max_steps=%d; restarting", cfg.max_steps)


def sample_node(oracle, cfg: WalkConfig, rng: np.random.Generator) -> int:
    return sample_walk(oracle, cfg, rng)[0]


def mc_pagerank(oracle, t: int, cfg: WalkConfig, n_samples: int,
                rng: Optional[np.random.Generator] = None) -> Estimate:
    """Fraction of ``n_samples`` walks that end at ``t``."""
    if n_samples < 1:
        raise ParameterError("n_samples must be >= 1")
    if not 0 <= t < oracle.n:
        raise ParameterError(f"target {t} outside [0, {oracle.n})")
    rng = cfg.rng() if rng is None else rng
    start = oracle.snapshot_stats()
    hits = 0
    for _ in range(n_samples):
        if sample_walk(oracle, cfg, rng)[0] == t:
            hits += 1
    used = oracle.snapshot_stats() - start
    return Estimate(hits / n_samples, 1.0, n_samples, 1, used, "monte_carlo", walk_queries=used)
