import logging

import numpy as np
import pytest
from scipy import stats

from localpr import (AccessOracle, ParameterError, WalkConfig, exact_pagerank, mc_pagerank,
                     sample_node, sample_walk)
from localpr.montecarlo import min_safe_steps
from localpr.streams import stream

from graphs import ALPHA, chain_sink, random_digraph, self_loop, two_cycle


class TestSampleNode:
    def test_self_loop(self):
        o = AccessOracle(self_loop())
        rng = stream(0)
        assert all(sample_node(o, WalkConfig(ALPHA), rng) == 0 for _ in range(200))

    def test_two_cycle_symmetric(self):
        o = AccessOracle(two_cycle())
        rng = stream(1)
        hits = sum(sample_node(o, WalkConfig(ALPHA), rng) == 0 for _ in range(10_000))
        assert 0.45 <= hits / 10_000 <= 0.55

    def test_chain_sink(self):
        o = AccessOracle(chain_sink())
        rng = stream(2)
        cfg = WalkConfig(ALPHA)
        hits = sum(sample_node(o, cfg, rng) == 1 for _ in range(100_000))
        assert 0.89 <= hits / 100_000 <= 0.91

    def test_walk_length_geometric(self):
        o = AccessOracle(two_cycle())
        rng = stream(3)
        cfg = WalkConfig(ALPHA)
        lengths = np.array([sample_walk(o, cfg, rng)[1] for _ in range(100_000)])
        top = 30
        observed = np.bincount(np.minimum(lengths, top), minlength=top + 1)
        probs = ALPHA * (1 - ALPHA) ** np.arange(top)
        probs = np.append(probs, (1 - ALPHA) ** top)
        _, pval = stats.chisquare(observed, probs * lengths.size)
        assert pval > 0.001

    def test_queries_per_walk(self):
        o = AccessOracle(two_cycle())
        rng = stream(4)
        total = 0
        for _ in range(50):
            total += sample_walk(o, WalkConfig(ALPHA), rng)[1]
        s = o.snapshot_stats()
        assert s.n_jump == 50
        assert s.n_child == s.n_outdeg == total


class TestWalkConfig:
    def test_default_cap_safe(self):
        cfg = WalkConfig(0.2)
        assert cfg.max_steps == min_safe_steps(0.2)
        assert (1 - 0.2) ** cfg.max_steps < 1e-15

    def test_cap_below_floor_rejected(self):
        with pytest.raises(ParameterError):
            WalkConfig(0.2, max_steps=10)

    def test_truncation_restarts_and_logs(self, caplog):
        cfg = WalkConfig(0.05)
        cfg.max_steps = 0
        o = AccessOracle(two_cycle())
        rng = stream(5)
        with caplog.at_level(logging.WARNING, logger="localpr.montecarlo"):
            for _ in range(20):
                sample_walk(o, cfg, rng)
        assert cfg.truncations > 0
        assert "max_steps" in caplog.text


class TestMcPagerank:
    def test_self_loop_exact(self):
        est = mc_pagerank(AccessOracle(self_loop()), 0, WalkConfig(ALPHA), 7)
        assert est.value == 1.0
        assert est.converged_by == "monte_carlo"
        assert est.eps == 1.0

    def test_two_cycle(self):
        est = mc_pagerank(AccessOracle(two_cycle()), 0, WalkConfig(ALPHA, seed=9), 10_000)
        assert 0.45 <= est.value <= 0.55
        assert est.queries.n_jump == 10_000

    def test_chain_sink(self):
        est = mc_pagerank(AccessOracle(chain_sink()), 1, WalkConfig(ALPHA, seed=10), 100_000)
        assert 0.89 <= est.value <= 0.91

    def test_unbiased(self):
        g = random_digraph(40, 0.08, 3)
        t = 6
        pi = exact_pagerank(g, ALPHA).values[t]
        n_samples, reps = 2000, 40
        o = AccessOracle(g)
        vals = [mc_pagerank(o, t, WalkConfig(ALPHA), n_samples, stream(11, k)).value
                for k in range(reps)]
        se = np.sqrt(pi / n_samples) / np.sqrt(reps)
        assert abs(np.mean(vals) - pi) <= 3 * se

    def test_seeded_reproducible(self):
        g = random_digraph(30, 0.1, 4)
        a = mc_pagerank(AccessOracle(g), 1, WalkConfig(ALPHA, seed=3), 500)
        b = mc_pagerank(AccessOracle(g), 1, WalkConfig(ALPHA, seed=3), 500)
        assert a.value == b.value and a.queries == b.queries

    def test_rejects(self):
        with pytest.raises(ParameterError):
            mc_pagerank(AccessOracle(two_cycle()), 0, WalkConfig(ALPHA), 0)
        with pytest.raises(ParameterError):
            mc_pagerank(AccessOracle(two_cycle()), 3, WalkConfig(ALPHA), 5)
