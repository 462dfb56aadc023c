import math

import numpy as np
import pytest

from localpr import (AccessOracle, ParameterError, WalkConfig, approx_contributions,
                     bippr_adaptive, bippr_fixed, chebyshev_walks, empirical_variance_check,
                     exact_pagerank, gen_pagerank_hard, median_trials, walk_estimates)
from localpr.streams import stream

from graphs import ALPHA, chain_sink, random_digraph, self_loop, two_cycle


class TestFixed:
    @pytest.mark.parametrize("n_r", [1, 10, 100])
    def test_self_loop_degenerates_to_mc(self, n_r):
        est = bippr_fixed(AccessOracle(self_loop()), 0, ALPHA, 1.0, n_r, stream(0))
        assert est.value == 1.0
        assert est.push_queries.total == 0

    def test_two_cycle_expectation(self):
        g = two_cycle()
        pr = approx_contributions(AccessOracle(g), 0, ALPHA, 0.5)
        pi = exact_pagerank(g, ALPHA).values
        mean = pr.reserve_sum() / g.n + sum(pi[v] * r for v, r in pr.residues.items())
        assert pr.reserve_sum() / g.n == pytest.approx(0.2952)
        assert mean == pytest.approx(0.5, abs=1e-12)

    def test_two_cycle_estimate(self):
        est = bippr_fixed(AccessOracle(two_cycle()), 0, ALPHA, 0.5, 10_000, stream(1))
        assert 0.47 <= est.value <= 0.53
        assert est.value >= est.floor
        assert est.walk_queries.n_jump == 10_000

    def test_rejects_zero_walks(self):
        with pytest.raises(ParameterError):
            bippr_fixed(AccessOracle(two_cycle()), 0, ALPHA, 0.5, 0, stream(0))


class TestVariance:
    def test_self_loop(self):
        var, bound = empirical_variance_check(AccessOracle(self_loop()), 0, ALPHA, 1.0, 1000)
        assert var == 0.0
        assert bound == pytest.approx(1.0, abs=1e-9)

    def test_two_cycle(self):
        var, bound = empirical_variance_check(AccessOracle(two_cycle()), 0, ALPHA, 0.5,
                                              100_000, stream(2))
        assert bound == pytest.approx(0.25)
        assert var <= 1.1 * bound

    def test_chain_sink(self):
        var, bound = empirical_variance_check(AccessOracle(chain_sink()), 0, ALPHA, 0.05,
                                              100_000, stream(3))
        assert bound == pytest.approx(0.005)
        assert var <= 0.0055

    def test_unbiased(self):
        g = random_digraph(30, 0.1, 11)
        t = 4
        pi = exact_pagerank(g, ALPHA).values[t]
        o = AccessOracle(g)
        pr = approx_contributions(o, t, ALPHA, 0.05)
        q = walk_estimates(o, pr, WalkConfig(ALPHA), stream(4), 100_000)
        se = q.std(ddof=1) / math.sqrt(q.size)
        assert abs(q.mean() - pi) <= 4 * se
        assert q.min() >= pr.reserve_sum() / g.n

    def test_needs_two_samples(self):
        with pytest.raises(ParameterError):
            empirical_variance_check(AccessOracle(two_cycle()), 0, ALPHA, 0.5, 1)


class TestHelpers:
    def test_chebyshev(self):
        assert chebyshev_walks(0.5, 0.2, 0.5) == 75
        assert chebyshev_walks(1e-9, 0.5, 0.9) == 1

    @pytest.mark.parametrize("pf, k", [(0.5, 1), (1 / 3, 1), (0.1, 19), (0.01, 37)])
    def test_median_trials(self, pf, k):
        assert median_trials(pf) == k

    @pytest.mark.parametrize("pf", [0.0, 1.0])
    def test_median_trials_range(self, pf):
        with pytest.raises(ParameterError):
            median_trials(pf)


@pytest.fixture(scope="module")
def family_pair():
    return [gen_pagerank_hard(1000, 32000, 4, 16, 4, i, delta_in=32, delta_out=32)
            for i in (0, 4)]


class TestAdaptive:
    def test_self_loop(self):
        est = bippr_adaptive(AccessOracle(self_loop()), 0, ALPHA, 0.1, 0.1, seed=0)
        assert est.value == pytest.approx(1.0)
        assert est.rounds == 1

    def test_two_cycle_fallback(self):
        est = bippr_adaptive(AccessOracle(two_cycle()), 0, ALPHA, 0.1, 1 / 3, seed=0)
        assert est.converged_by == "fallback_exploration"
        assert est.value == pytest.approx(0.5, abs=1e-9)

    def test_two_cycle_without_fallback(self):
        hits = 0
        for seed in range(12):
            est = bippr_adaptive(AccessOracle(two_cycle()), 0, ALPHA, 0.1, 0.33, seed,
                                 max_budget=math.inf)
            assert est.converged_by == "adaptive_certified"
            hits += 0.45 <= est.value <= 0.55
        assert hits >= 8

    def test_certified_run_on_instance(self, family_pair):
        g, meta = family_pair[1]
        est = bippr_adaptive(AccessOracle(g), meta.t, ALPHA, 0.25, 1 / 3, seed=1)
        assert est.converged_by == "adaptive_certified"
        assert abs(est.value / meta.pi_t - 1) <= 0.25
        assert est.value >= est.floor
        assert est.n_r * est.value >= 48 * est.eps / 0.25 ** 2

    def test_cost_balance(self, family_pair):
        for g, meta in family_pair:
            for seed in range(3):
                est = bippr_adaptive(AccessOracle(g), meta.t, ALPHA, 0.25, 1 / 3, seed)
                push, walk = est.push_queries.total, est.walk_queries.total
                assert push / 4 <= walk <= 4 * push

    def test_median_trick_trials(self, family_pair):
        g, meta = family_pair[0]
        est = bippr_adaptive(AccessOracle(g), meta.t, ALPHA, 0.25, 0.05, seed=2)
        assert est.trials == median_trials(0.05)
        assert len(est.trial_values) == est.trials
        assert est.value == np.median(est.trial_values)

    def test_reproducible(self, family_pair):
        g, meta = family_pair[0]
        a = bippr_adaptive(AccessOracle(g), meta.t, ALPHA, 0.25, 1 / 3, seed=5)
        b = bippr_adaptive(AccessOracle(g), meta.t, ALPHA, 0.25, 1 / 3, seed=5)
        c = bippr_adaptive(AccessOracle(g), meta.t, ALPHA, 0.25, 1 / 3, seed=6)
        assert a.to_dict() == b.to_dict()
        assert a.value != c.value

    def test_generator_seed_accepted(self):
        est = bippr_adaptive(AccessOracle(self_loop()), 0, ALPHA, 0.1, 0.3, stream(1))
        assert est.value == pytest.approx(1.0)

    @pytest.mark.parametrize("c", [0.0, 1.0])
    def test_bad_c(self, c):
        with pytest.raises(ParameterError):
            bippr_adaptive(AccessOracle(two_cycle()), 0, ALPHA, c, 0.3)

    def test_json(self):
        est = bippr_adaptive(AccessOracle(two_cycle()), 0, ALPHA, 0.1, 0.3, max_budget=math.inf)
        d = est.to_dict()
        for key in ("value", "eps", "n_r", "trials", "queries", "converged_by"):
            assert key in d
        assert '"converged_by": "adaptive_certified"' in est.to_json()
