import math

import numpy as np
import pytest

from localpr import (AccessOracle, ParameterError, approx_contributions, default_budget,
                     detect_adaptive, detect_known_npi, exact_contributions,
                     gen_contribution_hard)
from localpr.detect import VARIANTS

from graphs import ALPHA, chain_sink, random_suite, self_loop, two_cycle


def truth_set(g, t, delta, alpha=ALPHA):
    x = exact_contributions(g, t, alpha).values
    return set(np.flatnonzero(x >= delta * x.sum()).tolist()), x


class TestKnownNpi:
    def test_two_cycle(self):
        res = detect_known_npi(AccessOracle(two_cycle()), 0, ALPHA, 0.4, 1.0)
        assert res.final_eps == pytest.approx(0.2)
        assert res.nodes == {0, 1}

    def test_self_loop(self):
        assert detect_known_npi(AccessOracle(self_loop()), 0, ALPHA, 0.5, 1.0).nodes == {0}

    def test_chain_sink_within_half_delta_set(self):
        res = detect_known_npi(AccessOracle(chain_sink()), 1, ALPHA, 0.99, 1.8)
        # the delta-set is empty, the (delta/2)-set is {1}
        assert res.nodes <= {1}

    def test_sandwiched_between_delta_sets(self):
        for g in random_suite(10, seed=3):
            t = 0
            for delta in (0.05, 0.2):
                hi, x = truth_set(g, t, delta)
                lo, _ = truth_set(g, t, delta / 2)
                res = detect_known_npi(AccessOracle(g), t, ALPHA, delta, x.sum())
                assert hi <= res.nodes <= lo

    @pytest.mark.parametrize("delta", [0.0, 1.0, 1.5])
    def test_bad_delta(self, delta):
        with pytest.raises(ParameterError):
            detect_known_npi(AccessOracle(two_cycle()), 0, ALPHA, delta, 1.0)


class TestAdaptive:
    @pytest.mark.parametrize("variant", VARIANTS)
    def test_self_loop(self, variant):
        res = detect_adaptive(AccessOracle(self_loop()), 0, ALPHA, 0.5, variant, work_cap=math.inf)
        assert res.nodes == {0}

    def test_two_cycle_small_budget(self):
        res = detect_adaptive(AccessOracle(two_cycle()), 0, ALPHA, 0.4, "indeg", budget=16,
                              work_cap=math.inf)
        assert res.nodes >= {0, 1}
        assert not res.fallback
        assert res.t_eps_history[0] == (1.0, 0.0)

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_superset_on_random_graphs(self, variant):
        for g in random_suite(15, seed=41):
            for t in (0, g.n - 1):
                for delta in (0.02, 0.1, 0.3):
                    want, _ = truth_set(g, t, delta)
                    res = detect_adaptive(AccessOracle(g), t, ALPHA, delta, variant,
                                          work_cap=math.inf)
                    assert want <= res.nodes

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_hard_instance_contains_core(self, variant):
        g, meta = gen_contribution_hard(200, 2000, 3, 6)
        res = detect_adaptive(AccessOracle(g), meta.t, ALPHA, meta.delta, variant)
        core = set(meta.nodes(meta.U)) | set(meta.nodes(meta.V)) | {meta.t}
        assert core <= res.nodes
        assert not res.fallback

    def test_work_cap_falls_back_to_all_nodes(self):
        g, meta = gen_contribution_hard(50, 500, 3, 6)
        res = detect_adaptive(AccessOracle(g), meta.t, ALPHA, 0.001, "indeg", work_cap=100)
        assert res.fallback
        assert res.nodes == set(range(g.n))

    def test_budget_respected(self):
        g, meta = gen_contribution_hard(200, 2000, 4, 8)
        delta = meta.delta
        res = detect_adaptive(AccessOracle(g), meta.t, ALPHA, delta, "indeg", work_cap=math.inf)
        total = sum(tv for _, tv in res.t_eps_history)
        assert total <= default_budget(ALPHA, "indeg") / delta
        assert res.stopped_by == "indeg" or res.push.residues == {}

    def test_query_accounting_indeg(self):
        g, meta = gen_contribution_hard(300, 3000, 5, 10)
        delta = meta.delta
        res = detect_adaptive(AccessOracle(g), meta.t, ALPHA, delta, "indeg", work_cap=math.inf)
        d_in = int(g.d_in.max())
        # a pushback costs 1 + 2 d_in queries and one tally unit; the aborted
        # run overshoots the budget by at most one unit
        assert res.stats.local_total <= (1 + 2 * d_in) * (default_budget(ALPHA, "indeg") / delta + 1)

    def test_query_accounting_outdeg(self):
        g, meta = gen_contribution_hard(300, 3000, 5, 10)
        delta = meta.delta
        res = detect_adaptive(AccessOracle(g), meta.t, ALPHA, delta, "outdeg", work_cap=math.inf)
        d_in, d_out = int(g.d_in.max()), int(g.d_out.max())
        # receipts <= d_out * tally, pushbacks <= receipts + 1 per run
        limit = default_budget(ALPHA, "outdeg") / delta + d_in
        runs = len(res.t_eps_history) + 1
        assert res.stats.local_total <= 3 * d_out * limit + runs

    def test_tally_growth(self):
        for g in random_suite(6, seed=9):
            x = exact_contributions(g, 0, ALPHA).values
            npi = x.sum()
            for eps in (0.5, 0.1, 0.01):
                pr = approx_contributions(AccessOracle(g), 0, ALPHA, eps)
                assert pr.t_eps("indeg") <= npi / (ALPHA * eps) + 1
                assert pr.t_eps("outdeg") <= npi / (ALPHA * (1 - ALPHA) * eps) + 1

    def test_instrumentation_free(self):
        g, meta = gen_contribution_hard(100, 1000, 3, 5)
        a = AccessOracle(g)
        b = AccessOracle(g)
        pr = approx_contributions(a, meta.t, ALPHA, 0.01)
        for variant in ("indeg", "outdeg", "sqrt_m"):
            pr.t_eps(variant)
        approx_contributions(b, meta.t, ALPHA, 0.01)
        assert a.snapshot_stats() == b.snapshot_stats()

    def test_combined_tracks_all(self):
        g, meta = gen_contribution_hard(200, 2000, 3, 6)
        res = detect_adaptive(AccessOracle(g), meta.t, ALPHA, meta.delta, "combined")
        assert set(res.histories) == {"indeg", "outdeg", "sqrt_m"}
        if res.stopped_by is not None:
            assert res.t_eps_history == res.histories[res.stopped_by]

    def test_rejects(self):
        with pytest.raises(ParameterError):
            detect_adaptive(AccessOracle(two_cycle()), 0, ALPHA, 0.3, "median")
        with pytest.raises(ParameterError):
            detect_adaptive(AccessOracle(two_cycle()), 0, ALPHA, 0.0)

    def test_json(self):
        res = detect_adaptive(AccessOracle(two_cycle()), 0, ALPHA, 0.4, work_cap=math.inf)
        d = res.to_dict()
        assert d["nodes"] == [0, 1]
        assert d["t_eps_history"][0] == [1.0, 0.0]
        assert "t_eps_history" in res.to_json()


def test_default_budgets():
    assert default_budget(0.2, "indeg") == pytest.approx(20.0)
    assert default_budget(0.2, "outdeg") == pytest.approx(25.0)
    assert default_budget(0.2, "sqrt_m") == pytest.approx(20.0 / math.sqrt(0.8))
    with pytest.raises(ParameterError):
        default_budget(0.2, "combined")
