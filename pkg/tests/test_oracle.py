import numpy as np
import pytest

from localpr import (AccessOracle, PermutedOracle, QueryError, QueryStats, WalkConfig,
                     approx_contributions, mc_pagerank)
from localpr.streams import stream

from graphs import random_digraph, self_loop, two_cycle


class TestQueries:
    def test_two_cycle_parent(self):
        assert AccessOracle(two_cycle()).parent(0, 1) == 1

    def test_self_loop_child(self):
        assert AccessOracle(self_loop()).child(0, 1) == 0

    def test_jump_uniform(self):
        o = AccessOracle(two_cycle())
        rng = stream(3)
        hits = sum(o.jump(rng) == 0 for _ in range(10_000))
        assert 0.45 <= hits / 10_000 <= 0.55
        assert o.n_jump == 10_000

    @pytest.mark.parametrize("call", [
        lambda o: o.parent(0, 0),
        lambda o: o.parent(0, 2),
        lambda o: o.child(1, 5),
        lambda o: o.indeg(2),
        lambda o: o.outdeg(-1),
    ])
    def test_out_of_range(self, call):
        with pytest.raises(QueryError):
            call(AccessOracle(two_cycle()))

    def test_failed_query_not_counted(self):
        o = AccessOracle(two_cycle())
        with pytest.raises(QueryError):
            o.parent(0, 3)
        assert o.snapshot_stats() == QueryStats()


class TestStats:
    def test_fresh_is_zero(self):
        assert AccessOracle(two_cycle()).snapshot_stats() == QueryStats()

    def test_one_parent_call(self):
        o = AccessOracle(two_cycle())
        o.parent(1, 1)
        assert o.snapshot_stats() == QueryStats(n_parent=1)

    def test_reset(self):
        o = AccessOracle(two_cycle())
        o.indeg(0)
        o.child(0, 1)
        o.jump(stream(0))
        o.reset_stats()
        assert o.snapshot_stats() == QueryStats()

    def test_snapshot_is_copy(self):
        o = AccessOracle(two_cycle())
        snap = o.snapshot_stats()
        o.indeg(0)
        assert snap.n_indeg == 0

    def test_arithmetic_and_json(self):
        a = QueryStats(1, 2, 3, 4, 5)
        b = QueryStats(1, 1, 1, 1, 1)
        assert (a - b) + b == a
        assert a.local_total == 10
        assert a.total == 15
        assert QueryStats.from_dict(a.to_dict()) == a
        assert '"local_total": 10' in a.to_json()

    def test_counter_exactness_under_push(self):
        g = random_digraph(80, 0.06, 5)
        o = AccessOracle(g)
        pr = approx_contributions(o, 3, 0.2, 0.001)
        assert o.n_parent == sum(s * int(g.d_in[v]) for v, s in pr.sp.items())
        assert o.n_indeg == sum(pr.sp.values()) == pr.pushbacks
        assert o.n_outdeg == o.n_parent
        assert o.n_child == o.n_jump == 0


class TestPermutedOracle:
    def test_identity_matches_base(self):
        g = random_digraph(20, 0.2, 1)
        base = AccessOracle(g)
        ident = PermutedOracle(AccessOracle(g), np.arange(g.n))
        for v in range(g.n):
            assert ident.indeg(v) == base.indeg(v)
            assert [ident.child(v, i) for i in range(1, ident.outdeg(v) + 1)] == \
                g.children(v).tolist()

    def test_relabelled_adjacency(self):
        g = random_digraph(25, 0.15, 2)
        perm = stream(9).permutation(g.n)
        po = PermutedOracle(AccessOracle(g), perm)
        for v in range(g.n):
            x = int(perm[v])
            assert po.outdeg(x) == g.d_out[v]
            kids = [po.child(x, i) for i in range(1, po.outdeg(x) + 1)]
            assert kids == perm[g.children(v)].tolist()
        assert np.array_equal(np.sort(po.graph.d_in), np.sort(g.d_in))

    def test_counts_delegate(self):
        base = AccessOracle(two_cycle())
        po = PermutedOracle(base, np.array([1, 0]))
        po.parent(0, 1)
        assert base.n_parent == 1
        assert po.snapshot_stats() == base.snapshot_stats()

    def test_bad_permutation(self):
        with pytest.raises(ValueError):
            PermutedOracle(AccessOracle(two_cycle()), np.array([0, 0]))

    def test_push_invariance(self):
        g = random_digraph(40, 0.1, 3)
        perm = stream(4).permutation(g.n)
        t = 5
        a = approx_contributions(AccessOracle(g), t, 0.2, 0.01)
        b = approx_contributions(PermutedOracle(AccessOracle(g), perm), int(perm[t]), 0.2, 0.01)
        assert a.pushbacks == b.pushbacks
        assert {int(perm[v]): x for v, x in a.reserves.items()} == b.reserves

    def test_walk_invariance(self):
        g = random_digraph(30, 0.12, 6)
        perm = stream(8).permutation(g.n)
        t = 2
        cfg = WalkConfig(0.2, seed=17)
        a = mc_pagerank(AccessOracle(g), t, cfg, 2000)
        b = mc_pagerank(PermutedOracle(AccessOracle(g), perm), int(perm[t]), cfg, 2000)
        # jump draws a base node and child indices are shared, so walks coincide
        assert a.value == b.value
