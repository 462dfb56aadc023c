"""Arc-centric graph access with per-query counters.

Every local algorithm in the package touches the graph only through an
:class:`AccessOracle`, so its query complexity is exactly the counter total.
Edge indices are 1-based, as in the push loop ``for i = 1..indeg(v)``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import QueryError
from .graph import Graph

__all__ = ["QueryStats", "AccessOracle", "PermutedOracle"]


@dataclass
class QueryStats:
    n_indeg: int = 0
    n_outdeg: int = 0
    n_parent: int = 0
    n_child: int = 0
    n_jump: int = 0

    @property
    def local_total(self) -> int:
        return self.n_indeg + self.n_outdeg + self.n_parent + self.n_child

    @property
    def total(self) -> int:
        return self.local_total + self.n_jump

    def __sub__(self, other: "QueryStats") -> "QueryStats":
        return QueryStats(*(a - b for a, b in zip(self._tuple(), other._tuple())))

    def __add__(self, other: "QueryStats") -> "QueryStats":
        return QueryStats(*(a + b for a, b in zip(self._tuple(), other._tuple())))

    def _tuple(self):
        return (self.n_indeg, self.n_outdeg, self.n_parent, self.n_child, self.n_jump)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["local_total"] = self.local_total
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "QueryStats":
        return cls(**{k: int(d[k]) for k in ("n_indeg", "n_outdeg", "n_parent", "n_child", "n_jump")})


class AccessOracle:
    """Query facade over a :class:`Graph`.

    Counters live on the instance. Create one oracle per experiment; several
    oracles may share one graph.
    """

    def __init__(self, graph: Graph):
        self.graph = graph
        self.n = graph.n
        # plain lists: scalar indexing on numpy arrays dominates push loops otherwise
        self._out_ptr = graph.out_ptr.tolist()
        self._out_idx = graph.out_idx.tolist()
        self._in_ptr = graph.in_ptr.tolist()
        self._in_idx = graph.in_idx.tolist()
        self._d_out = graph.d_out.tolist()
        self._d_in = graph.d_in.tolist()
        self.reset_stats()

    @property
    def m(self) -> int:
        return self.graph.m

    def _check_node(self, v):
        if not 0 <= v < self.n:
            raise QueryError(f"node {v} outside [0, {self.n})")

    def indeg(self, v: int) -> int:
        self._check_node(v)
        self.n_indeg += 1
        return self._d_in[v]

    def outdeg(self, v: int) -> int:
        self._check_node(v)
        self.n_outdeg += 1
        return self._d_out[v]

    def parent(self, v: int, i: int) -> int:
        self._check_node(v)
        if not 1 <= i <= self._d_in[v]:
            raise QueryError(f"parent index {i} outside [1, {self._d_in[v]}] for node {v}")
        self.n_parent += 1
        return self._in_idx[self._in_ptr[v] + i - 1]

    def child(self, v: int, i: int) -> int:
        self._check_node(v)
        if not 1 <= i <= self._d_out[v]:
            raise QueryError(f"child index {i} outside [1, {self._d_out[v]}] for node {v}")
        self.n_child += 1
        return self._out_idx[self._out_ptr[v] + i - 1]

    def jump(self, rng: np.random.Generator) -> int:
        self.n_jump += 1
        return int(rng.integers(self.n))

    def snapshot_stats(self) -> QueryStats:
        return QueryStats(self.n_indeg, self.n_outdeg, self.n_parent, self.n_child, self.n_jump)

    def reset_stats(self) -> None:
        self.n_indeg = self.n_outdeg = self.n_parent = self.n_child = self.n_jump = 0


class PermutedOracle:
    """The graph ``base`` relabelled by ``perm``: node ``x`` here is ``perm^-1(x)`` there.

    Adjacency order is inherited from the base graph. Counting is delegated to
    the base oracle, so stats read the same through either handle.
    """

    def __init__(self, base: AccessOracle, perm: np.ndarray, seed=None):
        perm = np.asarray(perm, dtype=np.int64)
        if perm.shape != (base.n,) or not np.array_equal(np.sort(perm), np.arange(base.n)):
            raise ValueError("perm must be a permutation of range(n)")
        self.base = base
        self.perm = perm
        self.seed = seed
        self.n = base.n
        self._fwd = perm.tolist()
        inv = np.empty_like(perm)
        inv[perm] = np.arange(base.n)
        self.inverse = inv
        self._inv = inv.tolist()

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def graph(self) -> Graph:
        """Materialized relabelled graph (built on demand; not a query)."""
        g = self.base.graph
        return Graph.from_edges(g.n, np.column_stack([self.perm[g.src], self.perm[g.dst]]))

    def _base_node(self, x):
        if not 0 <= x < self.n:
            raise QueryError(f"node {x} outside [0, {self.n})")
        return self._inv[x]

    def indeg(self, x: int) -> int:
        return self.base.indeg(self._base_node(x))

    def outdeg(self, x: int) -> int:
        return self.base.outdeg(self._base_node(x))

    def parent(self, x: int, i: int) -> int:
        return self._fwd[self.base.parent(self._base_node(x), i)]

    def child(self, x: int, i: int) -> int:
        return self._fwd[self.base.child(self._base_node(x), i)]

    def jump(self, rng: np.random.Generator) -> int:
        return self._fwd[self.base.jump(rng)]

    def snapshot_stats(self) -> QueryStats:
        return self.base.snapshot_stats()

    def reset_stats(self) -> None:
        self.base.reset_stats()
