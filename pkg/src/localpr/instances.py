"""Generators for the lower-bound instance families.

``gen_contribution_hard`` builds the graph H: a target ``t`` with a self-loop,
parents ``V`` (directly or through a reversed complete tree), an exclusive
parent ``u in U`` for every ``v in V`` hidden among ``d`` parents from ``W``,
padding sinks ``X`` and an isolated filler subgraph. Detecting ``U`` forces a
scan of ``Theta(d |V|)`` parent slots.

``gen_pagerank_hard`` adds a set ``Y`` of which the first ``floor(i |Y| / p)``
nodes feed ``u* = U[0]``, giving a family H_0..H_p whose ``pi(t)`` grows with
``i`` while differing only in edges that are hard to reach.

Node ids are contiguous per set, in the order t, U, V, W, X, Y, tree levels,
filler, so every set in :class:`HardInstanceMeta` is an interval
``[start, stop)``.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import GenerationError
from .exact import exact_contributions
from .graph import Graph, write_edge_list
from .oracle import AccessOracle, PermutedOracle
from .streams import stream

__all__ = [
    "HardInstanceMeta",
    "gen_contribution_hard",
    "gen_pagerank_hard",
    "gen_pagerank_family",
    "permuted_family",
    "export_instance",
    "load_meta",
]

Range = tuple  # (start, stop)


@dataclass
class HardInstanceMeta:
    t: int
    U: Range
    V: Range
    W: Range
    X: Range
    Y: Range = (0, 0)
    u_star: Optional[int] = None
    v_star: Optional[int] = None
    d: int = 0
    p: int = 0
    i: int = 0
    arity: int = 0
    levels_V: int = 0
    levels_Y: int = 0
    alpha: float = 0.2
    n_nodes: int = 0
    m_edges: int = 0
    v_size: int = 0
    y_size: int = 0
    y_to_ustar: int = 0
    tree_V: list = field(default_factory=list)
    tree_Y: list = field(default_factory=list)
    filler: Range = (0, 0)
    max_in: int = 0
    max_out: int = 0
    k: Optional[float] = None
    beta: Optional[float] = None
    exponent: Optional[float] = None
    pi_t: Optional[float] = None
    npi: Optional[float] = None
    delta: Optional[float] = None
    kappa: Optional[float] = None
    params: dict = field(default_factory=dict)

    @staticmethod
    def nodes(r: Range) -> range:
        return range(r[0], r[1])

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "HardInstanceMeta":
        d = dict(d)
        for key in ("U", "V", "W", "X", "Y", "filler"):
            d[key] = tuple(d[key])
        for key in ("tree_V", "tree_Y"):
            d[key] = [tuple(r) for r in d[key]]
        return cls(**d)


class _Builder:
    def __init__(self):
        self.next = 0
        self.edges: list = []

    def block(self, size):
        start = self.next
        self.next += size
        return (start, self.next)

    def add(self, u, v):
        self.edges.append((u, v))


def _tree(b: _Builder, top: Range, levels: int, arity: int, root: int, feeders=None):
    """Reversed complete ``arity``-ary tree from the top level down to ``root``.

    ``top`` is level 1 with ``arity**levels`` nodes; levels 2..L are allocated
    here and level L feeds ``root``. ``feeders`` restricts which level-1 nodes
    get their outgoing tree edge (others receive a self-loop).
    """
    ranges = []
    prev = top
    for lvl in range(2, levels + 1):
        size = arity ** (levels - lvl + 1)
        cur = b.block(size)
        ranges.append(cur)
        _link(b, prev, cur[0], arity, feeders if lvl == 2 else None)
        prev = cur
    if levels == 1:
        _link_root(b, prev, root, feeders)
    else:
        for x in range(*prev):
            b.add(x, root)
    return ranges


def _link(b, prev, nxt_start, arity, feeders):
    for j, x in enumerate(range(*prev)):
        if feeders is None or j < feeders:
            b.add(x, nxt_start + j // arity)
        else:
            b.add(x, x)


def _link_root(b, prev, root, feeders):
    for j, x in enumerate(range(*prev)):
        if feeders is None or j < feeders:
            b.add(x, root)
        else:
            b.add(x, x)


def _filler(b: _Builder, m_rem: int, width: int, want_in: int, want_out: int):
    """Isolated circulant (a union of directed cycles) with out/in-degree ``width``,
    plus stars that realize declared maxima beyond ``width``."""
    start = b.next
    if m_rem > 0:
        width = max(1, width)
        k = max(width + 1, math.ceil(m_rem / width))
        blk = b.block(k)
        for j in range(k):
            for s in range(1, width + 1):
                b.add(blk[0] + j, blk[0] + (j + s) % k)
    if want_in > width and want_in > 1:
        hub = b.block(1)[0]
        leaves = b.block(want_in - 1)
        for x in range(*leaves):
            b.add(x, hub)
        b.add(hub, hub)
    if want_out > width and want_out > 1:
        hub = b.block(1)[0]
        leaves = b.block(want_out)
        for x in range(*leaves):
            b.add(hub, x)
            b.add(x, x)
    return (start, b.next)


def _levels(v_size, arity):
    levels = 0
    while arity ** (levels + 1) <= v_size:
        levels += 1
    return levels


def _skeleton(b: _Builder, n_budget, d, v_size, multi_level, arity, alpha, y_size=0,
              y_feeders=None, y_levels=0):
    """Shared construction of t, U, V, W, X (and Y when ``y_size`` > 0)."""
    w_size = max(d, v_size)
    t = b.block(1)[0]
    U = b.block(v_size)
    V = b.block(v_size)
    W = b.block(w_size)
    X = b.block(n_budget)
    Y = b.block(y_size)
    # W -> V: parent j of v is W[(v*d + j) mod |W|], all distinct since d <= |W|
    w_out = [0] * w_size
    for vi, v in enumerate(range(*V)):
        for j in range(d):
            wi = (vi * d + j) % w_size
            b.add(W[0] + wi, v)
            w_out[wi] += 1
    for vi, v in enumerate(range(*V)):
        b.add(U[0] + vi, v)
    xi = 0
    for wi in range(w_size):
        for _ in range(d - w_out[wi]):
            b.add(W[0] + wi, X[0] + xi % n_budget)
            xi += 1
    b.add(t, t)
    tree_V = []
    if multi_level:
        tree_V = _tree(b, V, _levels(v_size, arity), arity, t)
    else:
        for v in range(*V):
            b.add(v, t)
    for x in range(*X):
        b.add(x, x)
    tree_Y = []
    if y_size:
        u_star = U[0]
        if multi_level:
            tree_Y = _tree(b, Y, y_levels, arity, u_star, feeders=y_feeders)
        else:
            for j, y in enumerate(range(*Y)):
                b.add(y, u_star if j < y_feeders else y)
    return t, U, V, W, X, Y, tree_V, tree_Y


def _check_common(n_budget, m_budget, d, v_size, multi_level, arity, alpha):
    if d < 1:
        raise GenerationError("d >= 1", f"d={d}")
    if v_size < 1:
        raise GenerationError("|V| >= 1", f"|V|={v_size}")
    if n_budget < 1:
        raise GenerationError("n >= 1", f"n={n_budget}")
    if m_budget < 0:
        raise GenerationError("m >= 0", f"m={m_budget}")
    if not 0.0 < alpha < 1.0:
        raise GenerationError("alpha in (0, 1)", f"alpha={alpha}")
    if multi_level:
        if arity is None or arity < 2:
            raise GenerationError("arity >= 2 in multi-level mode", f"arity={arity}")
        if arity * (1.0 - alpha) < 1.0:
            raise GenerationError("arity * (1 - alpha) >= 1", f"arity={arity}, alpha={alpha}")
        if v_size < arity:
            raise GenerationError("|V| >= arity in multi-level mode", f"|V|={v_size}")
    w_size = max(d, v_size)
    if max(w_size, v_size) > n_budget:
        raise GenerationError("node count Theta(n + max(d, |V|)) within n",
                              f"max(d,|V|)={w_size} > n={n_budget}")
    if d * w_size > m_budget:
        raise GenerationError("edge count Theta(d max(d, |V|)) within m",
                              f"d*max(d,|V|)={d * w_size} > m={m_budget}")


def _check_degrees(d, v_size, multi_level, arity, delta_in, delta_out):
    if delta_out is not None and d > delta_out:
        raise GenerationError("d <= Delta_out", f"d={d}, Delta_out={delta_out}")
    if delta_in is not None:
        need = max(d, arity) if multi_level else max(d, v_size)
        if need > delta_in:
            raise GenerationError("max(d, |V|) <= Delta_in (or multi-level mode)",
                                  f"needs {need}, Delta_in={delta_in}")


def _finish(b, m_budget, delta_in, delta_out):
    main_m = len(b.edges)
    g0 = Graph.from_edges(b.next, b.edges)
    main_in, main_out = int(g0.d_in.max()), int(g0.d_out.max())
    want_in = main_in if delta_in is None else delta_in
    want_out = main_out if delta_out is None else delta_out
    filler = _filler(b, m_budget - main_m, min(want_in, want_out), want_in, want_out)
    return Graph.from_edges(b.next, b.edges), filler


def _annotate(g, meta, delta, alpha):
    x = exact_contributions(g, meta.t, alpha).values
    npi = float(x.sum())
    meta.npi = npi
    meta.pi_t = npi / g.n
    ratio = min(x[u] for u in range(*meta.U)) / npi
    # shave a few ulps so the recorded delta is safely attained
    meta.delta = float(ratio * (1.0 - 1e-9))
    if delta is not None and ratio < delta:
        raise GenerationError("|V| = O(1/delta)",
                              f"min pi(u,t)/(n pi(t)) = {ratio:.4g} < delta = {delta}")


def gen_contribution_hard(n_budget: int, m_budget: int, d: int, v_size: int,
                          multi_level: bool = False, arity: Optional[int] = None, *,
                          alpha: float = 0.2, delta: Optional[float] = None,
                          delta_in: Optional[int] = None, delta_out: Optional[int] = None,
                          annotate: bool = True) -> tuple[Graph, HardInstanceMeta]:
    """Build H with ``|X| = n_budget`` sinks and about ``m_budget`` edges.

    In multi-level mode ``|V|`` is rounded down to ``arity**L``. With
    ``annotate`` the exact ``pi(t)`` and the largest ``delta`` for which all of
    ``U`` is delta-contributing are recorded; passing ``delta`` additionally
    asserts that ``U`` is delta-contributing.
    """
    _check_common(n_budget, m_budget, d, v_size, multi_level, arity, alpha)
    _check_degrees(d, v_size, multi_level, arity, delta_in, delta_out)
    levels = _levels(v_size, arity) if multi_level else 1
    if multi_level:
        v_size = arity ** levels
    b = _Builder()
    t, U, V, W, X, Y, tree_V, _ = _skeleton(b, n_budget, d, v_size, multi_level, arity, alpha)
    g, filler = _finish(b, m_budget, delta_in, delta_out)
    meta = HardInstanceMeta(
        t=t, U=U, V=V, W=W, X=X, Y=Y, u_star=U[0], v_star=V[0], d=d,
        arity=arity or 0, levels_V=levels, alpha=alpha, n_nodes=g.n, m_edges=g.m,
        v_size=v_size, tree_V=tree_V, filler=filler,
        max_in=int(g.d_in.max()), max_out=int(g.d_out.max()),
        params=dict(kind="contrib", n=n_budget, m=m_budget, d=d, vsize=v_size,
                    multilevel=multi_level, arity=arity, alpha=alpha),
    )
    if annotate:
        _annotate(g, meta, delta, alpha)
    return g, meta


def _y_levels(levels_v, arity, alpha):
    k = arity * (1.0 - alpha)
    if k <= 1.0:
        raise GenerationError("k = arity * (1 - alpha) > 1 for the Y tree", f"k={k}")
    beta = math.log(1.0 - alpha) / math.log(k)
    # |Y| = |V|^(1 - beta), realized as arity**L_Y with L_Y = log_k |V|
    ly = max(1, round(levels_v * math.log(arity) / math.log(k)))
    return ly, k, beta


def gen_pagerank_hard(n_budget: int, m_budget: int, d: int, v_size: int, p: int, i: int,
                      multi_level: bool = False, arity: Optional[int] = None, *,
                      alpha: float = 0.2, y_size: Optional[int] = None,
                      delta_in: Optional[int] = None, delta_out: Optional[int] = None,
                      annotate: bool = True) -> tuple[Graph, HardInstanceMeta]:
    """Build H_i: H plus ``Y``, of which ``floor(i |Y| / p)`` nodes feed ``u*``.

    Direct mode defaults to ``|Y| = 4 |V|``. Multi-level mode sets
    ``|Y| = arity**L_Y`` with ``L_Y = round(log_k |V|)``, ``k = arity (1 - alpha)``,
    and routes ``Y`` to ``u*`` through a second reversed tree.
    """
    if p < 1:
        raise GenerationError("p >= 1", f"p={p}")
    if not 0 <= i <= p:
        raise GenerationError("0 <= i <= p", f"i={i}, p={p}")
    _check_common(n_budget, m_budget, d, v_size, multi_level, arity, alpha)
    _check_degrees(d, v_size, multi_level, arity, delta_in, delta_out)
    k = beta = exponent = None
    if multi_level:
        levels = _levels(v_size, arity)
        v_size = arity ** levels
        ly, k, beta = _y_levels(levels, arity, alpha)
        y = arity ** ly
        exponent = 1.0 / (2.0 - beta)
    else:
        levels, ly = 1, 0
        y = 4 * v_size if y_size is None else y_size
        if y < 1:
            raise GenerationError("|Y| >= 1", f"|Y|={y}")
    feeders = (i * y) // p
    b = _Builder()
    t, U, V, W, X, Y, tree_V, tree_Y = _skeleton(
        b, n_budget, d, v_size, multi_level, arity, alpha, y_size=y, y_feeders=feeders,
        y_levels=ly)
    g, filler = _finish(b, m_budget, delta_in, delta_out)
    meta = HardInstanceMeta(
        t=t, U=U, V=V, W=W, X=X, Y=Y, u_star=U[0], v_star=V[0], d=d, p=p, i=i,
        arity=arity or 0, levels_V=levels, levels_Y=ly, alpha=alpha, n_nodes=g.n,
        m_edges=g.m, v_size=v_size, y_size=y, y_to_ustar=feeders, tree_V=tree_V,
        tree_Y=tree_Y, filler=filler, max_in=int(g.d_in.max()), max_out=int(g.d_out.max()),
        k=k, beta=beta, exponent=exponent,
        params=dict(kind="pr-family", n=n_budget, m=m_budget, d=d, vsize=v_size, p=p, i=i,
                    multilevel=multi_level, arity=arity, alpha=alpha, ysize=y),
    )
    if annotate:
        _annotate(g, meta, None, alpha)
    return g, meta


def gen_pagerank_family(n_budget, m_budget, d, v_size, p, multi_level=False, arity=None,
                        **kw) -> list:
    """H_0..H_p with ``kappa = min_i pi_i(t) / pi_{i-1}(t) - 1`` recorded on each."""
    kw["annotate"] = True
    fam = [gen_pagerank_hard(n_budget, m_budget, d, v_size, p, i, multi_level, arity, **kw)
           for i in range(p + 1)]
    ratios = [fam[j][1].pi_t / fam[j - 1][1].pi_t for j in range(1, p + 1)]
    kappa = min(ratios) - 1.0
    for _, meta in fam:
        meta.kappa = kappa
    return fam


def permuted_family(instance, p: int, master_seed: int = 0) -> list:
    """``p`` relabelled oracles over one instance; copy 0 is the identity.

    Copy ``j >= 1`` uses the permutation drawn from ``stream(master_seed, j)``.
    Each copy has its own base oracle, hence its own counters.
    """
    g = instance[0] if isinstance(instance, tuple) else instance
    out = []
    for j in range(p):
        perm = np.arange(g.n) if j == 0 else stream(master_seed, j).permutation(g.n)
        out.append(PermutedOracle(AccessOracle(g), perm, seed=(master_seed, j)))
    return out


def export_instance(g: Graph, meta: HardInstanceMeta, prefix) -> tuple[str, str]:
    """Write ``<prefix>.el`` and the sidecar ``<prefix>.json``."""
    prefix = os.fspath(prefix)
    el, js = prefix + ".el", prefix + ".json"
    write_edge_list(g, el)
    with open(js, "w") as fh:
        fh.write(meta.to_json(indent=2))
    return el, js


def load_meta(path) -> HardInstanceMeta:
    with open(path) as fh:
        return HardInstanceMeta.from_dict(json.load(fh))
