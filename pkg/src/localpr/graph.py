"""Immutable directed multigraph in compressed sparse form.

Both directions are stored so that the i-th child and the i-th parent of a
node are O(1) lookups. Children keep the edge-list order; parents keep the
insertion order of the edges that created them.
"""

from __future__ import annotations

import io
import os
import re
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Optional, Union

import numpy as np

from .errors import GraphBoundsError, GraphParseError, GraphValidationError

__all__ = [
    "Graph",
    "load_edge_list",
    "write_edge_list",
    "validate_out_degrees",
    "max_degrees",
]

_HEADER = re.compile(rb"^#\s*n\s*=\s*(\d+)\s*$")


def _csr(n, keys, vals):
    # stable sort keeps insertion order inside each row
    order = np.argsort(keys, kind="stable")
    counts = np.bincount(keys, minlength=n).astype(np.int64)
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    return ptr, vals[order].astype(np.int64), counts


@dataclass(frozen=True, eq=False)
class Graph:
    """Directed graph with forward and backward CSR adjacency.

    Use :meth:`from_edges` to build one; the constructor takes the raw arrays.
    ``labels`` maps dense ids back to original ids when the graph was loaded
    with remapping, and is ``None`` otherwise.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    out_ptr: np.ndarray
    out_idx: np.ndarray
    in_ptr: np.ndarray
    in_idx: np.ndarray
    d_out: np.ndarray
    d_in: np.ndarray
    labels: Optional[np.ndarray] = field(default=None)

    @classmethod
    def from_edges(cls, n: int, edges: Union[Iterable, np.ndarray], labels=None) -> "Graph":
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("edges must be a sequence of (u, v) pairs")
        if n < 1:
            raise GraphBoundsError(f"node count must be >= 1, got {n}")
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            bad = int(arr.max()) if arr.max() >= n else int(arr.min())
            raise GraphBoundsError(f"node id {bad} outside [0, {n})")
        src = np.ascontiguousarray(arr[:, 0])
        dst = np.ascontiguousarray(arr[:, 1])
        out_ptr, out_idx, d_out = _csr(n, src, dst)
        in_ptr, in_idx, d_in = _csr(n, dst, src)
        for a in (src, dst, out_ptr, out_idx, in_ptr, in_idx, d_out, d_in):
            a.setflags(write=False)
        return cls(n, src, dst, out_ptr, out_idx, in_ptr, in_idx, d_out, d_in, labels)

    @property
    def m(self) -> int:
        return int(self.src.shape[0])

    def children(self, v: int) -> np.ndarray:
        return self.out_idx[self.out_ptr[v]:self.out_ptr[v + 1]]

    def parents(self, v: int) -> np.ndarray:
        return self.in_idx[self.in_ptr[v]:self.in_ptr[v + 1]]

    def edges(self) -> np.ndarray:
        return np.column_stack([self.src, self.dst])

    def transition_matrix(self):
        """Row-stochastic walk matrix ``P[u, v] = mult(u, v) / d_out(u)`` as scipy CSR.

        Rows of dangling nodes are left empty.
        """
        import scipy.sparse as sp

        w = 1.0 / np.maximum(self.d_out[self.src], 1)
        return sp.csr_matrix((w, (self.src, self.dst)), shape=(self.n, self.n))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _read_bytes(source) -> bytes:
    if isinstance(source, (bytes, bytearray)):
        return bytes(source)
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return fh.read()
    data = source.read()
    return data.encode() if isinstance(data, str) else data


def load_edge_list(source: Union[BinaryIO, bytes, str, os.PathLike],
                   remap: bool = False) -> Graph:
    """Parse a whitespace-separated ``u v`` edge list.

    An optional first line ``# n=<count>`` fixes the node count; otherwise it is
    one more than the largest id seen. Other ``#`` lines are comments. With
    ``remap=True`` arbitrary non-negative ids are compacted to ``0..n-1`` in
    order of first appearance and the original ids kept in ``Graph.labels``.
    """
    data = _read_bytes(source)
    declared = None
    src, dst = [], []
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(b"#"):
            if lineno == 1:
                mt = _HEADER.match(line)
                if mt:
                    declared = int(mt.group(1))
            continue
        parts = line.split()
        if len(parts) != 2 or not (parts[0].isdigit() and parts[1].isdigit()):
            raise GraphParseError(lineno, raw.decode(errors="replace"))
        src.append(int(parts[0]))
        dst.append(int(parts[1]))

    labels = None
    if remap:
        ids: dict[int, int] = {}
        for x in _interleave(src, dst):
            ids.setdefault(x, len(ids))
        src = [ids[x] for x in src]
        dst = [ids[x] for x in dst]
        labels = np.fromiter(ids.keys(), dtype=np.int64, count=len(ids))
        n = len(ids) if declared is None else declared
        if declared is not None and len(ids) > declared:
            raise GraphBoundsError(f"{len(ids)} distinct ids exceed declared n={declared}")
    else:
        top = max(max(src, default=-1), max(dst, default=-1))
        if declared is not None:
            if top >= declared:
                raise GraphBoundsError(f"node id {top} exceeds declared n={declared}")
            n = declared
        else:
            n = top + 1
    if n < 1:
        raise GraphBoundsError("edge list defines no nodes")
    edges = np.column_stack([np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)])
    return Graph.from_edges(n, edges, labels=labels)


def _interleave(a, b):
    for x, y in zip(a, b):
        yield x
        yield y


def write_edge_list(g: Graph, dest: Union[BinaryIO, str, os.PathLike]) -> None:
    """Write ``g`` with a ``# n=`` header so isolated trailing nodes survive."""
    buf = io.StringIO()
    buf.write(f"# n={g.n}\n")
    for u, v in zip(g.src.tolist(), g.dst.tolist()):
        buf.write(f"{u} {v}\n")
    payload = buf.getvalue().encode()
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "wb") as fh:
            fh.write(payload)
    else:
        dest.write(payload)


def validate_out_degrees(g: Graph, policy: str = "reject") -> Graph:
    """Enforce that every node has a child.

    ``reject`` raises :class:`GraphValidationError` naming the dangling nodes;
    ``add_self_loops`` returns a new graph where each of them gains a self-loop.
    """
    dangling = np.flatnonzero(g.d_out == 0)
    if dangling.size == 0:
        return g
    if policy == "reject":
        shown = dangling[:20].tolist()
        more = "" if dangling.size <= 20 else f" (+{dangling.size - 20} more)"
        raise GraphValidationError(f"nodes with zero out-degree: {shown}{more}", dangling.tolist())
    if policy == "add_self_loops":
        loops = np.column_stack([dangling, dangling])
        return Graph.from_edges(g.n, np.vstack([g.edges(), loops]), labels=g.labels)
    raise ValueError(f"unknown dangling-node policy {policy!r}")


def max_degrees(g: Graph) -> tuple[int, int]:
    """Return ``(max in-degree, max out-degree)``."""
    return int(g.d_in.max()), int(g.d_out.max())
