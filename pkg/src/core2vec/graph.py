"""Immutable undirected graph in CSR form, plus edge-list I/O.

Every edge is stored in both endpoint rows and each row is sorted by
neighbor id, so edge queries are a binary search.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

logger = logging.getLogger(__name__)

COMMENT_PREFIXES = frozenset("#%")


class GraphFormatError(ValueError):
    """Raised for malformed edge-list input."""

    def __init__(self, message, path=None, lineno=None):
        loc = ""
        if path is not None:
            loc = f"{path}:"
        if lineno is not None:
            loc += f"{lineno}: "
        elif loc:
            loc += " "
        super().__init__(loc + message)
        self.path = path
        self.lineno = lineno


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected weighted graph with dense node ids ``0 .. node_count-1``.

    ``indptr``/``indices``/``weights`` follow the scipy CSR layout.
    """

    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    labels: tuple[str, ...]
    self_loops_dropped: int = 0
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for name in ("indptr", "indices", "weights"):
            getattr(self, name).setflags(write=False)
        if self._index is None:
            object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.labels)})

    @classmethod
    def from_edges(cls, n, src, dst, weight=None, labels=None, collapse="sum"):
        """Build a graph from (possibly directed, repeated) edge arrays.

        Both directions are added and duplicates merged with ``collapse``
        (``"sum"`` or ``"max"``), so an input pair ``(a,b,2), (b,a,3)``
        becomes a single edge of weight 5 under ``"sum"``. Self-loops are
        dropped and counted.
        """
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        if weight is None:
            weight = np.ones(len(src), dtype=np.float64)
        weight = np.asarray(weight, dtype=np.float64)
        if not (len(src) == len(dst) == len(weight)):
            raise ValueError("src, dst and weight must have equal length")
        if len(src) and (src.min() < 0 or dst.min() < 0 or max(src.max(), dst.max()) >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(~np.isfinite(weight)) or np.any(weight <= 0):
            raise ValueError("edge weights must be finite and positive")
        if collapse not in ("sum", "max"):
            raise ValueError(f"unknown collapse policy {collapse!r}")

        loops = src == dst
        n_loops = int(loops.sum())
        if n_loops:
            logger.warning("dropping %d self-loop(s)", n_loops)
        src, dst, weight = src[~loops], dst[~loops], weight[~loops]

        if collapse == "sum":
            a = sp.coo_matrix((weight, (src, dst)), shape=(n, n)).tocsr()
            a.sum_duplicates()
            a = (a + a.T).tocsr()
        else:
            # order-independent max over all occurrences of {u, v}
            lo, hi = np.minimum(src, dst), np.maximum(src, dst)
            key = lo * n + hi
            order = np.lexsort((-weight, key))
            key, weight = key[order], weight[order]
            first = np.ones(len(key), dtype=bool)
            first[1:] = key[1:] != key[:-1]
            key, weight = key[first], weight[first]
            lo, hi = key // n, key % n
            a = sp.coo_matrix(
                (np.concatenate([weight, weight]), (np.concatenate([lo, hi]), np.concatenate([hi, lo]))),
                shape=(n, n),
            ).tocsr()
        a.sort_indices()
        if labels is None:
            labels = tuple(str(i) for i in range(n))
        labels = tuple(labels)
        if len(labels) != n or len(set(labels)) != n:
            raise ValueError("labels must be n distinct strings")
        return cls(
            indptr=a.indptr.astype(np.int64),
            indices=a.indices.astype(np.int64),
            weights=a.data.astype(np.float64),
            labels=labels,
            self_loops_dropped=n_loops,
        )

    @property
    def node_count(self):
        return len(self.indptr) - 1

    @property
    def edge_count(self):
        return len(self.indices) // 2

    @property
    def degrees(self):
        return np.diff(self.indptr)

    def id_of(self, token):
        return self._index[token]

    def get_id(self, token, default=None):
        return self._index.get(token, default)

    def _check(self, u):
        if not 0 <= u < self.node_count:
            raise IndexError(f"node id {u} out of range [0, {self.node_count})")

    def neighbors(self, u):
        """Sorted neighbor ids and edge weights of ``u`` as two arrays."""
        self._check(u)
        lo, hi = self.indptr[u], self.indptr[u + 1]
        return self.indices[lo:hi], self.weights[lo:hi]

    def neighbor_list(self, u):
        nbrs, w = self.neighbors(u)
        return [(int(v), float(x)) for v, x in zip(nbrs, w)]

    def degree(self, u):
        self._check(u)
        return int(self.indptr[u + 1] - self.indptr[u])

    def edge_exists(self, u, v):
        self._check(u)
        self._check(v)
        lo, hi = self.indptr[u], self.indptr[u + 1]
        pos = lo + np.searchsorted(self.indices[lo:hi], v)
        return bool(pos < hi and self.indices[pos] == v)

    def edge_weight(self, u, v):
        self._check(u)
        self._check(v)
        lo, hi = self.indptr[u], self.indptr[u + 1]
        pos = lo + np.searchsorted(self.indices[lo:hi], v)
        if pos < hi and self.indices[pos] == v:
            return float(self.weights[pos])
        return 0.0

    def edges(self):
        """Arrays ``(u, v, w)`` listing each undirected edge once with ``u < v``."""
        rows = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees)
        keep = rows < self.indices
        return rows[keep], self.indices[keep], self.weights[keep]

    def induced_min_degree(self, mask):
        """Minimum degree of the subgraph induced by boolean ``mask`` (0 if empty)."""
        mask = np.asarray(mask, dtype=bool)
        if not mask.any():
            return 0
        rows = np.repeat(np.arange(self.node_count), self.degrees)
        inside = mask[rows] & mask[self.indices]
        deg = np.bincount(rows[inside], minlength=self.node_count)
        return int(deg[mask].min())

    def summary(self):
        n, m = self.node_count, self.edge_count
        avg = 2.0 * m / n if n else 0.0
        return f"nodes={n} edges={m} avg_degree={avg:.6g}"

    def __repr__(self):
        return f"Graph({self.summary()})"


def load_edge_list(path, weighted=False, comment_prefixes=COMMENT_PREFIXES,
                   collapse="sum", lowercase=False):
    """Parse a whitespace-separated ``tokenA tokenB [weight]`` file.

    Tokens are interned to ids in order of first appearance. Directed
    input is symmetrized by summing both directions. With
    ``weighted=False`` a third column is still validated but every edge
    ends up with weight 1.
    """
    labels = {}
    src, dst, wts = [], [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line[0] in comment_prefixes:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise GraphFormatError(f"expected 2 or 3 fields, got {len(parts)}", path, lineno)
            w = 1.0
            if len(parts) == 3:
                try:
                    w = float(parts[2])
                except ValueError:
                    raise GraphFormatError(f"non-numeric weight {parts[2]!r}", path, lineno) from None
                if not np.isfinite(w) or w <= 0:
                    raise GraphFormatError(f"weight must be positive, got {parts[2]}", path, lineno)
            a, b = parts[0], parts[1]
            if lowercase:
                a, b = a.lower(), b.lower()
            src.append(labels.setdefault(a, len(labels)))
            dst.append(labels.setdefault(b, len(labels)))
            wts.append(w if weighted else 1.0)
    if not labels:
        raise GraphFormatError("edge list contains no edges", path)
    g = Graph.from_edges(len(labels), src, dst, wts, labels=list(labels), collapse=collapse)
    if not weighted:
        g = Graph(g.indptr, g.indices, np.ones_like(g.weights), g.labels, g.self_loops_dropped)
    if g.edge_count == 0:
        raise GraphFormatError("edge list contains only self-loops", path)
    return g


def save_edge_list(g, path, weighted=True):
    """Write each undirected edge once as ``tokenA tokenB [weight]``."""
    u, v, w = g.edges()
    with open(path, "w", encoding="utf-8") as fh:
        for a, b, x in zip(u, v, w):
            if weighted:
                fh.write(f"{g.labels[a]} {g.labels[b]} {float(x)!r}\n")
            else:
                fh.write(f"{g.labels[a]} {g.labels[b]}\n")


def les_miserables(weighted=False):
    """Bundled Les Misérables co-appearance network (77 nodes, 254 edges)."""
    return load_edge_list(dataset_path("lesmis"), weighted=weighted)


def dataset_path(name):
    path = os.path.join(os.path.dirname(__file__), "data", f"{name}.tsv")
    if not os.path.exists(path):
        raise FileNotFoundError(f"no bundled dataset named {name!r}")
    return path
