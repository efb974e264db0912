"""k-core decomposition.

``kcore_fast`` is the O(|E|) bin-sort peeling of Batagelj and Zaversnik;
``kcore_naive`` peels round by round and serves as its oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np


@dataclass(frozen=True, eq=False)
class CoreAssignment:
    core_of: np.ndarray

    def __post_init__(self):
        self.core_of.setflags(write=False)

    @property
    def max_core(self):
        return int(self.core_of.max()) if len(self.core_of) else 0

    @property
    def shells(self):
        """Mapping coreness -> sorted node ids, nonempty shells only."""
        return {int(k): np.flatnonzero(self.core_of == k) for k in np.unique(self.core_of)}

    def shell_sizes(self):
        ks, counts = np.unique(self.core_of, return_counts=True)
        return {int(k): int(c) for k, c in zip(ks, counts)}

    def __eq__(self, other):
        return isinstance(other, CoreAssignment) and np.array_equal(self.core_of, other.core_of)

    __hash__ = None


@numba.njit(cache=True)
def _bz_peel(indptr, indices):
    n = len(indptr) - 1
    deg = np.empty(n, dtype=np.int64)
    md = 0
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
        if deg[v] > md:
            md = deg[v]
    bin_ = np.zeros(md + 1, dtype=np.int64)
    for v in range(n):
        bin_[deg[v]] += 1
    start = 0
    for d in range(md + 1):
        num = bin_[d]
        bin_[d] = start
        start += num
    pos = np.empty(n, dtype=np.int64)
    vert = np.empty(n, dtype=np.int64)
    for v in range(n):
        pos[v] = bin_[deg[v]]
        vert[pos[v]] = v
        bin_[deg[v]] += 1
    for d in range(md, 0, -1):
        bin_[d] = bin_[d - 1]
    if md >= 0:
        bin_[0] = 0
    for i in range(n):
        v = vert[i]
        for e in range(indptr[v], indptr[v + 1]):
            u = indices[e]
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bin_[du]
                w = vert[pw]
                if u != w:
                    pos[u] = pw
                    vert[pu] = w
                    pos[w] = pu
                    vert[pw] = u
                bin_[du] += 1
                deg[u] -= 1
    return deg


def kcore_fast(g):
    """Coreness of every node in time linear in the edge count."""
    if g.node_count == 0:
        return CoreAssignment(np.zeros(0, dtype=np.int64))
    return CoreAssignment(_bz_peel(g.indptr, g.indices))


def kcore_naive(g):
    """Reference peeling: for k = 1, 2, ... strip nodes of degree < k."""
    n = g.node_count
    deg = g.degrees.astype(np.int64).copy()
    alive = np.ones(n, dtype=bool)
    core = np.zeros(n, dtype=np.int64)
    k = 0
    while alive.any():
        # every survivor of round k belongs to the k-core
        core[alive] = k
        k += 1
        changed = True
        while changed:
            changed = False
            for v in np.flatnonzero(alive & (deg < k)):
                alive[v] = False
                changed = True
                for u in g.neighbors(v)[0]:
                    if alive[u]:
                        deg[u] -= 1
    return CoreAssignment(core)


def write_coreness_tsv(g, cores, path):
    with open(path, "w", encoding="utf-8") as fh:
        for token, k in zip(g.labels, cores.core_of):
            fh.write(f"{token}\t{int(k)}\n")
