"""Core-biased second-order random walks.

From previous node ``i`` and current node ``j`` a candidate neighbor
``k`` gets the unnormalized score ``pi * w_jk`` with

    k == i                 pi = 1 / ((delta + 1) * penalty * lam)
    k != i, (k, i) in E    pi = 1
    k != i, (k, i) not in E  pi = 1 / ((delta + 1) * penalty * gamma)

where ``delta`` is a coreness difference selected by ``core_diff``:

    "curr-cand"  |core(j) - core(k)|   (default)
    "prev-curr"  |core(i) - core(j)|   (constant over candidates)
    "none"       0                     (with penalty=1 this is node2vec, p=lam, q=gamma)

Transition distributions are evaluated lazily at every step; nothing
of size |V| x deg^2 is ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

CORE_DIFF_MODES = {"curr-cand": 0, "prev-curr": 1, "none": 2}


@dataclass(frozen=True)
class WalkParams:
    lam: float = 0.35
    gamma: float = 2.5
    penalty: float = 3.5
    walk_length: int = 40
    walks_per_node: int = 10
    seed: int = 0
    core_diff: str = "curr-cand"

    def __post_init__(self):
        for name in ("lam", "gamma", "penalty"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive real, got {v}")
        if self.walk_length < 1:
            raise ValueError("walk_length must be >= 1")
        if self.walks_per_node < 1:
            raise ValueError("walks_per_node must be >= 1")
        if self.core_diff not in CORE_DIFF_MODES:
            raise ValueError(f"core_diff must be one of {sorted(CORE_DIFF_MODES)}")

    @classmethod
    def degenerate(cls, **kw):
        """No-core baseline: delta forced to 0 and penalty 1."""
        kw.update(core_diff="none", penalty=1.0)
        return cls(**kw)


@dataclass(frozen=True, eq=False)
class WalkCorpus:
    """Walks stored row-wise in a padded ``int32`` array.

    Row ``r`` holds ``lengths[r]`` valid node ids starting at ``source_of[r]``.
    """

    walks: np.ndarray
    lengths: np.ndarray
    walk_length: int

    @property
    def source_of(self):
        return self.walks[:, 0]

    def __len__(self):
        return len(self.walks)

    def __iter__(self):
        for row, n in zip(self.walks, self.lengths):
            yield row[:n].tolist()

    def __getitem__(self, r):
        return self.walks[r, : self.lengths[r]].tolist()

    def node_counts(self, vocab_size):
        mask = np.arange(self.walk_length)[None, :] < self.lengths[:, None]
        return np.bincount(self.walks[mask], minlength=vocab_size)

    def token_count(self):
        return int(self.lengths.sum())

    def write(self, path, labels):
        """One walk per line, space-separated tokens."""
        with open(path, "w", encoding="utf-8") as fh:
            for walk in self:
                fh.write(" ".join(labels[v] for v in walk) + "\n")

    @classmethod
    def from_lists(cls, walks):
        walks = [list(w) for w in walks]
        length = max((len(w) for w in walks), default=0)
        arr = np.zeros((len(walks), max(length, 1)), dtype=np.int32)
        for r, w in enumerate(walks):
            arr[r, : len(w)] = w
        return cls(arr, np.array([len(w) for w in walks], dtype=np.int64), max(length, 1))

    def __eq__(self, other):
        return (
            isinstance(other, WalkCorpus)
            and np.array_equal(self.walks, other.walks)
            and np.array_equal(self.lengths, other.lengths)
        )

    __hash__ = None


@numba.njit(cache=True)
def _has_edge(indptr, indices, u, v):
    lo = indptr[u]
    hi = indptr[u + 1]
    while lo < hi:
        mid = (lo + hi) // 2
        x = indices[mid]
        if x < v:
            lo = mid + 1
        elif x > v:
            hi = mid
        else:
            return True
    return False


@numba.njit(cache=True)
def _scores(indptr, indices, weights, core, prev, curr, lam, gamma, penalty, mode, out):
    """Fill ``out[:deg(curr)]`` with unnormalized scores; return their sum."""
    lo = indptr[curr]
    hi = indptr[curr + 1]
    total = 0.0
    for e in range(lo, hi):
        k = indices[e]
        w = weights[e]
        if prev < 0:
            s = w
        elif k == prev:
            s = w / (_delta(core, prev, curr, k, mode) + 1.0) / penalty / lam
        elif _has_edge(indptr, indices, k, prev):
            s = w
        else:
            s = w / (_delta(core, prev, curr, k, mode) + 1.0) / penalty / gamma
        out[e - lo] = s
        total += s
    return total


@numba.njit(cache=True)
def _delta(core, prev, curr, cand, mode):
    if mode == 0:
        return abs(core[curr] - core[cand])
    if mode == 1:
        return abs(core[prev] - core[curr])
    return 0


@numba.njit(cache=True)
def _step(indptr, indices, weights, core, prev, curr, lam, gamma, penalty, mode, u, buf):
    """Inverse-transform draw of the next node; -1 if ``curr`` is a dead end."""
    deg = indptr[curr + 1] - indptr[curr]
    if deg == 0:
        return -1
    total = _scores(indptr, indices, weights, core, prev, curr, lam, gamma, penalty, mode, buf)
    target = u * total
    pick = deg - 1
    acc = 0.0
    for t in range(deg):
        acc += buf[t]
        if target < acc:
            pick = t
            break
    return indices[indptr[curr] + pick]


@numba.njit(cache=True)
def _step_many(indptr, indices, weights, core, prev, curr, lam, gamma, penalty, mode, uniforms):
    buf = np.empty(max(indptr[curr + 1] - indptr[curr], 1), dtype=np.float64)
    out = np.empty(len(uniforms), dtype=np.int64)
    for i in range(len(uniforms)):
        out[i] = _step(indptr, indices, weights, core, prev, curr, lam, gamma, penalty, mode, uniforms[i], buf)
    return out


def _walk_impl(indptr, indices, weights, core, starts, uniforms, lam, gamma, penalty, mode, out, lengths):
    n_walks, length = out.shape
    max_deg = 0
    for v in range(len(indptr) - 1):
        max_deg = max(max_deg, indptr[v + 1] - indptr[v])
    for r in numba.prange(n_walks):
        buf = np.empty(max(max_deg, 1), dtype=np.float64)
        prev = -1
        curr = starts[r]
        out[r, 0] = curr
        n = 1
        while n < length:
            nxt = _step(indptr, indices, weights, core, prev, curr, lam, gamma, penalty, mode, uniforms[r, n - 1], buf)
            if nxt < 0:
                break
            prev = curr
            curr = nxt
            out[r, n] = curr
            n += 1
        lengths[r] = n


_walk_serial = numba.njit(cache=True)(_walk_impl)
_walk_parallel = numba.njit(cache=True, parallel=True)(_walk_impl)


def transition_weights(g, cores, params, prev, curr):
    """Next-step distribution from ``curr``, aligned with ``g.neighbors(curr)``.

    ``prev=None`` gives the first-step distribution, proportional to edge
    weight. A node without neighbors yields an empty array.
    """
    if not 0 <= curr < g.node_count:
        raise IndexError(f"node id {curr} out of range")
    if prev is None:
        prev = -1
    elif not g.edge_exists(prev, curr):
        raise ValueError(f"({prev}, {curr}) is not an edge")
    deg = g.degree(curr)
    out = np.empty(deg, dtype=np.float64)
    if deg == 0:
        return out
    total = _scores(
        g.indptr, g.indices, g.weights, np.asarray(cores.core_of, dtype=np.int64),
        prev, curr, float(params.lam), float(params.gamma), float(params.penalty),
        CORE_DIFF_MODES[params.core_diff], out,
    )
    return out / total


def sample_next(g, cores, params, prev, curr, size, rng):
    """Draw ``size`` next nodes from the state ``(prev, curr)`` with the walk kernel's sampler."""
    if prev is not None and not g.edge_exists(prev, curr):
        raise ValueError(f"({prev}, {curr}) is not an edge")
    return _step_many(
        g.indptr, g.indices, g.weights, np.asarray(cores.core_of, dtype=np.int64),
        -1 if prev is None else prev, curr, float(params.lam), float(params.gamma),
        float(params.penalty), CORE_DIFF_MODES[params.core_diff], rng.random(size),
    )


def generate_walks(g, cores, params, workers=1):
    """``walks_per_node`` walks from every non-isolated node.

    Each round visits the start nodes in a fresh permutation. All
    randomness comes from one generator seeded with ``params.seed`` and
    is drawn before the kernel runs, so results do not depend on
    ``workers``.
    """
    rng = np.random.default_rng(params.seed)
    active = np.flatnonzero(g.degrees > 0)
    length = params.walk_length
    n_round = len(active)
    walks = np.zeros((n_round * params.walks_per_node, length), dtype=np.int32)
    lengths = np.zeros(len(walks), dtype=np.int64)
    core = np.asarray(cores.core_of, dtype=np.int64)
    mode = CORE_DIFF_MODES[params.core_diff]
    kernel = _walk_serial
    if workers > 1:
        numba.set_num_threads(min(workers, numba.config.NUMBA_NUM_THREADS))
        kernel = _walk_parallel
    for rnd in range(params.walks_per_node):
        starts = rng.permutation(active)
        uniforms = rng.random((n_round, max(length - 1, 1)))
        sl = slice(rnd * n_round, (rnd + 1) * n_round)
        kernel(
            g.indptr, g.indices, g.weights, core, starts, uniforms,
            float(params.lam), float(params.gamma), float(params.penalty), mode,
            walks[sl], lengths[sl],
        )
    return WalkCorpus(walks, lengths, length)
