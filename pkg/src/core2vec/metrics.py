"""Evaluation quantities for node embeddings.

Closeness and separability measure how well coreness shells cluster in
the embedding space; ``spearman`` and ``cosine`` back the word
similarity evaluation; ``pca2`` gives a 2-D view for plotting.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

logger = logging.getLogger(__name__)


def _as_array(emb):
    return np.asarray(getattr(emb, "input_vectors", emb), dtype=np.float64)


def cosine(u, v):
    """Cosine similarity clamped to [-1, 1]; NaN if either vector is zero."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch {u.shape} vs {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        return math.nan
    return float(np.clip(u @ v / (nu * nv), -1.0, 1.0))


@dataclass
class ShellStats:
    core: int
    size: int
    used: int
    centroid_norm: float
    closeness: float


def _shell_stats(emb, cores):
    """Per-shell centroid and closeness, skipping zero vectors."""
    x = _as_array(emb)
    core_of = np.asarray(getattr(cores, "core_of", cores))
    if len(x) != len(core_of):
        raise ValueError("embedding rows and coreness entries differ in count")
    norms = np.linalg.norm(x, axis=1)
    zero = norms == 0
    if zero.any():
        logger.warning("skipping %d zero-norm vector(s)", int(zero.sum()))
    out, centroids = [], []
    for k in np.unique(core_of):
        members = np.flatnonzero((core_of == k) & ~zero)
        size = int((core_of == k).sum())
        if len(members) == 0:
            continue
        centroid = x[members].mean(axis=0)
        cn = np.linalg.norm(centroid)
        if cn == 0:
            score = 0.0
        else:
            sims = x[members] @ centroid / (norms[members] * cn)
            score = float(np.clip(sims, -1, 1).mean())
        out.append(ShellStats(int(k), size, len(members), float(cn), score))
        centroids.append(centroid)
    return out, np.array(centroids).reshape(len(centroids), x.shape[1])


def closeness(emb, cores, weighting="shell"):
    """Mean cosine of shell members to their shell centroid.

    ``weighting="shell"`` averages shell scores with equal weight;
    ``"node"`` weights each shell by the number of nodes scored.
    """
    shells, _ = _shell_stats(emb, cores)
    if not shells:
        raise ValueError("no shell has a nonzero vector")
    scores = np.array([s.closeness for s in shells])
    if weighting == "shell":
        return float(scores.mean())
    if weighting == "node":
        return float(np.average(scores, weights=[s.used for s in shells]))
    raise ValueError(f"unknown weighting {weighting!r}")


def separability(emb, cores):
    """Mean Euclidean distance over all unordered pairs of shell centroids."""
    _, centroids = _shell_stats(emb, cores)
    return _mean_pairwise_distance(centroids)


def _mean_pairwise_distance(points):
    if len(points) < 2:
        return 0.0
    i, j = np.triu_indices(len(points), k=1)
    return float(np.linalg.norm(points[i] - points[j], axis=1).mean())


@dataclass
class CoreMetricsReport:
    closeness: float
    separability: float
    per_shell: list = field(default_factory=list)
    label: str = ""

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self):
        lines = []
        if self.label:
            lines.append(self.label)
        lines.append(f"closeness     {self.closeness:.6g}")
        lines.append(f"separability  {self.separability:.6g}")
        lines.append(f"{'core':>6} {'nodes':>7} {'used':>6} {'centroid_norm':>14} {'closeness':>10}")
        for s in self.per_shell:
            lines.append(
                f"{s['core']:>6} {s['size']:>7} {s['used']:>6} {s['centroid_norm']:>14.6g} {s['closeness']:>10.6g}"
            )
        return "\n".join(lines)


def core_metrics(emb, cores, label="", weighting="shell"):
    shells, centroids = _shell_stats(emb, cores)
    if not shells:
        raise ValueError("no shell has a nonzero vector")
    return CoreMetricsReport(
        closeness=closeness(emb, cores, weighting=weighting),
        separability=_mean_pairwise_distance(centroids),
        per_shell=[asdict(s) for s in shells],
        label=label,
    )


def spearman(xs, ys):
    """Spearman's rho with average ranks for ties, and a two-sided p-value.

    The p-value uses the t statistic ``rho * sqrt((n-2) / (1-rho^2))``
    with ``n-2`` degrees of freedom.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("xs and ys must be 1-D sequences of equal length")
    n = len(xs)
    if n < 3:
        raise ValueError(f"need at least 3 pairs, got {n}")
    rx = stats.rankdata(xs)
    ry = stats.rankdata(ys)
    rho = _pearson(rx, ry)
    if abs(rho) >= 1.0:
        return float(np.sign(rho)), 0.0
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    p = 2.0 * stats.t.sf(abs(t), n - 2)
    return rho, float(p)


def _pearson(a, b):
    a = a - a.mean()
    b = b - b.mean()
    den = math.sqrt((a @ a) * (b @ b))
    if den == 0:
        raise ValueError("zero rank variance; correlation undefined")
    return float(np.clip((a @ b) / den, -1.0, 1.0))


def spearman_exact_pvalue(xs, ys, max_n=10):
    """Two-sided permutation p-value of Spearman's rho by full enumeration."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    n = len(xs)
    if n > max_n:
        raise ValueError(f"exact enumeration limited to n <= {max_n}")
    rx = stats.rankdata(xs)
    ry = stats.rankdata(ys)
    observed = abs(_pearson(rx, ry))
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    den = math.sqrt((rx @ rx) * (ry @ ry))
    hits = total = 0
    perms = itertools.permutations(range(n))
    while True:
        block = np.array(list(itertools.islice(perms, 200_000)), dtype=np.int64)
        if len(block) == 0:
            break
        rho = ry[block] @ rx / den
        hits += int((np.abs(rho) >= observed - 1e-12).sum())
        total += len(block)
    return hits / total


def pca2(vectors, tol=1e-10, max_iter=100_000, return_components=False):
    """Project mean-centered rows onto the top two covariance eigenvectors.

    Eigenvectors come from power iteration with deflation. Each axis is
    signed so its largest-magnitude loading is positive. If the
    covariance has rank below 2 the missing axes are zero-filled.
    """
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2 or len(x) < 2 or x.shape[1] < 2:
        raise ValueError("need at least 2 vectors of dimension >= 2")
    xc = x - x.mean(axis=0)
    cov = xc.T @ xc / (len(x) - 1)
    scale = np.abs(cov).max()
    comps = np.zeros((2, x.shape[1]))
    if scale == 0:
        logger.warning("all points identical; projection is zero")
    else:
        work = cov.copy()
        for a in range(2):
            lam, v = _power_iteration(work, tol, max_iter)
            if lam <= scale * 1e-12:
                logger.warning("covariance rank < %d; zero-filling axis %d", a + 1, a)
                break
            v *= np.sign(v[np.argmax(np.abs(v))])
            comps[a] = v
            work = work - lam * np.outer(v, v)
    proj = xc @ comps.T
    if return_components:
        return proj, comps
    return proj


def _power_iteration(a, tol, max_iter):
    n = a.shape[0]
    # deterministic start with weight on every coordinate
    v = np.linspace(1.0, 2.0, n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = a @ v
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0, v
        w /= norm
        if w @ v < 0:
            w = -w
        if np.linalg.norm(w - v) < tol:
            v = w
            break
        v = w
    else:
        logger.warning("power iteration did not reach tol=%g in %d steps", tol, max_iter)
    lam = float(v @ a @ v)
    return lam, v
