"""End-to-end training: coreness, walks, skip-gram, with a run manifest."""

from __future__ import annotations

import hashlib
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .coreness import kcore_fast
from .dataio import ErConfig, generate_er
from .embedder import TrainConfig, train
from .walker import WalkParams, generate_walks

logger = logging.getLogger(__name__)


def graph_hash(g):
    h = hashlib.sha256()
    for arr in (g.indptr, g.indices, g.weights):
        h.update(np.ascontiguousarray(arr).tobytes())
    h.update("\n".join(g.labels).encode("utf-8"))
    return h.hexdigest()


@dataclass
class RunManifest:
    graph_path: str | None
    graph_sha256: str
    graph_summary: str
    walk_params: dict
    train_config: dict
    shell_sizes: dict
    timings: dict = field(default_factory=dict)
    epoch_loss: list = field(default_factory=list)
    version: str = __version__

    def config_hash(self):
        """Hash of everything that determines a deterministic run."""
        key = json.dumps(
            [self.graph_sha256, self.walk_params, self.train_config], sort_keys=True
        )
        return hashlib.sha256(key.encode()).hexdigest()

    def to_json(self):
        d = asdict(self)
        d["shell_sizes"] = {str(k): v for k, v in self.shell_sizes.items()}
        d["config_sha256"] = self.config_hash()
        return json.dumps(d, indent=2, sort_keys=True)

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json() + "\n")


def learn_features(g, wp=None, tc=None, graph_path=None, cores=None):
    """Coreness -> biased walks -> SGNS. Returns ``(embedding, manifest)``."""
    wp = wp or WalkParams()
    tc = tc or TrainConfig()
    timings = {}
    t_all = time.perf_counter()

    t0 = time.perf_counter()
    if cores is None:
        cores = kcore_fast(g)
    timings["kcore"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    corpus = generate_walks(g, cores, wp, workers=1 if tc.deterministic else tc.workers)
    timings["walks"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    emb = train(corpus, tc, g.node_count)
    timings["train"] = time.perf_counter() - t0
    timings["total"] = time.perf_counter() - t_all

    manifest = RunManifest(
        graph_path=str(graph_path) if graph_path is not None else None,
        graph_sha256=graph_hash(g),
        graph_summary=g.summary(),
        walk_params=asdict(wp),
        train_config=asdict(tc),
        shell_sizes=cores.shell_sizes(),
        timings=timings,
        epoch_loss=list(emb.epoch_loss),
    )
    logger.info("learn_features %s: %s", g.summary(), {k: round(v, 3) for k, v in timings.items()})
    return emb, manifest


def loglog_slope(ns, seconds):
    """Least-squares slope of log10(seconds) on log10(n); NaN with < 2 points."""
    x = np.log10(np.asarray(ns, dtype=np.float64))
    y = np.log10(np.asarray(seconds, dtype=np.float64))
    if len(x) < 2 or np.ptp(x) == 0:
        return math.nan
    return float(np.polyfit(x, y, 1)[0])


@dataclass
class BenchRow:
    n: int
    edges: int
    seconds: float
    seconds_with_generation: float
    repeats: int


@dataclass
class BenchResult:
    rows: list
    slope: float
    slope_with_generation: float
    workers: int

    def to_tsv(self):
        lines = ["n\tedges\tlog10_n\tseconds\tlog10_seconds\tseconds_with_generation\trepeats"]
        for r in self.rows:
            lines.append(
                f"{r.n}\t{r.edges}\t{math.log10(r.n):.6g}\t{r.seconds:.6g}\t"
                f"{math.log10(r.seconds):.6g}\t{r.seconds_with_generation:.6g}\t{r.repeats}"
            )
        slope = "n/a" if math.isnan(self.slope) else f"{self.slope:.6g}"
        slope_g = "n/a" if math.isnan(self.slope_with_generation) else f"{self.slope_with_generation:.6g}"
        lines.append(f"# slope\t{slope}")
        lines.append(f"# slope_with_generation\t{slope_g}")
        lines.append(f"# workers\t{self.workers}")
        return "\n".join(lines) + "\n"


def scaling_benchmark(sizes, k_hat=30.0, wp=None, tc=None, seed=0, repeat_limit=3000, repeats=3):
    """Time ``learn_features`` on G(n, k_hat/n) for each n.

    Sizes up to ``repeat_limit`` take the median of ``repeats`` runs.
    Where ``k_hat >= n`` it is capped at ``n - 1``.
    """
    sizes = list(sizes)
    if sizes != sorted(sizes):
        raise ValueError("sizes must be ascending")
    wp = wp or WalkParams(seed=seed)
    tc = tc or TrainConfig(seed=seed)
    _warm_up(wp, tc)
    rows = []
    for n in sizes:
        kh = k_hat
        if kh >= n:
            logger.warning("k_hat=%g >= n=%d; capping k_hat at n - 1", kh, n)
            kh = n - 1
        reps = repeats if n <= repeat_limit else 1
        run_times, gen_times = [], []
        for _ in range(reps):
            t0 = time.perf_counter()
            g = generate_er(ErConfig(n, kh, seed))
            t_gen = time.perf_counter() - t0
            _, manifest = learn_features(g, wp, tc)
            run_times.append(manifest.timings["total"])
            gen_times.append(manifest.timings["total"] + t_gen)
        rows.append(BenchRow(n, g.edge_count, float(np.median(run_times)), float(np.median(gen_times)), reps))
        logger.info("n=%d edges=%d %.3fs", n, g.edge_count, rows[-1].seconds)
    return BenchResult(
        rows,
        loglog_slope([r.n for r in rows], [r.seconds for r in rows]),
        loglog_slope([r.n for r in rows], [r.seconds_with_generation for r in rows]),
        workers=1 if tc.deterministic else tc.workers,
    )


def _warm_up(wp, tc):
    # compile the jitted kernels outside the timed region
    g = generate_er(ErConfig(8, 3.0, 0))
    learn_features(g, WalkParams(**{**asdict(wp), "walks_per_node": 1, "walk_length": 3}),
                   TrainConfig(**{**asdict(tc), "epochs": 1, "dimensions": 4}))
