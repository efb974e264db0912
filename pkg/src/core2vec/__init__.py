"""
core2vec
========

Node embeddings from k-core-guided second-order random walks and
skip-gram with negative sampling, with evaluation tools for shell
cohesion, word similarity and runtime scaling.

Modules
-------

    graph       CSR graph and edge-list I/O
    coreness    k-core decomposition (fast and reference)
    walker      core-biased walk generation
    embedder    skip-gram with negative sampling, word2vec file formats
    metrics     closeness, separability, cosine, Spearman, PCA
    dataio      similarity datasets, association conversion, ER graphs
    pipeline    end-to-end training and the scaling benchmark
    cli         ``core2vec`` command line
"""

__version__ = "0.1.0"

from .coreness import CoreAssignment, kcore_fast, kcore_naive  # noqa: E402
from .embedder import EmbeddingMatrix, TrainConfig, load_word2vec, save_word2vec, train  # noqa: E402
from .graph import Graph, les_miserables, load_edge_list, save_edge_list  # noqa: E402
from .metrics import closeness, core_metrics, cosine, pca2, separability, spearman  # noqa: E402
from .pipeline import learn_features, scaling_benchmark  # noqa: E402
from .walker import WalkCorpus, WalkParams, generate_walks, transition_weights  # noqa: E402

__all__ = [
    "CoreAssignment", "EmbeddingMatrix", "Graph", "TrainConfig", "WalkCorpus", "WalkParams",
    "closeness", "core_metrics", "cosine", "generate_walks", "kcore_fast", "kcore_naive",
    "learn_features", "les_miserables", "load_edge_list", "load_word2vec", "pca2",
    "save_edge_list", "save_word2vec", "scaling_benchmark", "separability", "spearman",
    "train", "transition_weights",
]
