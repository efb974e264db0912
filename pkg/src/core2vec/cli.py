"""``core2vec`` command line.

Exit codes: 0 success, 1 usage error, 2 data error, 3 compute error.
The default worker count comes from ``CORE2VEC_WORKERS`` (else 1).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys


from . import __version__
from .coreness import kcore_fast, write_coreness_tsv
from .dataio import FORMATS, SimilarityFormatError, convert_assoc, evaluate_wordsim, load_similarity_file
from .embedder import TrainConfig, load_word2vec, save_word2vec
from .graph import GraphFormatError, load_edge_list
from .metrics import core_metrics, pca2
from .pipeline import learn_features, scaling_benchmark
from .walker import CORE_DIFF_MODES, WalkParams, generate_walks

EXIT_USAGE, EXIT_DATA, EXIT_COMPUTE = 1, 2, 3

log = logging.getLogger("core2vec")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(kind):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a valid {kind.__name__}: {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v

    return parse


def _default_workers():
    try:
        return max(1, int(os.environ.get("CORE2VEC_WORKERS", "1")))
    except ValueError:
        return 1


def _add_graph_flags(p):
    p.add_argument("--weighted", action="store_true", help="use the third column as edge weight")
    p.add_argument("--lowercase", action="store_true", help="lower-case tokens (word networks)")


def _add_model_flags(p):
    g = p.add_argument_group("walks")
    g.add_argument("--walk-length", type=_positive(int), default=40, help="nodes per walk (default 40)")
    g.add_argument("--walks-per-node", type=_positive(int), default=10, help="walks started per node (default 10)")
    g.add_argument("--lam", type=_positive(float), default=0.35, help="return parameter (default 0.35)")
    g.add_argument("--gamma", type=_positive(float), default=2.5, help="outward parameter (default 2.5)")
    g.add_argument("--penalty", type=_positive(float), default=3.5, help="core-difference penalty (default 3.5)")
    g.add_argument("--core-diff", choices=sorted(CORE_DIFF_MODES), default="curr-cand",
                   help="which coreness difference the penalty uses (default curr-cand)")
    g = p.add_argument_group("training")
    g.add_argument("--dimensions", type=_positive(int), default=128, help="embedding size (default 128)")
    g.add_argument("--context-size", type=_positive(int), default=5, help="one-sided window (default 5)")
    g.add_argument("--negatives", type=_positive(int), default=5, help="negatives per pair (default 5)")
    g.add_argument("--epochs", type=int, default=5, help="passes over the corpus (default 5)")
    g.add_argument("--initial-lr", type=_positive(float), default=0.025, help="starting learning rate")
    g.add_argument("--final-lr", type=_positive(float), default=0.0001, help="final learning rate")
    g = p.add_argument_group("execution")
    g.add_argument("--seed", type=int, default=0, help="random seed for walks and training")
    g.add_argument("--workers", type=_positive(int), default=_default_workers(),
                   help="worker threads (default $CORE2VEC_WORKERS or 1)")
    g.add_argument("--deterministic", action="store_true",
                   help="single-threaded, bit-reproducible run")


def _params(args):
    try:
        wp = WalkParams(
            lam=args.lam, gamma=args.gamma, penalty=args.penalty, walk_length=args.walk_length,
            walks_per_node=args.walks_per_node, seed=args.seed, core_diff=args.core_diff,
        )
        tc = TrainConfig(
            dimensions=args.dimensions, context_size=args.context_size, negatives=args.negatives,
            epochs=args.epochs, initial_lr=args.initial_lr, final_lr=args.final_lr, seed=args.seed,
            workers=args.workers, deterministic=args.deterministic or args.workers == 1,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return wp, tc


def _load_graph(args):
    try:
        return load_edge_list(args.graph, weighted=args.weighted, lowercase=args.lowercase)
    except (OSError, GraphFormatError) as exc:
        raise DataError(str(exc)) from None


def _load_embedding(path, binary):
    try:
        return load_word2vec(path, binary=binary)
    except (OSError, ValueError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read embedding {path}: {exc}") from None


def _aligned(labels, vectors, g):
    """Reorder embedding rows to graph ids; all graph tokens must be present."""
    index = {t: i for i, t in enumerate(labels)}
    missing = [t for t in g.labels if t not in index]
    if missing:
        raise DataError(
            f"embedding lacks {len(missing)} of {g.node_count} graph tokens (e.g. {missing[0]!r})"
        )
    return vectors[[index[t] for t in g.labels]]


def cmd_kcore(args):
    g = _load_graph(args)
    write_coreness_tsv(g, kcore_fast(g), args.out)
    print(g.summary())


def cmd_train(args):
    wp, tc = _params(args)
    g = _load_graph(args)
    print(g.summary())
    emb, manifest = learn_features(g, wp, tc, graph_path=args.graph)
    save_word2vec(args.out, g.labels, emb.input_vectors, binary=args.binary)
    manifest.save(args.manifest or args.out + ".manifest.json")
    if args.corpus_out:
        generate_walks(g, kcore_fast(g), wp).write(args.corpus_out, g.labels)
    for stage, secs in manifest.timings.items():
        print(f"{stage}_seconds\t{secs:.6g}")


def cmd_eval_cores(args):
    g = _load_graph(args)
    labels, vectors = _load_embedding(args.embedding, args.binary)
    x = _aligned(labels, vectors, g)
    report = core_metrics(x, kcore_fast(g), weighting=args.weighting)
    print(report.to_json() if args.json else report.to_text())


def cmd_eval_wordsim(args):
    labels, vectors = _load_embedding(args.embedding, args.binary)
    try:
        records = load_similarity_file(args.dataset, args.format)
    except (OSError, SimilarityFormatError) as exc:
        raise DataError(str(exc)) from None
    try:
        res = evaluate_wordsim(vectors, labels, records)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    print(f"rho\t{res.rho:.6g}")
    print(f"p_value\t{res.p_value:.6g}")
    print(f"n_used\t{res.n_used}")
    print(f"n_skipped\t{res.n_skipped}")


def cmd_project(args):
    g = _load_graph(args)
    labels, vectors = _load_embedding(args.embedding, args.binary)
    x = _aligned(labels, vectors, g)
    try:
        xy = pca2(x)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    cores = kcore_fast(g).core_of
    with open(args.out, "w", encoding="utf-8") as fh:
        for token, (a, b), k in zip(g.labels, xy, cores):
            fh.write(f"{token}\t{_fmt(a)}\t{_fmt(b)}\t{int(k)}\n")


def _fmt(x):
    # avoid "-0" in output
    return f"{x + 0.0:.6g}"


def cmd_scale_bench(args):
    wp, tc = _params(args)
    try:
        sizes = sorted(int(s) for s in args.sizes.split(","))
    except ValueError:
        raise UsageError(f"bad --sizes {args.sizes!r}") from None
    if not sizes or sizes[0] < 2:
        raise UsageError("sizes must be integers >= 2")
    res = scaling_benchmark(sizes, args.k_hat, wp, tc, seed=args.seed, repeats=args.repeats)
    text = res.to_tsv()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)


def cmd_convert_assoc(args):
    try:
        n = convert_assoc(args.input, args.out, weights=args.weights, lowercase=not args.keep_case)
    except (OSError, SimilarityFormatError) as exc:
        raise DataError(str(exc)) from None
    print(f"edges\t{n}")


def build_parser():
    p = _Parser(prog="core2vec", description="Core-guided node embeddings and their evaluation.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("kcore", help="write coreness as token<TAB>core_id")
    s.add_argument("graph", help="edge-list file")
    s.add_argument("out", help="output TSV")
    _add_graph_flags(s)
    s.set_defaults(func=cmd_kcore)

    s = sub.add_parser("train", help="learn embeddings for a graph")
    s.add_argument("graph", help="edge-list file")
    s.add_argument("-o", "--out", required=True, help="embedding output (word2vec format)")
    s.add_argument("--manifest", help="manifest JSON path (default <out>.manifest.json)")
    s.add_argument("--binary", action="store_true", help="write binary float32 word2vec format")
    s.add_argument("--corpus-out", help="also dump the walk corpus, one walk per line")
    _add_graph_flags(s)
    _add_model_flags(s)
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("eval-cores", help="closeness and separability of coreness shells")
    s.add_argument("embedding", help="word2vec embedding file")
    s.add_argument("graph", help="edge-list file the embedding was trained on")
    s.add_argument("--binary", action="store_true", help="embedding is in binary format")
    s.add_argument("--json", action="store_true", help="print JSON instead of a table")
    s.add_argument("--weighting", choices=("shell", "node"), default="shell",
                   help="average closeness over shells or nodes (default shell)")
    _add_graph_flags(s)
    s.set_defaults(func=cmd_eval_cores)

    s = sub.add_parser("eval-wordsim", help="Spearman correlation against a word-similarity dataset")
    s.add_argument("embedding", help="word2vec embedding file")
    s.add_argument("dataset", help="similarity dataset file")
    s.add_argument("--format", choices=FORMATS, default="generic-tsv", help="dataset layout")
    s.add_argument("--binary", action="store_true", help="embedding is in binary format")
    s.set_defaults(func=cmd_eval_wordsim)

    s = sub.add_parser("project", help="2-D PCA projection as token<TAB>x<TAB>y<TAB>core_id")
    s.add_argument("embedding", help="word2vec embedding file")
    s.add_argument("graph", help="edge-list file")
    s.add_argument("out", help="output TSV")
    s.add_argument("--binary", action="store_true", help="embedding is in binary format")
    _add_graph_flags(s)
    s.set_defaults(func=cmd_project)

    s = sub.add_parser("scale-bench", help="runtime on Erdos-Renyi graphs of growing size")
    s.add_argument("--sizes", default="100,300,1000,3000,30000", help="comma-separated node counts")
    s.add_argument("--k-hat", type=_positive(float), default=30.0, help="average degree (default 30)")
    s.add_argument("--repeats", type=_positive(int), default=3, help="repetitions for n <= 3000")
    s.add_argument("--out", help="also write the TSV here")
    _add_model_flags(s)
    s.set_defaults(func=cmd_scale_bench)

    s = sub.add_parser("convert-assoc", help="cue/response/strength table to weighted edge list")
    s.add_argument("input", help="association file (CSV, TSV or whitespace)")
    s.add_argument("out", help="edge-list output")
    s.add_argument("--weights", choices=("frequency", "unit"), default="frequency",
                   help="use strengths as weights or set all to 1 (default frequency)")
    s.add_argument("--keep-case", action="store_true", help="do not lower-case tokens")
    s.set_defaults(func=cmd_convert_assoc)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "epochs", 0) < 0:
        parser.error("--epochs must be >= 0")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"core2vec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"core2vec: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (FloatingPointError, ValueError, MemoryError) as exc:
        print(f"core2vec: compute error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return 0


if __name__ == "__main__":
    sys.exit(main())
