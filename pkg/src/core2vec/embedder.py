"""Skip-gram with negative sampling over a walk corpus.

Input ("center") vectors are the published embedding; output
("context") vectors start at zero. Training is plain SGD with a
linearly decaying learning rate, in the word2vec manner.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numba
import numpy as np

logger = logging.getLogger(__name__)

NOISE_POWER = 0.75


@dataclass(frozen=True)
class TrainConfig:
    dimensions: int = 128
    context_size: int = 5
    negatives: int = 5
    epochs: int = 5
    initial_lr: float = 0.025
    final_lr: float = 0.0001
    seed: int = 0
    workers: int = 1
    deterministic: bool = True

    def __post_init__(self):
        if self.dimensions < 1:
            raise ValueError("dimensions must be >= 1")
        if self.context_size < 1:
            raise ValueError("context_size must be >= 1")
        if self.negatives < 1:
            raise ValueError("negatives must be >= 1")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if not (self.initial_lr >= self.final_lr > 0):
            raise ValueError("need initial_lr >= final_lr > 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(eq=False)
class EmbeddingMatrix:
    input_vectors: np.ndarray
    output_vectors: np.ndarray
    epoch_loss: list = field(default_factory=list)
    online_loss: list = field(default_factory=list)

    @property
    def vectors(self):
        return self.input_vectors

    @property
    def shape(self):
        return self.input_vectors.shape


def pair_stream(corpus, context_size):
    """Yield ``(center, context)`` for every offset ``0 < |o| <= context_size``."""
    for walk in corpus:
        n = len(walk)
        for t, center in enumerate(walk):
            for s in range(max(0, t - context_size), min(n, t + context_size + 1)):
                if s != t:
                    yield center, walk[s]


def _log_sigmoid(x):
    return -np.logaddexp(0.0, -x)


def _sigmoid(x):
    return np.exp(_log_sigmoid(x))


def ns_loss_and_grads(center, context, negatives):
    """Negative-sampling loss ``-log s(u.v+) - sum log s(-u.v-)`` and its gradients.

    Returns ``(loss, grad_center, grad_context, grad_negatives)`` where
    ``grad_negatives`` has one row per negative vector.
    """
    u = np.asarray(center, dtype=np.float64)
    v = np.asarray(context, dtype=np.float64)
    neg = np.asarray(negatives, dtype=np.float64)
    if len(neg) == 0:
        neg = np.zeros((0,) + u.shape)
    if u.ndim != 1 or v.shape != u.shape or neg.ndim != 2 or neg.shape[1] != u.shape[0]:
        raise ValueError("center, context and negative vectors must share one dimension")
    pos = u @ v
    scores = neg @ u
    loss = -_log_sigmoid(pos) - _log_sigmoid(-scores).sum()
    g_pos = -_sigmoid(-pos)  # d loss / d (u.v+)
    g_neg = _sigmoid(scores)  # d loss / d (u.v-)
    grad_u = g_pos * v + g_neg @ neg
    grad_v = g_pos * u
    grad_neg = g_neg[:, None] * u[None, :]
    return float(loss), grad_u, grad_v, grad_neg


class NoiseDistribution:
    """Unigram^0.75 noise over corpus node frequencies."""

    def __init__(self, counts, power=NOISE_POWER):
        counts = np.asarray(counts, dtype=np.float64)
        weights = counts**power
        if weights.sum() <= 0:
            raise ValueError("noise distribution needs at least one nonzero count")
        self.probs = weights / weights.sum()
        self.accept, self.alias = alias_table(self.probs)

    def sample(self, rng, size):
        return _alias_draw(self.accept, self.alias, rng.random(size))


def alias_table(probs):
    """Vose's alias method: O(1) draws from a discrete distribution."""
    n = len(probs)
    scaled = np.asarray(probs, dtype=np.float64) * n
    accept = np.ones(n, dtype=np.float64)
    alias = np.arange(n, dtype=np.int64)
    small = [i for i in range(n) if scaled[i] < 1.0]
    large = [i for i in range(n) if scaled[i] >= 1.0]
    while small and large:
        s, big = small.pop(), large.pop()
        accept[s] = scaled[s]
        alias[s] = big
        scaled[big] -= 1.0 - scaled[s]
        (small if scaled[big] < 1.0 else large).append(big)
    # leftovers are 1 up to rounding
    return accept, alias


def _alias_draw(accept, alias, u):
    n = len(accept)
    x = u * n
    i = np.minimum(x.astype(np.int64), n - 1)
    return np.where(x - i < accept[i], i, alias[i])


@numba.njit(cache=True, inline="always", error_model="numpy")
def _draw(accept, alias):
    n = len(accept)
    x = np.random.random() * n
    i = min(int(x), n - 1)
    if x - i < accept[i]:
        return i
    return alias[i]


@numba.njit(cache=True, inline="always", error_model="numpy")
def _sig_and_logsig(x):
    """sigmoid(x) and log(sigmoid(x)) from a single exp."""
    if x >= 0:
        e = np.exp(-x)
        return 1.0 / (1.0 + e), -np.log1p(e)
    e = np.exp(x)
    return e / (1.0 + e), x - np.log1p(e)


@numba.njit(cache=True, fastmath=True, error_model="numpy")
def _sgns_walk(walk, n, syn0, syn1, accept, alias, window, negatives, lr, neu1e):
    """SGD over all (center, context) pairs of one walk; returns summed loss."""
    dim = syn0.shape[1]
    loss = 0.0
    for t in range(n):
        a = syn0[walk[t]]
        lo = max(0, t - window)
        hi = min(n, t + window + 1)
        for s in range(lo, hi):
            if s == t:
                continue
            ctx = walk[s]
            neu1e[:] = 0.0
            for d in range(negatives + 1):
                if d == 0:
                    target = ctx
                else:
                    target = _draw(accept, alias)
                    tries = 0
                    while target == ctx and tries < 64:
                        target = _draw(accept, alias)
                        tries += 1
                    if target == ctx:
                        continue
                b = syn1[target]
                f = np.float32(0.0)
                for j in range(dim):
                    f += a[j] * b[j]
                sig, ls = _sig_and_logsig(f)
                if d == 0:
                    loss -= ls
                    g = (1.0 - sig) * lr
                else:
                    # log(1 - sigmoid(f)) = log sigmoid(f) - f
                    loss -= ls - f
                    g = -sig * lr
                g32 = np.float32(g)
                for j in range(dim):
                    neu1e[j] += g32 * b[j]
                    b[j] += g32 * a[j]
            for j in range(dim):
                a[j] += neu1e[j]
    return loss


@numba.njit(cache=True, error_model="numpy")
def _epoch_serial(walks, lengths, order, syn0, syn1, accept, alias, window, negatives, lr0, lr1, done, total, seed):
    np.random.seed(seed)
    neu1e = np.zeros(syn0.shape[1], dtype=syn0.dtype)
    acc = 0.0
    for i in range(len(order)):
        r = order[i]
        lr = lr0 - (lr0 - lr1) * (done + i) / total
        acc += _sgns_walk(walks[r], lengths[r], syn0, syn1, accept, alias, window, negatives, lr, neu1e)
        if not np.isfinite(acc):
            return acc
    return acc


@numba.njit(cache=True, parallel=True, error_model="numpy")
def _epoch_hogwild(walks, lengths, order, syn0, syn1, accept, alias, window, negatives, lr0, lr1, done, total, seed):
    # unsynchronized row updates from all threads; results are nondeterministic
    np.random.seed(seed)
    dim = syn0.shape[1]
    acc = 0.0
    for i in numba.prange(len(order)):
        neu1e = np.zeros(dim, dtype=syn0.dtype)
        r = order[i]
        lr = lr0 - (lr0 - lr1) * (done + i) / total
        acc += _sgns_walk(walks[r], lengths[r], syn0, syn1, accept, alias, window, negatives, lr, neu1e)
    return acc


def expected_ns_loss(syn0, syn1, centers, contexts, noise_probs, negatives):
    """Mean negative-sampling loss with the expectation over noise taken exactly.

    Negatives are drawn from ``noise_probs`` conditioned on differing
    from the context node, matching the sampler used in training.
    """
    u = syn0[centers].astype(np.float64)
    scores = u @ syn1.T.astype(np.float64)
    pos = scores[np.arange(len(centers)), contexts]
    neg_all = _log_sigmoid(-scores)
    q_ctx = noise_probs[contexts]
    neg = (neg_all @ noise_probs - q_ctx * neg_all[np.arange(len(centers)), contexts]) / np.maximum(1.0 - q_ctx, 1e-300)
    return float(np.mean(-_log_sigmoid(pos) - negatives * neg))


def _eval_pairs(corpus, window, rng, limit):
    """Fixed random sample of (center, context) pairs for progress tracking."""
    lengths = corpus.lengths
    n_pairs = count_pairs(lengths, window)
    size = min(limit, n_pairs)
    rows = rng.integers(0, len(corpus), size=4 * size + 16)
    centers, contexts = [], []
    for r in rows:
        n = lengths[r]
        if n < 2:
            continue
        t = rng.integers(0, n)
        choices = [s for s in range(max(0, t - window), min(n, t + window + 1)) if s != t]
        s = choices[rng.integers(0, len(choices))]
        centers.append(corpus.walks[r, t])
        contexts.append(corpus.walks[r, s])
        if len(centers) == size:
            break
    return np.array(centers, dtype=np.int64), np.array(contexts, dtype=np.int64)


def init_embeddings(vocab_size, dimensions, rng):
    syn0 = ((rng.random((vocab_size, dimensions)) - 0.5) / dimensions).astype(np.float32)
    syn1 = np.zeros((vocab_size, dimensions), dtype=np.float32)
    return syn0, syn1


def train(corpus, cfg, vocab_size, eval_pairs=20_000):
    """Fit embeddings for ``vocab_size`` nodes from ``corpus``.

    After each epoch ``epoch_loss`` records the expected negative-sampling
    loss on a fixed sample of ``eval_pairs`` pairs, and ``online_loss`` the
    mean loss seen during the epoch's updates. Nodes that never occur in the corpus keep their random
    initial vectors.
    """
    if len(corpus) == 0 or corpus.token_count() == 0:
        raise ValueError("cannot train on an empty corpus")
    counts = corpus.node_counts(vocab_size)
    if len(counts) > vocab_size:
        raise ValueError("corpus contains node ids >= vocab_size")
    rng = np.random.default_rng(cfg.seed)
    syn0, syn1 = init_embeddings(vocab_size, cfg.dimensions, rng)
    emb = EmbeddingMatrix(syn0, syn1)
    if cfg.epochs == 0:
        return emb
    noise = NoiseDistribution(counts)
    if cfg.deterministic or cfg.workers == 1:
        kernel = _epoch_serial
    else:
        numba.set_num_threads(min(cfg.workers, numba.config.NUMBA_NUM_THREADS))
        kernel = _epoch_hogwild
    # cap the dense (pairs x vocab) score matrix used for progress tracking
    centers, contexts = _eval_pairs(corpus, cfg.context_size, rng, max(100, min(eval_pairs, 20_000_000 // vocab_size)))
    n_pairs = count_pairs(corpus.lengths, cfg.context_size)
    total = cfg.epochs * len(corpus)
    for ep in range(cfg.epochs):
        order = rng.permutation(len(corpus))
        acc = kernel(
            corpus.walks, corpus.lengths, order, syn0, syn1, noise.accept, noise.alias, cfg.context_size, cfg.negatives,
            cfg.initial_lr, cfg.final_lr, ep * len(corpus), total, int(rng.integers(0, 2**31 - 1)),
        )
        if not (np.isfinite(acc) and np.isfinite(syn0).all() and np.isfinite(syn1).all()):
            raise FloatingPointError(
                f"non-finite loss in epoch {ep} (lr={cfg.initial_lr}, dim={cfg.dimensions}); "
                "lower the learning rate"
            )
        emb.online_loss.append(acc / max(n_pairs, 1))
        if len(centers):
            emb.epoch_loss.append(expected_ns_loss(syn0, syn1, centers, contexts, noise.probs, cfg.negatives))
    return emb


def count_pairs(lengths, window):
    """Number of ordered (center, context) pairs in walks of the given lengths."""
    lengths = np.asarray(lengths, dtype=np.int64)
    total = 0
    for o in range(1, window + 1):
        total += 2 * np.clip(lengths - o, 0, None).sum()
    return int(total)


def softmax_log_likelihood(emb, corpus, context_size, literal=True, max_vocab=200):
    """Mean log P(context | center) under the full softmax, for small graphs only.

    ``literal=True`` normalizes over all center vectors against a fixed
    context vector; ``literal=False`` uses the usual normalization over
    context vectors for a fixed center.
    """
    syn0 = emb.input_vectors.astype(np.float64)
    syn1 = emb.output_vectors.astype(np.float64)
    if len(syn0) > max_vocab:
        raise ValueError(f"full softmax evaluation limited to {max_vocab} nodes")
    scores = syn0 @ syn1.T  # scores[center, context]
    if literal:
        logz = np.logaddexp.reduce(scores, axis=0)[None, :]
    else:
        logz = np.logaddexp.reduce(scores, axis=1)[:, None]
    logp = scores - logz
    pairs = np.array(list(pair_stream(corpus, context_size)), dtype=np.int64)
    if len(pairs) == 0:
        raise ValueError("corpus yields no pairs")
    return float(logp[pairs[:, 0], pairs[:, 1]].mean())


def save_word2vec(path, labels, vectors, binary=False):
    """Write ``<count> <dim>`` then one ``token v1 .. vd`` row per node."""
    vectors = np.asarray(vectors, dtype=np.float32)
    n, d = vectors.shape
    if len(labels) != n:
        raise ValueError("label count does not match vector rows")
    if binary:
        with open(path, "wb") as fh:
            fh.write(f"{n} {d}\n".encode())
            for token, row in zip(labels, vectors):
                fh.write(token.encode("utf-8") + b" " + row.astype("<f4").tobytes() + b"\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{n} {d}\n")
            for token, row in zip(labels, vectors):
                fh.write(token + " " + " ".join(f"{x:.9g}" for x in row) + "\n")


def load_word2vec(path, binary=False):
    """Read a word2vec text or binary file into ``(labels, float32 array)``."""
    if binary:
        with open(path, "rb") as fh:
            n, d = (int(x) for x in fh.readline().split())
            labels, rows = [], np.empty((n, d), dtype=np.float32)
            for i in range(n):
                token = bytearray()
                while True:
                    ch = fh.read(1)
                    if ch == b" ":
                        break
                    if not ch:
                        raise ValueError(f"{path}: truncated at row {i}")
                    if ch != b"\n":
                        token += ch
                labels.append(token.decode("utf-8"))
                buf = fh.read(4 * d)
                if len(buf) != 4 * d:
                    raise ValueError(f"{path}: truncated at row {i}")
                rows[i] = np.frombuffer(buf, dtype="<f4")
            return labels, rows
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: bad header")
        n, d = int(header[0]), int(header[1])
        labels, rows = [], np.empty((n, d), dtype=np.float32)
        for i in range(n):
            parts = fh.readline().rstrip("\n").split(" ")
            if len(parts) != d + 1:
                raise ValueError(f"{path}:{i + 2}: expected {d + 1} fields, got {len(parts)}")
            labels.append(parts[0])
            rows[i] = np.array(parts[1:], dtype=np.float32)
    return labels, rows
