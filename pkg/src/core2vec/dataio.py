"""Word-similarity datasets, association-data conversion and random graphs."""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .graph import Graph
from .metrics import cosine, spearman

logger = logging.getLogger(__name__)

FORMATS = ("simlex", "wordsim", "mturk", "generic-tsv")

# public ER benchmark sizes; the 10-node graph is degenerate at k_hat=30
ER_SIZES = (10, 100, 300, 1000, 3000, 30000)


class SimilarityFormatError(ValueError):
    pass


class SimilarityRecord(NamedTuple):
    word_a: str
    word_b: str
    score: float


def normalize_token(token):
    return token.strip().lower()


def _sniff_delimiter(line):
    if "\t" in line:
        return "\t"
    if "," in line:
        return ","
    return None  # whitespace


def _is_number(s):
    try:
        return math.isfinite(float(s))
    except ValueError:
        return False


def load_similarity_file(path, format="generic-tsv"):
    """Read ``(word_a, word_b, score)`` records, case-folded.

    ``simlex`` expects the official tab-separated file with a header and
    takes the ``SimLex999`` column. ``wordsim`` and ``mturk`` accept
    comma- or tab-separated files with or without a header row.
    ``generic-tsv`` is three tab-separated columns, ``#`` comments allowed.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    with open(path, encoding="utf-8-sig") as fh:
        lines = fh.read().splitlines()
    records = []
    score_col = 2
    delim = None
    first = True
    for lineno, line in enumerate(lines, start=1):
        if not line.strip() or (format == "generic-tsv" and line.lstrip().startswith("#")):
            continue
        if delim is None:
            delim = "\t" if format in ("generic-tsv", "simlex") else _sniff_delimiter(line)
        fields = next(csv.reader([line], delimiter=delim)) if delim else line.split()
        fields = [f.strip() for f in fields]
        is_first, first = first, False
        if is_first and not _is_number(fields[score_col] if len(fields) > score_col else ""):
            # header row
            if format == "simlex":
                try:
                    score_col = fields.index("SimLex999")
                except ValueError:
                    raise SimilarityFormatError(f"{path}:{lineno}: no SimLex999 column in header") from None
            continue
        if len(fields) <= score_col or (format == "generic-tsv" and len(fields) != 3):
            raise SimilarityFormatError(f"{path}:{lineno}: expected at least {score_col + 1} fields, got {len(fields)}")
        a, b = normalize_token(fields[0]), normalize_token(fields[1])
        try:
            score = float(fields[score_col])
        except ValueError:
            raise SimilarityFormatError(f"{path}:{lineno}: non-numeric score {fields[score_col]!r}") from None
        if not math.isfinite(score):
            raise SimilarityFormatError(f"{path}:{lineno}: score is not finite")
        if not a or not b or a == b:
            raise SimilarityFormatError(f"{path}:{lineno}: need two distinct words, got {a!r}, {b!r}")
        records.append(SimilarityRecord(a, b, score))
    if not records:
        raise SimilarityFormatError(f"{path}: no records")
    return records


def write_similarity_tsv(records, path):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(f"{r.word_a}\t{r.word_b}\t{float(r.score)!r}\n")


class WordsimResult(NamedTuple):
    rho: float
    p_value: float
    n_used: int
    n_skipped: int


def evaluate_wordsim(emb, labels, records):
    """Spearman correlation between embedding cosines and human scores.

    Pairs with an out-of-vocabulary word or a zero vector are skipped
    and counted.
    """
    if not records:
        raise ValueError("no similarity records")
    vectors = np.asarray(getattr(emb, "input_vectors", emb))
    index = {normalize_token(t): i for i, t in enumerate(labels)}
    sims, gold = [], []
    skipped = 0
    for r in records:
        i, j = index.get(r.word_a), index.get(r.word_b)
        if i is None or j is None:
            skipped += 1
            continue
        c = cosine(vectors[i], vectors[j])
        if math.isnan(c):
            skipped += 1
            continue
        sims.append(c)
        gold.append(r.score)
    if len(sims) < 3:
        raise ValueError(f"only {len(sims)} usable pairs ({skipped} skipped); need at least 3")
    rho, p = spearman(sims, gold)
    return WordsimResult(rho, p, len(sims), skipped)


@dataclass(frozen=True)
class ErConfig:
    n: int
    k_hat: float = 30.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if not 0 < self.k_hat < self.n:
            # k_hat >= n would make the edge probability >= 1
            raise ValueError("k_hat must satisfy 0 < k_hat < n")

    @property
    def p(self):
        return self.k_hat / self.n


def _pair_from_index(idx):
    # enumerate pairs (u, v), u < v, as v = 1.., u = 0..v-1
    v = np.floor((1.0 + np.sqrt(1.0 + 8.0 * idx.astype(np.float64))) / 2.0).astype(np.int64)
    base = v * (v - 1) // 2
    over = base > idx
    v[over] -= 1
    base = v * (v - 1) // 2
    under = idx - base >= v
    v[under] += 1
    base = v * (v - 1) // 2
    return idx - base, v


def er_edges(n, p, rng):
    """Edges of G(n, p) by geometric skipping over the n(n-1)/2 pairs."""
    total = n * (n - 1) // 2
    chunks = []
    last = -1
    expect = int(total * p * 1.05) + 16
    while True:
        skips = rng.geometric(p, size=expect)
        pos = last + np.cumsum(skips)
        chunks.append(pos[pos < total])
        if pos[-1] >= total:
            break
        last = int(pos[-1])
        expect = max(16, int((total - last) * p * 1.05) + 16)
    idx = np.concatenate(chunks)
    return _pair_from_index(idx)


def generate_er(cfg):
    """Unweighted Erdős–Rényi graph with edge probability ``k_hat / n``."""
    rng = np.random.default_rng(cfg.seed)
    u, v = er_edges(cfg.n, cfg.p, rng)
    return Graph.from_edges(cfg.n, u, v)


def convert_assoc(in_path, out_path, weights="frequency", lowercase=True):
    """Turn cue/response/strength rows into a weighted edge list.

    Multi-word tokens have inner whitespace replaced by ``_``. Rows with
    an empty or missing response, or cue == response, are dropped.
    Returns the number of edges written.
    """
    if weights not in ("frequency", "unit"):
        raise ValueError("weights must be 'frequency' or 'unit'")
    with open(in_path, encoding="utf-8-sig") as fh:
        text = fh.read()
    lines = text.splitlines()
    first = next((ln for ln in lines if ln.strip()), "")
    delim = _sniff_delimiter(first)
    reader = csv.reader(io.StringIO(text), delimiter=delim) if delim else (ln.split() for ln in lines)
    written = 0
    with open(out_path, "w", encoding="utf-8") as out:
        for lineno, row in enumerate(reader, start=1):
            row = [c.strip() for c in row]
            if not row or not any(row) or row[0].startswith("#"):
                continue
            if len(row) < 2:
                raise SimilarityFormatError(f"{in_path}:{lineno}: expected cue, response[, strength]")
            strength = 1.0
            if len(row) >= 3:
                if not _is_number(row[2]):
                    if written == 0:
                        continue  # header
                    raise SimilarityFormatError(f"{in_path}:{lineno}: non-numeric strength {row[2]!r}")
                strength = float(row[2])
            cue, resp = ("_".join(row[0].split()), "_".join(row[1].split()))
            if lowercase:
                cue, resp = cue.lower(), resp.lower()
            if not resp or resp in ("na", "nan") or cue == resp or strength <= 0:
                continue
            w = strength if weights == "frequency" else 1.0
            out.write(f"{cue} {resp} {float(w)!r}\n")
            written += 1
    return written
