"""Theme discovery over the fact-check corpus.

Latent Dirichlet allocation trained with collapsed Gibbs sampling (seeded,
fully deterministic), mixture inference for new documents, the manual
thematic-topic labeling workflow, and a hard-assignment K-means baseline
kept around to demonstrate why single-membership clustering is not enough.
"""

from __future__ import annotations

import dataclasses
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernel
from .index import SparseVector, cosine
from .textproc import BagOfWords, Vocabulary

log = logging.getLogger(__name__)

DEFAULT_BETA = 0.01
DEFAULT_ITERATIONS = 1000
DEFAULT_MIXTURE_FLOOR = 0.01


@dataclass
class TopicModel:
    """Trained topic model; immutable in practice, safe for concurrent reads."""

    k: int
    vocab: Vocabulary
    topic_word: np.ndarray  # (k, vocab_size) float64, rows sum to 1
    alpha: float
    beta: float
    seed: int
    iterations: int
    thematic_ids: frozenset[int] = field(default_factory=frozenset)
    empty_docs_skipped: int = 0  # training diagnostic, not persisted


@dataclass
class TopicMixture:
    """Per-document topic proportions (floor-pruned, renormalized).

    ``degenerate`` marks the uniform fallback for empty/all-OOV documents;
    degenerate mixtures keep all k entries unpruned.
    """

    weights: dict[int, float]
    degenerate: bool = False


def _bow_to_term_ids(bow: BagOfWords, vocab: Vocabulary) -> np.ndarray:
    """Expand a bag of words to a term-id stream, sorted ids, counts repeated."""
    ids: list[int] = []
    for term in sorted(bow.counts, key=lambda t: vocab.term_ids[t]):
        ids.extend([vocab.term_ids[term]] * bow.counts[term])
    return np.asarray(ids, dtype=np.int32)


def train_lda(
    bows: list[BagOfWords],
    vocab: Vocabulary,
    k: int,
    alpha: float | None = None,
    beta: float = DEFAULT_BETA,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
) -> TopicModel:
    """Train by collapsed Gibbs sampling; deterministic given the seed.

    alpha defaults to 50/k. Documents that are empty after vocabulary
    filtering are skipped (counted in ``empty_docs_skipped``).
    """
    if not bows:
        raise ValueError("train_lda requires at least one document")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > len(vocab):
        raise ValueError(f"k={k} exceeds vocabulary size {len(vocab)}")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if alpha is None:
        alpha = 50.0 / k
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")

    words: list[np.ndarray] = []
    docs: list[np.ndarray] = []
    skipped = 0
    doc_idx = 0
    for bow in bows:
        ids = _bow_to_term_ids(bow, vocab)
        if ids.size == 0:
            skipped += 1
            continue
        words.append(ids)
        docs.append(np.full(ids.size, doc_idx, dtype=np.int32))
        doc_idx += 1
    if doc_idx == 0:
        raise ValueError("all documents are empty after vocabulary filtering")
    if skipped:
        log.warning("train_lda skipped %d empty document(s)", skipped)

    word_stream = np.concatenate(words)
    doc_stream = np.concatenate(docs)
    _, _, n_kt, n_k = _kernel.train_sweeps(
        word_stream, doc_stream, doc_idx, len(vocab), k, alpha, beta, iterations, seed
    )

    topic_word = (n_kt + beta) / (n_k + len(vocab) * beta)[:, None]
    return TopicModel(
        k=k,
        vocab=vocab,
        topic_word=topic_word,
        alpha=alpha,
        beta=beta,
        seed=seed,
        iterations=iterations,
        empty_docs_skipped=skipped,
    )


def infer_mixture(
    bow: BagOfWords,
    model: TopicModel,
    iterations: int = 100,
    seed: int = 0,
    floor: float = DEFAULT_MIXTURE_FLOOR,
) -> TopicMixture:
    """Sample document-topic proportions holding topic-word rows fixed.

    Entries below ``floor`` are pruned and the rest renormalized (the
    largest entry is kept if pruning would remove everything). Empty or
    all-OOV input yields the uniform degenerate mixture.
    """
    ids = _bow_to_term_ids(bow, model.vocab)
    if ids.size == 0:
        return TopicMixture(
            weights={t: 1.0 / model.k for t in range(model.k)}, degenerate=True
        )
    n_d = _kernel.infer_sweeps(ids, model.topic_word, model.alpha, iterations, seed)
    theta = (n_d + model.alpha) / (ids.size + model.k * model.alpha)

    kept = {t: float(theta[t]) for t in range(model.k) if theta[t] >= floor}
    if not kept:
        best = int(np.argmax(theta))
        kept = {best: float(theta[best])}
    total = sum(kept.values())
    return TopicMixture(weights={t: w / total for t, w in sorted(kept.items())})


def top_words(model: TopicModel, topic_id: int, n: int) -> list[tuple[str, float]]:
    """The n highest-probability terms of a topic, ties broken lexicographically."""
    if not 0 <= topic_id < model.k:
        raise ValueError(f"topic_id {topic_id} out of range for k={model.k}")
    row = model.topic_word[topic_id]
    ranked = sorted(
        ((model.vocab.terms[t], float(row[t])) for t in range(len(row))),
        key=lambda pair: (-pair[1], pair[0]),
    )
    return ranked[: max(n, 0)]


def top_documents(
    model: TopicModel,
    mixtures: dict[str, TopicMixture],
    topic_id: int,
    n: int,
) -> list[str]:
    """Doc ids with the highest weight on a topic, descending, ties by id."""
    if not 0 <= topic_id < model.k:
        raise ValueError(f"topic_id {topic_id} out of range for k={model.k}")
    scored = [
        (doc_id, mix.weights.get(topic_id, 0.0))
        for doc_id, mix in mixtures.items()
        if mix.weights.get(topic_id, 0.0) > 0.0
    ]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return [doc_id for doc_id, _ in scored[: max(n, 0)]]


def set_thematic(model: TopicModel, topic_ids: set[int]) -> TopicModel:
    """Replace the thematic topic id set (the manually labeled themes)."""
    bad = [t for t in topic_ids if not 0 <= t < model.k]
    if bad:
        raise ValueError(f"thematic topic ids out of range for k={model.k}: {sorted(bad)}")
    return dataclasses.replace(model, thematic_ids=frozenset(topic_ids))


def topic_cosine(
    m1: TopicMixture, m2: TopicMixture, restrict: set[int] | frozenset[int] | None = None
) -> float:
    """Cosine in topic space; with ``restrict``, both mixtures are first
    projected onto the given topic ids (zero-norm projection scores 0)."""
    u: SparseVector = dict(m1.weights)
    v: SparseVector = dict(m2.weights)
    if restrict is not None:
        u = {t: w for t, w in u.items() if t in restrict}
        v = {t: w for t, w in v.items() if t in restrict}
    return cosine(u, v)


def kmeans_baseline(
    vectors: list[SparseVector], k: int, seed: int = 0, max_iters: int = 100
) -> dict[int, int]:
    """Lloyd's algorithm with seeded init; hard single assignment per doc.

    The single-membership output is exactly the limitation that motivates
    using topic mixtures instead. Returns {position in input -> cluster}.
    """
    if not vectors:
        raise ValueError("kmeans_baseline requires at least one vector")
    if k > len(vectors):
        raise ValueError(f"k={k} exceeds number of documents {len(vectors)}")

    dims = sorted({d for vec in vectors for d in vec})
    dim_pos = {d: i for i, d in enumerate(dims)}
    data = np.zeros((len(vectors), max(len(dims), 1)))
    for i, vec in enumerate(vectors):
        for d, w in vec.items():
            data[i, dim_pos[d]] = w

    rng = np.random.RandomState(seed)
    centroids = data[rng.permutation(len(vectors))[:k]].copy()
    assignment = np.full(len(vectors), -1, dtype=np.int64)
    for _ in range(max_iters):
        # squared distances via |x|^2 - 2 x.c + |c|^2; argmin takes lowest index on ties
        dots = data @ centroids.T
        dist = (data * data).sum(axis=1)[:, None] - 2 * dots + (centroids * centroids).sum(axis=1)[None, :]
        new_assignment = dist.argmin(axis=1)
        if np.array_equal(new_assignment, assignment):
            break
        assignment = new_assignment
        for c in range(k):
            members = data[assignment == c]
            if len(members):
                centroids[c] = members.mean(axis=0)
    return {i: int(c) for i, c in enumerate(assignment)}


def save_model(model: TopicModel, path: str | Path) -> None:
    """Header line (JSON) + one JSON row of term probabilities per topic.

    Probabilities serialize via repr so reloading reproduces inference
    bit-for-bit.
    """
    header = {
        "k": model.k,
        "alpha": model.alpha,
        "beta": model.beta,
        "seed": model.seed,
        "iterations": model.iterations,
        "vocab_hash": model.vocab.content_hash(),
        "thematic_ids": sorted(model.thematic_ids),
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header) + "\n")
        for row in model.topic_word:
            fh.write(json.dumps(row.tolist()) + "\n")


def load_model(path: str | Path, vocab: Vocabulary) -> TopicModel:
    with open(path, encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header["vocab_hash"] != vocab.content_hash():
            raise ValueError(f"model at {path} was trained on a different vocabulary")
        rows = [json.loads(line) for line in fh if line.strip()]
    if len(rows) != header["k"]:
        raise ValueError(
            f"model at {path} has {len(rows)} topic rows, expected {header['k']}"
        )
    return TopicModel(
        k=header["k"],
        vocab=vocab,
        topic_word=np.array(rows, dtype=np.float64),
        alpha=header["alpha"],
        beta=header["beta"],
        seed=header["seed"],
        iterations=header["iterations"],
        thematic_ids=frozenset(header["thematic_ids"]),
    )
