"""TF-IDF vector space model with cosine similarity over sparse vectors.

One index per text field (title, body, claim). Document vectors are raw
term frequency scaled by ln(n_docs / doc_freq); similarity is the cosine
of the angle between vectors. Exhaustive scoring is fine at corpus scale
(thousands of records), so there is no inverted-list machinery here.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .textproc import BagOfWords, Vocabulary

SparseVector = dict[int, float]


@dataclass
class TfIdfIndex:
    """Immutable after build; safe for concurrent reads."""

    vocab: Vocabulary
    field_tag: str
    n_docs: int = 0
    doc_freq: dict[int, int] = field(default_factory=dict)
    doc_vectors: dict[str, SparseVector] = field(default_factory=dict)
    _norms: dict[str, float] = field(default_factory=dict, repr=False)

    def norm(self, doc_id: str) -> float:
        cached = self._norms.get(doc_id)
        if cached is None:
            cached = vector_norm(self.doc_vectors[doc_id])
            self._norms[doc_id] = cached
        return cached


def idf(term: str, index: TfIdfIndex) -> float:
    """ln(n_docs / doc_freq). OOV terms and terms in no indexed document
    contribute 0 (arbitrary query text must never error)."""
    term_id = index.vocab.term_ids.get(term)
    if term_id is None:
        return 0.0
    df = index.doc_freq.get(term_id, 0)
    if df == 0 or index.n_docs == 0:
        return 0.0
    return math.log(index.n_docs / df)


def vectorize(bow: BagOfWords, index: TfIdfIndex) -> SparseVector:
    """tf x idf per term; zero-weight entries are pruned."""
    vec: SparseVector = {}
    for term, tf in bow.counts.items():
        term_id = index.vocab.term_ids.get(term)
        if term_id is None:
            continue
        w = tf * idf(term, index)
        if w != 0.0:
            vec[term_id] = w
    return vec


def vector_norm(v: SparseVector) -> float:
    return math.sqrt(sum(w * w for w in v.values()))


def cosine(u: SparseVector, v: SparseVector) -> float:
    """dot(u, v) / (|u| |v|), 0 when either norm is 0. In [0, 1] for
    non-negative vectors (clamped against float drift)."""
    if not u or not v:
        return 0.0
    if len(v) < len(u):
        u, v = v, u
    dot = 0.0
    for term_id, w in u.items():
        other = v.get(term_id)
        if other is not None:
            dot += w * other
    if dot == 0.0:
        return 0.0
    denom = vector_norm(u) * vector_norm(v)
    if denom == 0.0:
        return 0.0
    return min(dot / denom, 1.0)


def build_index(
    records: list[tuple[str, str]], vocab: Vocabulary, field_tag: str
) -> TfIdfIndex:
    """Build a TF-IDF index over (id, text) records.

    Document frequency is computed over these records (not the vocabulary
    corpus). Records whose text reduces to nothing in-vocabulary get an
    empty vector. Duplicate ids are an error.
    """
    from .textproc import to_bow, tokenize

    bows: dict[str, BagOfWords] = {}
    df: dict[int, int] = {}
    for rec_id, text in records:
        if rec_id in bows:
            raise ValueError(f"duplicate record id {rec_id!r} in {field_tag} index")
        bow = to_bow(tokenize(text), vocab)
        bows[rec_id] = bow
        for term in bow.counts:
            term_id = vocab.term_ids[term]
            df[term_id] = df.get(term_id, 0) + 1

    index = TfIdfIndex(
        vocab=vocab, field_tag=field_tag, n_docs=len(bows), doc_freq=df
    )
    for rec_id, bow in bows.items():
        index.doc_vectors[rec_id] = vectorize(bow, index)
    return index


def save_index(index: TfIdfIndex, path: str | Path) -> None:
    """JSON snapshot. Float weights round-trip exactly (repr-based)."""
    payload = {
        "field_tag": index.field_tag,
        "n_docs": index.n_docs,
        "vocab_hash": index.vocab.content_hash(),
        "doc_freq": {str(t): c for t, c in sorted(index.doc_freq.items())},
        "doc_vectors": {
            doc_id: {str(t): w for t, w in sorted(vec.items())}
            for doc_id, vec in index.doc_vectors.items()
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False)


def load_index(path: str | Path, vocab: Vocabulary) -> TfIdfIndex:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload["vocab_hash"] != vocab.content_hash():
        raise ValueError(
            f"index at {path} was built against a different vocabulary"
        )
    return TfIdfIndex(
        vocab=vocab,
        field_tag=payload["field_tag"],
        n_docs=payload["n_docs"],
        doc_freq={int(t): c for t, c in payload["doc_freq"].items()},
        doc_vectors={
            doc_id: {int(t): w for t, w in vec.items()}
            for doc_id, vec in payload["doc_vectors"].items()
        },
    )
