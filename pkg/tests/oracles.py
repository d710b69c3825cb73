"""Independent brute-force oracles shared by unit and acceptance tests.

Each oracle recomputes the checked quantity from first principles, never
through the code paths it verifies.
"""

import itertools

import numpy as np

from relcheck.ranker import Weights, retrieve, score_pair


def dense_scores(doc_tokens: dict[str, list[str]], query_tokens: list[str]) -> dict[str, float]:
    """TF-IDF cosine via a dense term-document matrix built from raw counts."""
    vocab_terms = sorted({t for toks in doc_tokens.values() for t in toks})
    pos = {t: i for i, t in enumerate(vocab_terms)}
    ids = sorted(doc_tokens)
    n = len(ids)
    tf = np.zeros((n, len(vocab_terms)))
    for row, doc_id in enumerate(ids):
        for tok in doc_tokens[doc_id]:
            tf[row, pos[tok]] += 1
    df = (tf > 0).sum(axis=0)
    idf_vec = np.where(df > 0, np.log(n / np.maximum(df, 1)), 0.0)
    doc_mat = tf * idf_vec
    q = np.zeros(len(vocab_terms))
    for tok in query_tokens:
        if tok in pos:
            q[pos[tok]] += 1
    q = q * idf_vec
    scores = {}
    qn = np.linalg.norm(q)
    for row, doc_id in enumerate(ids):
        dn = np.linalg.norm(doc_mat[row])
        dot = float(doc_mat[row] @ q)
        scores[doc_id] = 0.0 if qn == 0 or dn == 0 or dot == 0 else min(dot / (qn * dn), 1.0)
    return scores


def brute_force_rank(article, collection, weights: Weights, k: int):
    """Score every pair directly, sort by (-total, id), cut at t_l, truncate."""
    feats = collection.article_features(article)
    scored = []
    for fc_id, fc_feats in collection.features.items():
        r = score_pair(feats, fc_feats, weights, collection.model.thematic_ids, fc_id)
        scored.append((r.total, fc_id))
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    return [(fc_id, total) for total, fc_id in scored if total >= weights.t_l][:k]


def oracle_tune(articles, labels, collection, grid, k):
    """Exhaustive grid enumeration calling retrieve() directly."""
    by_pair = {(j.article_id, j.factcheck_id): j.label.numeric for j in labels}
    axes = [sorted(grid[name]) for name in ("w_title", "w_body", "w_topics", "w_thematic")]
    axes.append(sorted(grid.get("t_l", [0.0])))
    best = None
    for combo in itertools.product(*axes):
        weights = Weights(*combo)
        score = 0
        for article in articles:
            for r in retrieve(article, collection, weights, k=k):
                score += by_pair.get((article.id, r.factcheck_id), -2)
        if best is None or score > best[1]:
            best = (weights, score)
    return best
