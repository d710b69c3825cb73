"""Composite relevance scoring and retrieval.

The score of an (article, fact check) pair is a weighted sum of four
channels: article title vs. reviewed claim (TF-IDF cosine), body vs. body
(TF-IDF cosine), topic-mixture cosine, and topic-mixture cosine restricted
to the thematic topics. Results below the cutoff t_l are never returned.

The inverse direction (articles related to a fact check) reuses the same
machinery with shortened claim-derived queries and is precomputed offline.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

from .corpus import Article, FactCheck
from .index import SparseVector, TfIdfIndex, build_index, cosine, vectorize
from .textproc import Vocabulary, to_bow, tokenize
from .topics import TopicMixture, TopicModel, infer_mixture, topic_cosine

log = logging.getLogger(__name__)

DEFAULT_TOP_K = 5
DEFAULT_RELATED_N = 20


@dataclass
class Weights:
    """Channel weights plus the display cutoff t_l."""

    w_title: float = 1.0
    w_body: float = 1.0
    w_topics: float = 1.0
    w_thematic: float = 1.0
    t_l: float = 0.0

    def __post_init__(self) -> None:
        for name in ("w_title", "w_body", "w_topics", "w_thematic"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for name in ("w_title", "w_body", "w_topics", "w_thematic", "t_l"):
                fh.write(f"{name} = {getattr(self, name)!r}\n")

    @classmethod
    def load(cls, path: str | Path) -> "Weights":
        values: dict[str, float] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected 'name = value'")
                name, _, raw = line.partition("=")
                values[name.strip()] = float(raw.strip())
        return cls(**values)


@dataclass
class ScoredResult:
    """Per-pair channel scores and their weighted total."""

    factcheck_id: str
    s_title: float
    s_body: float
    s_topics: float
    s_thematic: float
    total: float
    body_missing: bool = False


@dataclass
class DocFeatures:
    """One side of a scoring pair: title-channel vector, body vector, mixture.

    For fact checks the title channel is built from the reviewed claim (the
    claim is the fact check's synopsis the way a title is an article's).
    """

    title_vec: SparseVector
    body_vec: SparseVector | None
    mixture: TopicMixture | None


@dataclass
class RelatedArticlesMap:
    """Precomputed fact check -> related articles, sorted by descending score."""

    entries: dict[str, list[tuple[str, float]]] = field(default_factory=dict)

    def save(self, path: str | Path) -> None:
        import json

        with open(path, "w", encoding="utf-8") as fh:
            for fc_id in sorted(self.entries):
                pairs = [[aid, score] for aid, score in self.entries[fc_id]]
                fh.write(json.dumps({"factcheck_id": fc_id, "articles": pairs}) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "RelatedArticlesMap":
        import json

        entries: dict[str, list[tuple[str, float]]] = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                rec = json.loads(line)
                entries[rec["factcheck_id"]] = [
                    (aid, float(score)) for aid, score in rec["articles"]
                ]
        return cls(entries=entries)


class SearchAdapter(Protocol):
    """Pluggable external search engine: query terms in, result URLs out."""

    def search(self, query_terms: list[str], n: int) -> list[str]: ...


class NullSearchAdapter:
    """No external engine configured."""

    def search(self, query_terms: list[str], n: int) -> list[str]:
        return []


class FixtureSearchAdapter:
    """Replays canned results keyed on the space-joined query, for tests."""

    def __init__(self, responses: dict[str, list[str]]):
        self.responses = responses

    def search(self, query_terms: list[str], n: int) -> list[str]:
        return self.responses.get(" ".join(query_terms), [])[:n]


def score_pair(
    article: DocFeatures,
    factcheck: DocFeatures,
    weights: Weights,
    thematic_ids: frozenset[int] | set[int] = frozenset(),
    factcheck_id: str = "",
) -> ScoredResult:
    """Weighted four-channel score for one (article, fact check) pair.

    Missing bodies zero the body channel (flagged); a degenerate mixture on
    either side zeroes both topic channels.
    """
    s_title = cosine(article.title_vec, factcheck.title_vec)

    body_missing = article.body_vec is None or factcheck.body_vec is None
    s_body = 0.0 if body_missing else cosine(article.body_vec, factcheck.body_vec)

    topics_usable = (
        article.mixture is not None
        and factcheck.mixture is not None
        and not article.mixture.degenerate
        and not factcheck.mixture.degenerate
    )
    s_topics = topic_cosine(article.mixture, factcheck.mixture) if topics_usable else 0.0
    s_thematic = (
        topic_cosine(article.mixture, factcheck.mixture, restrict=thematic_ids)
        if topics_usable and thematic_ids
        else 0.0
    )

    total = (
        weights.w_title * s_title
        + weights.w_body * s_body
        + weights.w_topics * s_topics
        + weights.w_thematic * s_thematic
    )
    return ScoredResult(
        factcheck_id=factcheck_id,
        s_title=s_title,
        s_body=s_body,
        s_topics=s_topics,
        s_thematic=s_thematic,
        total=total,
        body_missing=body_missing,
    )


@dataclass
class ArticleInput:
    """Raw article content for one-shot retrieval (server/CLI requests)."""

    title: str = ""
    body: str = ""


class FactCheckCollection:
    """Fact checks with scoring features prepared once at build time."""

    def __init__(
        self,
        factchecks: list[FactCheck],
        vocab: Vocabulary,
        model: TopicModel,
        infer_iterations: int = 100,
        seed: int = 0,
    ):
        self.factchecks = {fc.id: fc for fc in factchecks}
        if len(self.factchecks) != len(factchecks):
            raise ValueError("duplicate fact check ids in collection")
        self.vocab = vocab
        self.model = model
        self.infer_iterations = infer_iterations
        self.seed = seed

        self.claim_index: TfIdfIndex = build_index(
            [(fc.id, fc.claim_reviewed) for fc in factchecks], vocab, "claim"
        )
        self.body_index: TfIdfIndex = build_index(
            [(fc.id, fc.body_text or "") for fc in factchecks], vocab, "body"
        )
        self.features: dict[str, DocFeatures] = {}
        for fc in factchecks:
            body_vec = self.body_index.doc_vectors[fc.id] if fc.body_text else None
            mix_text = fc.body_text or f"{fc.title} {fc.claim_reviewed}"
            mixture = infer_mixture(
                to_bow(tokenize(mix_text), vocab),
                model,
                iterations=infer_iterations,
                seed=seed,
            )
            self.features[fc.id] = DocFeatures(
                title_vec=self.claim_index.doc_vectors[fc.id],
                body_vec=body_vec,
                mixture=mixture,
            )

    def article_features(self, article: ArticleInput | Article) -> DocFeatures:
        """Vectorize an article into this collection's scoring spaces."""
        title = article.title
        body = article.body if isinstance(article, ArticleInput) else article.body_text
        title_vec = vectorize(to_bow(tokenize(title), self.vocab), self.claim_index)
        body_bow = to_bow(tokenize(body or ""), self.vocab)
        body_vec = vectorize(body_bow, self.body_index) if body else None
        mix_bow = body_bow if body else to_bow(tokenize(title), self.vocab)
        mixture = infer_mixture(
            mix_bow, self.model, iterations=self.infer_iterations, seed=self.seed
        )
        return DocFeatures(title_vec=title_vec, body_vec=body_vec, mixture=mixture)


def retrieve(
    article: ArticleInput | Article | DocFeatures,
    collection: FactCheckCollection,
    weights: Weights,
    k: int = DEFAULT_TOP_K,
) -> list[ScoredResult]:
    """Score every fact check, sort by descending total (ties by id),
    drop totals below t_l, truncate to k. May return fewer than k results."""
    if k < 1:
        raise ValueError("k must be >= 1")
    feats = (
        article
        if isinstance(article, DocFeatures)
        else collection.article_features(article)
    )
    results = [
        score_pair(feats, fc_feats, weights, collection.model.thematic_ids, fc_id)
        for fc_id, fc_feats in collection.features.items()
    ]
    results.sort(key=lambda r: (-r.total, r.factcheck_id))
    return [r for r in results if r.total >= weights.t_l][:k]


def build_query(claim_reviewed: str, vocab: Vocabulary, max_terms: int = 8) -> list[str]:
    """Shorten a reviewed claim to its most informative in-vocabulary terms.

    Highest-IDF terms win (ties keep earlier position); output preserves
    original claim order. An empty result is flagged with a warning.
    """
    seen: set[str] = set()
    uniq: list[str] = []
    for tok in tokenize(claim_reviewed):
        if tok in vocab.term_ids and tok not in seen:
            seen.add(tok)
            uniq.append(tok)
    if not uniq:
        log.warning("query for claim %r reduced to nothing", claim_reviewed[:80])
        return []
    by_idf = sorted(range(len(uniq)), key=lambda i: (-vocab.idf(uniq[i]), i))
    kept = sorted(by_idf[: max(max_terms, 0)])
    return [uniq[i] for i in kept]


class ArticleCollection:
    """Article corpus prepared for the inverse (fact check -> articles) direction."""

    def __init__(
        self,
        articles: list[Article],
        vocab: Vocabulary,
        model: TopicModel,
        infer_iterations: int = 100,
        seed: int = 0,
    ):
        self.articles = {a.id: a for a in articles}
        if len(self.articles) != len(articles):
            raise ValueError("duplicate article ids in collection")
        self.vocab = vocab
        self.model = model
        self.infer_iterations = infer_iterations
        self.seed = seed
        self.by_url = {a.url: a.id for a in articles}

        self.title_index: TfIdfIndex = build_index(
            [(a.id, a.title) for a in articles], vocab, "title"
        )
        self.body_index: TfIdfIndex = build_index(
            [(a.id, a.body_text) for a in articles], vocab, "body"
        )
        self.features: dict[str, DocFeatures] = {}
        for a in articles:
            mix_text = a.body_text or a.title
            mixture = infer_mixture(
                to_bow(tokenize(mix_text), vocab),
                model,
                iterations=infer_iterations,
                seed=seed,
            )
            self.features[a.id] = DocFeatures(
                title_vec=self.title_index.doc_vectors[a.id],
                body_vec=self.body_index.doc_vectors[a.id] if a.body_text else None,
                mixture=mixture,
            )

    def factcheck_features(self, fc: FactCheck, max_query_terms: int = 8) -> DocFeatures:
        """Project a fact check into the article scoring spaces: the shortened
        claim query plays the title channel, the fact-check body the body channel."""
        query_terms = build_query(fc.claim_reviewed, self.vocab, max_query_terms)
        query_bow = to_bow(query_terms, self.vocab)
        title_vec = vectorize(query_bow, self.title_index)
        body_bow = to_bow(tokenize(fc.body_text or ""), self.vocab)
        body_vec = vectorize(body_bow, self.body_index) if fc.body_text else None
        mix_text = fc.body_text or f"{fc.title} {fc.claim_reviewed}"
        mixture = infer_mixture(
            to_bow(tokenize(mix_text), self.vocab),
            self.model,
            iterations=self.infer_iterations,
            seed=self.seed,
        )
        return DocFeatures(title_vec=title_vec, body_vec=body_vec, mixture=mixture)


def find_related_articles(
    factcheck: FactCheck,
    articles: ArticleCollection,
    weights: Weights,
    search_adapter: SearchAdapter | None = None,
    n: int = DEFAULT_RELATED_N,
    max_query_terms: int = 8,
) -> list[tuple[str, float]]:
    """Articles carrying the fact check's claim, best first, at most n.

    Locally scored results above t_l; when an external search adapter is
    configured its results (resolved by URL against the corpus) are merged
    ahead of the local ranking, deduplicated by URL. Adapter failures fall
    back to local-only scoring.
    """
    fc_feats = articles.factcheck_features(factcheck, max_query_terms)
    scored = [
        (a_id, score_pair(feats, fc_feats, weights, articles.model.thematic_ids, a_id))
        for a_id, feats in articles.features.items()
    ]
    # the fact check plays the "article" role of score_pair's signature here;
    # the channel pairing (claim query vs. title, body vs. body) is unchanged
    local = [
        (a_id, r.total)
        for a_id, r in sorted(scored, key=lambda item: (-item[1].total, item[0]))
        if r.total >= weights.t_l
    ]
    totals = {a_id: r.total for a_id, r in scored}

    merged: list[tuple[str, float]] = []
    seen_urls: set[str] = set()
    if search_adapter is not None:
        query_terms = build_query(factcheck.claim_reviewed, articles.vocab, max_query_terms)
        try:
            urls = search_adapter.search(query_terms, n)
        except Exception as exc:
            log.warning("search adapter failed (%s); using local results only", exc)
            urls = []
        for url in urls:
            a_id = articles.by_url.get(url)
            if a_id is None or url in seen_urls:
                continue
            seen_urls.add(url)
            merged.append((a_id, totals[a_id]))

    for a_id, total in local:
        url = articles.articles[a_id].url
        if url in seen_urls:
            continue
        seen_urls.add(url)
        merged.append((a_id, total))
    return merged[:n]


def precompute_related(
    factchecks: list[FactCheck],
    articles: ArticleCollection,
    weights: Weights,
    n: int = DEFAULT_RELATED_N,
    search_adapter: SearchAdapter | None = None,
) -> RelatedArticlesMap:
    """Related-article lists for every fact check (possibly empty), offline."""
    entries = {
        fc.id: find_related_articles(fc, articles, weights, search_adapter, n)
        for fc in factchecks
    }
    return RelatedArticlesMap(entries=entries)
