"""HTTP service: POST /v1/related and GET /v1/health over a loaded snapshot.

A snapshot is a directory holding the corpus, vocabulary, topic model,
weights and precomputed related-articles map. Responses are a pure
function of (snapshot, request) apart from the elapsed_ms diagnostic;
snapshot swaps are atomic from the client's view (each request reads the
snapshot reference once). Page URLs are not logged by default.
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .corpus import (
    Article,
    FactCheck,
    extract_article,
    fetch_pages,
    hostname,
    load_articles,
    load_factchecks,
)
from .ranker import (
    ArticleInput,
    FactCheckCollection,
    RelatedArticlesMap,
    Weights,
    retrieve,
)
from .textproc import load_vocabulary
from .topics import load_model

log = logging.getLogger(__name__)

SNAPSHOT_FACTCHECKS = "factchecks.jsonl"
SNAPSHOT_ARTICLES = "articles.jsonl"
SNAPSHOT_VOCAB = "vocab.tsv"
SNAPSHOT_MODEL = "topics.model"
SNAPSHOT_WEIGHTS = "weights.toml"
SNAPSHOT_RELATED = "related.jsonl"
SNAPSHOT_META = "snapshot.json"


class RequestError(Exception):
    """Client-side request problem -> 4xx structured error."""

    def __init__(self, code: str, message: str, status: int = 400):
        super().__init__(message)
        self.code = code
        self.message = message
        self.status = status


@dataclass
class RfcRequest:
    url: str | None = None
    title: str | None = None
    body: str | None = None
    max_results: int = 5

    @classmethod
    def from_payload(cls, payload: dict) -> "RfcRequest":
        if not isinstance(payload, dict):
            raise RequestError("bad_request", "request body must be a JSON object")
        max_results = payload.get("max_results")
        req = cls(
            url=payload.get("url"),
            title=payload.get("title"),
            body=payload.get("body"),
            max_results=5 if max_results is None else max_results,
        )
        if not isinstance(req.max_results, int) or req.max_results < 1:
            raise RequestError("bad_request", "max_results must be a positive integer")
        if not (req.url or (req.title or "").strip() or (req.body or "").strip()):
            raise RequestError("empty_input", "provide at least one of url, title, body")
        return req


def _file_hash(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


@dataclass
class Snapshot:
    """Everything a request needs, loaded once and treated as immutable."""

    collection: FactCheckCollection
    weights: Weights
    related: RelatedArticlesMap
    articles: dict[str, Article]
    corpus_hash: str
    model_hash: str
    allow_fetch: bool = True
    factchecks: dict[str, FactCheck] = field(default_factory=dict)

    @classmethod
    def load(cls, directory: str | Path, allow_fetch: bool = True) -> "Snapshot":
        directory = Path(directory)
        vocab = load_vocabulary(directory / SNAPSHOT_VOCAB)
        model = load_model(directory / SNAPSHOT_MODEL, vocab)
        factchecks = load_factchecks(directory / SNAPSHOT_FACTCHECKS)
        weights = Weights.load(directory / SNAPSHOT_WEIGHTS)

        meta = {}
        meta_path = directory / SNAPSHOT_META
        if meta_path.exists():
            meta = json.loads(meta_path.read_text())

        articles: dict[str, Article] = {}
        articles_path = directory / SNAPSHOT_ARTICLES
        if articles_path.exists():
            articles = {a.id: a for a in load_articles(articles_path)}

        related = RelatedArticlesMap()
        related_path = directory / SNAPSHOT_RELATED
        if related_path.exists():
            related = RelatedArticlesMap.load(related_path)

        collection = FactCheckCollection(
            factchecks,
            vocab,
            model,
            infer_iterations=meta.get("infer_iterations", 100),
            seed=meta.get("seed", 0),
        )

        corpus = hashlib.sha256((directory / SNAPSHOT_FACTCHECKS).read_bytes())
        if articles_path.exists():
            corpus.update(articles_path.read_bytes())
        return cls(
            collection=collection,
            weights=weights,
            related=related,
            articles=articles,
            corpus_hash=corpus.hexdigest(),
            model_hash=_file_hash(directory / SNAPSHOT_MODEL),
            allow_fetch=allow_fetch,
            factchecks={fc.id: fc for fc in factchecks},
        )


def _fetch_article_text(url: str) -> ArticleInput:
    results = fetch_pages([url], rate_limit=10.0)
    result = results[0]
    if result.error or result.html is None:
        raise RequestError(
            "fetch_failed", f"could not fetch {url}: {result.error}", status=502
        )
    try:
        article = extract_article(result.html, url)
    except ValueError as exc:
        raise RequestError("empty_page", str(exc), status=422) from exc
    return ArticleInput(title=article.title, body=article.body_text)


def handle_related(snapshot: Snapshot, request: RfcRequest) -> dict:
    """Run the full pipeline for one request; returns the response payload.

    An empty fact_checks list is a valid outcome, not an error.
    """
    started = time.perf_counter()
    title = (request.title or "").strip()
    body = (request.body or "").strip()
    if not title and not body:
        if not request.url:
            raise RequestError("empty_input", "provide at least one of url, title, body")
        if not snapshot.allow_fetch:
            raise RequestError(
                "fetch_disabled", "url-only requests are disabled on this server", status=403
            )
        fetched = _fetch_article_text(request.url)
        title, body = fetched.title, fetched.body

    results = retrieve(
        ArticleInput(title=title, body=body),
        snapshot.collection,
        snapshot.weights,
        k=request.max_results,
    )

    site = hostname(request.url) if request.url else None
    seen: dict[str, float] = {}
    for result in results:
        for article_id, score in snapshot.related.entries.get(result.factcheck_id, []):
            article = snapshot.articles.get(article_id)
            if article is None:
                continue
            if site and article.site != site:
                continue
            if article_id not in seen or score > seen[article_id]:
                seen[article_id] = score
    related_rows = [
        {"url": a.url, "site": a.site, "title": a.title}
        for a in (
            snapshot.articles[a_id]
            for a_id, _ in sorted(seen.items(), key=lambda kv: (-kv[1], kv[0]))
        )
    ]

    fact_checks = []
    for result in results:
        fc = snapshot.factchecks[result.factcheck_id]
        fact_checks.append(
            {
                "url": fc.url,
                "publisher": fc.publisher,
                "title": fc.title,
                "claim_reviewed": fc.claim_reviewed,
                "rating_label": fc.rating_label,
                "score": result.total,
            }
        )

    elapsed_ms = int((time.perf_counter() - started) * 1000)
    return {
        "fact_checks": fact_checks,
        "related_articles": related_rows,
        "diagnostics": {
            "n_scored": len(snapshot.collection.features),
            "threshold": snapshot.weights.t_l,
            "elapsed_ms": elapsed_ms,
        },
    }


def handle_health(snapshot: Snapshot | None) -> tuple[int, dict]:
    if snapshot is None:
        return 503, {"status": "not_ready"}
    w = snapshot.weights
    return 200, {
        "status": "ok",
        "corpus_hash": snapshot.corpus_hash,
        "model_hash": snapshot.model_hash,
        "weights": {
            "w_title": w.w_title,
            "w_body": w.w_body,
            "w_topics": w.w_topics,
            "w_thematic": w.w_thematic,
            "t_l": w.t_l,
        },
    }


def create_app(snapshot: Snapshot | None = None) -> FastAPI:
    app = FastAPI(title="related fact checks", docs_url=None, redoc_url=None)
    app.state.snapshot = snapshot

    def swap_snapshot(new_snapshot: Snapshot) -> None:
        app.state.snapshot = new_snapshot  # atomic reference swap

    app.state.swap_snapshot = swap_snapshot

    @app.exception_handler(Exception)
    async def on_internal_error(request: Request, exc: Exception):
        log.exception("request failed")
        return JSONResponse(
            status_code=500,
            content={"code": "internal_error", "message": "internal server error"},
        )

    @app.post("/v1/related")
    async def related(request: Request):
        snap: Snapshot | None = app.state.snapshot
        if snap is None:
            return JSONResponse(
                status_code=503,
                content={"code": "not_ready", "message": "no snapshot loaded"},
            )
        try:
            payload = await request.json()
        except Exception:
            return JSONResponse(
                status_code=400,
                content={"code": "bad_request", "message": "body must be valid JSON"},
            )
        try:
            rfc_request = RfcRequest.from_payload(payload)
            return JSONResponse(handle_related(snap, rfc_request))
        except RequestError as exc:
            return JSONResponse(
                status_code=exc.status,
                content={"code": exc.code, "message": exc.message},
            )

    @app.get("/v1/health")
    async def health():
        status, payload = handle_health(app.state.snapshot)
        return JSONResponse(status_code=status, content=payload)

    return app
