"""Command-line pipeline driver.

Subcommands cover the whole offline flow (ingest -> index -> train-topics
-> set-thematic -> related-precompute -> tune -> eval) plus one-shot
retrieval (query) and the HTTP service (serve). All randomness is seeded
via --seed; reruns with identical inputs give identical outputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import server as server_mod
from .ranker import (
    ArticleCollection,
    FactCheckCollection,
    Weights,
    precompute_related,
)
from .textproc import build_vocabulary, load_vocabulary, save_vocabulary, to_bow, tokenize
from .topics import load_model, save_model, set_thematic, top_documents, top_words, train_lda
from .tuning import ablation_configurations, evaluate, load_labels, tune_weights

log = logging.getLogger(__name__)

_URL_COMMENT_RE = re.compile(r"<!--\s*url:\s*(\S+)\s*-->")

DEFAULT_GRID = {
    "w_title": [0.0, 0.25, 0.5, 1.0],
    "w_body": [0.0, 0.25, 0.5, 1.0],
    "w_topics": [0.0, 0.25, 0.5, 1.0],
    "w_thematic": [0.0, 0.25, 0.5, 1.0],
    "t_l": [0.05, 0.1, 0.2, 0.35],
}


def _gather_pages(args) -> list[tuple[str, str]]:
    """(source_url, html) pairs from a fixture directory or a URL list file.

    Fixture files may carry their origin in a leading ``<!-- url: ... -->``
    comment; otherwise a file:// URL is synthesized.
    """
    pages: list[tuple[str, str]] = []
    if args.input:
        for path in sorted(Path(args.input).glob("*.htm*")):
            html = path.read_text(encoding="utf-8", errors="replace")
            match = _URL_COMMENT_RE.search(html[:500])
            url = match.group(1) if match else path.absolute().as_uri()
            pages.append((url, html))
    if args.urls:
        url_list = [
            line.strip()
            for line in Path(args.urls).read_text().splitlines()
            if line.strip() and not line.startswith("#")
        ]
        for result in corpus_mod.fetch_pages(url_list, rate_limit=args.rate_limit):
            if result.error:
                log.warning("fetch failed for %s: %s", result.url, result.error)
            else:
                pages.append((result.url, result.html))
    return pages


def cmd_ingest(args) -> int:
    diagnostics = corpus_mod.ExtractionDiagnostics()
    records = []
    for url, html in _gather_pages(args):
        records.extend(corpus_mod.extract_claim_reviews(html, url, diagnostics))
    deduped = corpus_mod.dedupe(records)
    corpus_mod.save_corpus(deduped, args.out)
    stats = corpus_mod.compute_stats(deduped)
    print(
        f"ingested {stats.n_factchecks} fact checks from {stats.n_sites} site(s) "
        f"({len(records) - len(deduped)} duplicates removed, "
        f"{diagnostics.jsonld_parse_errors} bad JSON-LD block(s), "
        f"{diagnostics.skipped_missing_claim} without claims)"
    )
    return 0


def cmd_articles(args) -> int:
    records = []
    for url, html in _gather_pages(args):
        try:
            records.append(corpus_mod.extract_article(html, url))
        except ValueError as exc:
            log.warning("skipping %s: %s", url, exc)
    seen: set[str] = set()
    unique = [a for a in records if not (a.id in seen or seen.add(a.id))]
    corpus_mod.save_corpus(unique, args.out)
    print(f"ingested {len(unique)} article(s)")
    return 0


def _factcheck_document(fc) -> str:
    return f"{fc.title} {fc.claim_reviewed} {fc.body_text or ''}"


def cmd_index(args) -> int:
    factchecks = corpus_mod.load_factchecks(args.factchecks)
    if not factchecks:
        print("no fact checks to index", file=sys.stderr)
        return 1
    vocab = build_vocabulary([tokenize(_factcheck_document(fc)) for fc in factchecks])
    save_vocabulary(vocab, args.out_vocab)
    print(f"vocabulary of {len(vocab)} terms over {vocab.n_docs} documents -> {args.out_vocab}")
    return 0


def cmd_train_topics(args) -> int:
    factchecks = corpus_mod.load_factchecks(args.factchecks)
    vocab = load_vocabulary(args.vocab)
    bows = [to_bow(tokenize(_factcheck_document(fc)), vocab) for fc in factchecks]
    model = train_lda(
        bows,
        vocab,
        k=args.k,
        alpha=args.alpha,
        beta=args.beta,
        iterations=args.iterations,
        seed=args.seed,
    )
    save_model(model, args.out)
    from ._kernel import BACKEND

    print(
        f"trained {args.k}-topic model ({args.iterations} iterations, seed {args.seed}, "
        f"{BACKEND} kernel) -> {args.out}"
    )
    return 0


def cmd_inspect_topic(args) -> int:
    vocab = load_vocabulary(args.vocab)
    model = load_model(args.model, vocab)
    print(f"topic {args.topic} (thematic: {args.topic in model.thematic_ids})")
    for term, prob in top_words(model, args.topic, args.words):
        print(f"  {term:<24} {prob:.4f}")
    if args.factchecks:
        from .topics import infer_mixture

        factchecks = corpus_mod.load_factchecks(args.factchecks)
        mixtures = {
            fc.id: infer_mixture(
                to_bow(tokenize(_factcheck_document(fc)), vocab), model, seed=args.seed
            )
            for fc in factchecks
        }
        by_id = {fc.id: fc for fc in factchecks}
        print(f"top {args.docs} documents:")
        for doc_id in top_documents(model, mixtures, args.topic, args.docs):
            print(f"  {doc_id}  {by_id[doc_id].claim_reviewed[:70]}")
    return 0


def cmd_set_thematic(args) -> int:
    vocab = load_vocabulary(args.vocab)
    model = load_model(args.model, vocab)
    ids = {int(part) for part in args.ids.split(",") if part.strip()} if args.ids else set()
    model = set_thematic(model, ids)
    save_model(model, args.out or args.model)
    print(f"thematic topics set to {sorted(model.thematic_ids)}")
    return 0


def cmd_related_precompute(args) -> int:
    factchecks = corpus_mod.load_factchecks(args.factchecks)
    articles = corpus_mod.load_articles(args.articles)
    vocab = load_vocabulary(args.vocab)
    model = load_model(args.model, vocab)
    weights = Weights.load(args.weights)
    collection = ArticleCollection(articles, vocab, model, seed=args.seed)
    related = precompute_related(factchecks, collection, weights, n=args.n)
    related.save(args.out)
    n_nonempty = sum(1 for pairs in related.entries.values() if pairs)
    print(
        f"precomputed related articles for {len(related.entries)} fact check(s) "
        f"({n_nonempty} non-empty) -> {args.out}"
    )
    return 0


def _load_eval_inputs(args):
    factchecks = corpus_mod.load_factchecks(args.factchecks)
    articles = corpus_mod.load_articles(args.articles)
    vocab = load_vocabulary(args.vocab)
    model = load_model(args.model, vocab)
    labels = load_labels(args.labels)
    labeled_ids = {j.article_id for j in labels}
    labeled_articles = [a for a in articles if a.id in labeled_ids]
    collection = FactCheckCollection(factchecks, vocab, model, seed=args.seed)
    return labeled_articles, labels, collection


def cmd_tune(args) -> int:
    labeled_articles, labels, collection = _load_eval_inputs(args)
    grid = json.loads(Path(args.grid).read_text()) if args.grid else DEFAULT_GRID
    weights, score = tune_weights(labeled_articles, labels, collection, grid, k=args.k)
    weights.save(args.out)
    print(
        f"best cumulative score {score} over {len(labeled_articles)} article(s): "
        f"w_title={weights.w_title} w_body={weights.w_body} "
        f"w_topics={weights.w_topics} w_thematic={weights.w_thematic} t_l={weights.t_l}"
    )
    return 0


def cmd_eval(args) -> int:
    labeled_articles, labels, collection = _load_eval_inputs(args)
    weights = Weights.load(args.weights)
    report = evaluate(
        labeled_articles, labels, collection, ablation_configurations(weights), k=args.k
    )
    print(report.format_table())
    if args.out:
        report.save(args.out)
        print(f"report -> {args.out}")
    return 0


def cmd_query(args) -> int:
    snapshot_dir = args.snapshot or os.environ.get("RFC_SNAPSHOT_DIR")
    if not snapshot_dir:
        print("query needs --snapshot or RFC_SNAPSHOT_DIR", file=sys.stderr)
        return 1
    snapshot = server_mod.Snapshot.load(snapshot_dir, allow_fetch=not args.no_fetch)
    request = server_mod.RfcRequest(
        url=args.url, title=args.title, body=args.body, max_results=args.max_results
    )
    if not (request.url or request.title or request.body):
        print("query needs at least one of --url/--title/--body", file=sys.stderr)
        return 1
    try:
        response = server_mod.handle_related(snapshot, request)
    except server_mod.RequestError as exc:
        print(json.dumps({"code": exc.code, "message": exc.message}), file=sys.stderr)
        return 1
    print(json.dumps(response, ensure_ascii=False, indent=2))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    snapshot_dir = args.snapshot or os.environ.get("RFC_SNAPSHOT_DIR")
    if not snapshot_dir:
        print("serve needs --snapshot or RFC_SNAPSHOT_DIR", file=sys.stderr)
        return 1
    snapshot = server_mod.Snapshot.load(snapshot_dir, allow_fetch=not args.no_fetch)
    app = server_mod.create_app(snapshot)
    host, _, port = args.listen.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relcheck", description="related fact check pipeline and service"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, urls=True):
        p.add_argument("--input", help="directory of HTML fixture files")
        if urls:
            p.add_argument("--urls", help="file with one URL per line to fetch")
            p.add_argument("--rate-limit", type=float, default=1.0, help="requests/sec per host")
        p.add_argument("--out", required=True, help="output corpus path (.jsonl)")

    p = sub.add_parser("ingest", help="extract fact checks from ClaimReview pages")
    add_io(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("articles", help="extract article records from pages")
    add_io(p)
    p.set_defaults(func=cmd_articles)

    p = sub.add_parser("index", help="build the shared vocabulary")
    p.add_argument("--factchecks", required=True)
    p.add_argument("--out-vocab", required=True)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("train-topics", help="train the topic model")
    p.add_argument("--factchecks", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--k", type=int, default=300)
    p.add_argument("--alpha", type=float, default=None, help="default 50/k")
    p.add_argument("--beta", type=float, default=0.01)
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train_topics)

    p = sub.add_parser("inspect-topic", help="top words/documents of a topic")
    p.add_argument("--model", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--topic", type=int, required=True)
    p.add_argument("--words", type=int, default=10)
    p.add_argument("--docs", type=int, default=5)
    p.add_argument("--factchecks")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_inspect_topic)

    p = sub.add_parser("set-thematic", help="record which topics are themes")
    p.add_argument("--model", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--ids", required=True, help="comma-separated topic ids (empty to clear)")
    p.add_argument("--out", help="defaults to rewriting --model")
    p.set_defaults(func=cmd_set_thematic)

    p = sub.add_parser("related-precompute", help="precompute related articles per fact check")
    p.add_argument("--factchecks", required=True)
    p.add_argument("--articles", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_related_precompute)

    p = sub.add_parser("tune", help="grid-search weights against labeled judgments")
    p.add_argument("--factchecks", required=True)
    p.add_argument("--articles", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--grid", help="JSON file mapping weight name -> candidate values")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output weights file")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("eval", help="ablation evaluation against labeled judgments")
    p.add_argument("--factchecks", required=True)
    p.add_argument("--articles", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="also write machine-readable report (.jsonl)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("query", help="one-shot retrieval against a snapshot")
    p.add_argument("--snapshot", help="snapshot directory (default: $RFC_SNAPSHOT_DIR)")
    p.add_argument("--url")
    p.add_argument("--title")
    p.add_argument("--body")
    p.add_argument("--max-results", type=int, default=5)
    p.add_argument("--no-fetch", action="store_true", help="reject url-only requests")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--snapshot", help="snapshot directory (default: $RFC_SNAPSHOT_DIR)")
    p.add_argument("--listen", default="127.0.0.1:8532", help="host:port")
    p.add_argument("--no-fetch", action="store_true", help="reject url-only requests")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (OSError, ValueError, corpus_mod.CorpusFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
