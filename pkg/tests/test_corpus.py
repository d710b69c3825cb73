"""Corpus tests: ClaimReview extraction, dedup, persistence, fetching."""

import json
import logging
import threading
import time
from datetime import date, datetime
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relcheck.corpus import (
    Article,
    CorpusFormatError,
    ExtractionDiagnostics,
    FactCheck,
    compute_stats,
    dedupe,
    extract_article,
    extract_claim_reviews,
    extract_page_text,
    fetch_pages,
    load_articles,
    load_corpus,
    load_factchecks,
    make_factcheck_id,
    save_corpus,
)

CLAIM_AU = "Australia is the first country to begin microchipping its citizens."

JSONLD_PAGE = f"""<!DOCTYPE html><html>
<head><title>Fact check: microchipping claim</title>
<script type="application/ld+json">
{{"@context": "https://schema.org", "@type": "ClaimReview",
 "url": "/factcheck/microchip", "datePublished": "2017-09-04",
 "claimReviewed": "{CLAIM_AU[:-1]}.",
 "reviewRating": {{"@type": "Rating", "alternateName": "False", "ratingValue": "1"}}}}
</script></head>
<body><nav>Home | About</nav><article><h1>The microchip story</h1>
<p>No national program exists.</p></article>
<script>var x = 1;</script></body></html>"""

GRAPH_PAGE = """<!DOCTYPE html><html><head>
<script type="application/ld+json">
{"@context": "https://schema.org",
 "@graph": [
   {"@type": "Organization", "name": "Checker"},
   {"@type": "ClaimReview", "claimReviewed": "The moon landing was staged.",
    "itemReviewed": {"@type": "Claim", "datePublished": "2016-02-10"},
    "reviewRating": {"ratingValue": 2, "alternateName": "Mostly False"}}
 ]}
</script></head><body>text</body></html>"""

MICRODATA_PAGE = """<!DOCTYPE html><html><head><title>MD check</title></head>
<body>
<div itemscope itemtype="http://schema.org/ClaimReview">
  <meta itemprop="url" content="https://checker.example/md-check">
  <meta itemprop="datePublished" content="2017-03-02">
  <p>Claim: <span itemprop="claimReviewed">Sharks swim in flooded highways.</span></p>
  <div itemprop="reviewRating" itemscope itemtype="http://schema.org/Rating">
    <span itemprop="alternateName">Pants on Fire</span>
    <meta itemprop="ratingValue" content="1">
  </div>
</div>
</body></html>"""

BOTH_PAGE = JSONLD_PAGE.replace(
    "</body></html>",
    """<div itemscope itemtype="http://schema.org/ClaimReview">
<span itemprop="claimReviewed">A microdata-only claim here.</span></div></body></html>""",
)


class TestExtractClaimReviews:
    def test_jsonld_page(self):
        out = extract_claim_reviews(JSONLD_PAGE, "https://checker.example/factcheck/microchip")
        assert len(out) == 1
        fc = out[0]
        assert fc.claim_reviewed == CLAIM_AU
        assert fc.rating_label == "False"
        assert fc.rating_value == 1
        assert fc.review_date == date(2017, 9, 4)
        assert fc.publisher == "checker.example"
        assert fc.url == "https://checker.example/factcheck/microchip"  # resolved relative url
        assert "No national program exists." in fc.body_text
        assert "var x = 1" not in fc.body_text

    def test_no_markup_gives_empty(self):
        assert extract_claim_reviews("<html><body><p>plain page</p></body></html>", "https://x.example/") == []

    def test_duplicate_blocks_both_extracted(self):
        block = """<script type="application/ld+json">
        {"@type": "ClaimReview", "claimReviewed": "Same claim twice."}</script>"""
        html = f"<html><head>{block}{block}</head><body></body></html>"
        out = extract_claim_reviews(html, "https://x.example/page")
        assert len(out) == 2  # extraction does not dedupe

    def test_graph_and_nested_date(self):
        out = extract_claim_reviews(GRAPH_PAGE, "https://checker.example/graph")
        assert len(out) == 1
        assert out[0].review_date == date(2016, 2, 10)
        assert out[0].rating_value == 2

    def test_microdata_page(self):
        out = extract_claim_reviews(MICRODATA_PAGE, "https://checker.example/md")
        assert len(out) == 1
        fc = out[0]
        assert fc.claim_reviewed == "Sharks swim in flooded highways."
        assert fc.rating_label == "Pants on Fire"
        assert fc.rating_value == 1
        assert fc.review_date == date(2017, 3, 2)
        assert fc.url == "https://checker.example/md-check"

    def test_jsonld_preferred_over_microdata(self):
        out = extract_claim_reviews(BOTH_PAGE, "https://checker.example/both")
        assert len(out) == 1
        assert out[0].claim_reviewed == CLAIM_AU

    def test_bad_jsonld_counted_not_fatal(self):
        html = """<html><head>
        <script type="application/ld+json">{not json at all</script>
        <script type="application/ld+json">
        {"@type": "ClaimReview", "claimReviewed": "Good claim."}</script>
        </head><body></body></html>"""
        diagnostics = ExtractionDiagnostics()
        out = extract_claim_reviews(html, "https://x.example/", diagnostics)
        assert [fc.claim_reviewed for fc in out] == ["Good claim."]
        assert diagnostics.jsonld_parse_errors == 1

    def test_missing_claim_skipped_and_counted(self):
        html = """<html><head><script type="application/ld+json">
        {"@type": "ClaimReview", "reviewRating": {"alternateName": "False"}}
        </script></head><body></body></html>"""
        diagnostics = ExtractionDiagnostics()
        assert extract_claim_reviews(html, "https://x.example/", diagnostics) == []
        assert diagnostics.skipped_missing_claim == 1

    def test_whitespace_claim_skipped(self):
        html = """<html><head><script type="application/ld+json">
        {"@type": "ClaimReview", "claimReviewed": "  \\n "}</script></head></html>"""
        assert extract_claim_reviews(html, "https://x.example/") == []

    def test_malformed_html_best_effort(self):
        html = "<html><body><div><p>text <b>bold" + JSONLD_PAGE
        out = extract_claim_reviews(html, "https://x.example/")
        assert len(out) == 1

    def test_non_integer_rating_value_dropped(self):
        html = """<html><head><script type="application/ld+json">
        {"@type": "ClaimReview", "claimReviewed": "c.",
         "reviewRating": {"ratingValue": "three", "alternateName": "Three"}}
        </script></head></html>"""
        fc = extract_claim_reviews(html, "https://x.example/")[0]
        assert fc.rating_value is None
        assert fc.rating_label == "Three"


class TestPageText:
    def test_strips_scripts_styles_nav(self):
        html = """<html><head><title>T</title><style>p{}</style></head><body>
        <nav>skip me</nav><p>keep me</p><script>skip()</script>
        <noscript>skip too</noscript><div>and me</div></body></html>"""
        text = extract_page_text(html)
        assert "keep me" in text and "and me" in text
        assert "skip" not in text
        assert "T" not in text.split("\n")  # head title is not visible text

    def test_block_boundaries(self):
        text = extract_page_text("<p>one</p><p>two</p><span>a</span><span>b</span>")
        assert text.splitlines()[0] == "one"
        assert text.splitlines()[1] == "two"

    def test_extract_article(self):
        html = """<html><head><title>Big headline</title></head>
        <body><main><h1>Big headline</h1><p>Body text here.</p></main></body></html>"""
        article = extract_article(html, "https://news.example/story?utm_source=feed")
        assert article.title == "Big headline"
        assert "Body text here." in article.body_text
        assert article.site == "news.example"

    def test_extract_article_empty_page_rejected(self):
        with pytest.raises(ValueError):
            extract_article("<html><body></body></html>", "https://news.example/x")


def fc(url, claim, **kwargs):
    return FactCheck(
        id=make_factcheck_id(url, claim),
        url=url,
        publisher="checker.example",
        title=kwargs.pop("title", "t"),
        claim_reviewed=claim,
        **kwargs,
    )


class TestDedupe:
    def test_exact_duplicate_collapsed(self):
        a = fc("https://x.example/1", "Claim one.")
        assert dedupe([a, fc("https://x.example/1", "Claim one.")]) == [a]

    def test_same_url_different_claim_kept(self):
        a = fc("https://x.example/1", "Claim one.")
        b = fc("https://x.example/1", "Claim two.")
        assert dedupe([a, b]) == [a, b]

    def test_unique_records_pass_through(self):
        records = [fc(f"https://x.example/{i}", f"Claim {i}.") for i in range(50)]
        assert dedupe(records) == records

    def test_tracking_params_and_case_ignored(self):
        a = fc("https://x.example/1?utm_source=tw&fbclid=zz", "Claim one.")
        b = fc("https://X.example/1", "  claim   ONE. ")
        assert dedupe([a, b]) == [a]

    def test_meaningful_query_params_kept(self):
        a = fc("https://x.example/check?id=1", "Claim.")
        b = fc("https://x.example/check?id=2", "Claim.")
        assert dedupe([a, b]) == [a, b]

    @given(st.lists(st.sampled_from(["u1", "u2", "u3"]), max_size=12))
    def test_idempotent(self, url_keys):
        records = [fc(f"https://x.example/{k}", "Same claim.") for k in url_keys]
        once = dedupe(records)
        assert dedupe(once) == once


class TestStats:
    def test_counts(self):
        records = [
            fc("https://a.example/1", "c1"),
            fc("https://a.example/2", "c2"),
            fc("https://b.example/1", "c3"),
        ]
        for record, publisher in zip(records, ["a.example", "a.example", "b.example"]):
            record.publisher = publisher
        stats = compute_stats(records, articles=[])
        assert stats.n_factchecks == 3
        assert stats.n_sites == 2
        assert stats.per_site_counts == {"a.example": 2, "b.example": 1}
        assert sum(stats.per_site_counts.values()) == stats.n_factchecks


class TestPersistence:
    def test_factcheck_roundtrip(self, tmp_path):
        records = [
            fc("https://x.example/1", "Claim one.", review_date=date(2017, 9, 4),
               rating_label="False", rating_value=1, body_text="body"),
            fc("https://x.example/2", "Claim two."),
            fc("https://x.example/3", "Claim three.", body_text="unicode éß"),
        ]
        save_corpus(records, tmp_path / "fc.jsonl")
        assert load_factchecks(tmp_path / "fc.jsonl") == records

    def test_article_roundtrip(self, tmp_path):
        records = [
            Article(id="a1", url="https://n.example/1", site="n.example",
                    title="T", body_text="B", fetched_at=datetime(2017, 9, 4, 12, 30)),
            Article(id="a2", url="https://n.example/2", site="n.example",
                    title="", body_text="only body"),
        ]
        save_corpus(records, tmp_path / "articles.jsonl")
        assert load_articles(tmp_path / "articles.jsonl") == records

    def test_load_corpus_sniffs_type(self, tmp_path):
        save_corpus([fc("https://x.example/1", "C.")], tmp_path / "fc.jsonl")
        save_corpus(
            [Article(id="a", url="u", site="s", title="t", body_text="b")],
            tmp_path / "articles.jsonl",
        )
        assert isinstance(load_corpus(tmp_path / "fc.jsonl")[0], FactCheck)
        assert isinstance(load_corpus(tmp_path / "articles.jsonl")[0], Article)

    def test_empty_file(self, tmp_path):
        (tmp_path / "empty.jsonl").write_text("")
        assert load_factchecks(tmp_path / "empty.jsonl") == []
        assert load_corpus(tmp_path / "empty.jsonl") == []

    def test_strict_mode_aborts_with_line_number(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        good = json.dumps(
            {"id": "i", "url": "u", "publisher": "p", "title": "t", "claim_reviewed": "c"}
        )
        path.write_text(good + "\n{broken\n")
        with pytest.raises(CorpusFormatError, match="bad.jsonl:2"):
            load_factchecks(path)

    def test_lenient_mode_skips_and_reports(self, tmp_path, caplog):
        path = tmp_path / "bad.jsonl"
        good = json.dumps(
            {"id": "i", "url": "u", "publisher": "p", "title": "t", "claim_reviewed": "c"}
        )
        path.write_text("{broken\n" + good + "\nnot json\n")
        with caplog.at_level(logging.WARNING):
            records = load_factchecks(path, strict=False)
        assert len(records) == 1
        assert "skipped 2 malformed record(s)" in caplog.text


class _Handler(BaseHTTPRequestHandler):
    def do_GET(self):
        if self.path == "/missing":
            self.send_response(404)
            self.end_headers()
            return
        self.send_response(200)
        self.send_header("Content-Type", "text/html; charset=utf-8")
        self.end_headers()
        self.wfile.write(f"<html><body>page {self.path}</body></html>".encode())

    def log_message(self, *args):
        pass


@pytest.fixture(scope="module")
def http_server():
    server = HTTPServer(("127.0.0.1", 0), _Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


class TestFetchPages:
    def test_failures_isolated(self, http_server):
        urls = [
            f"{http_server}/ok1",
            "http://127.0.0.1:1/unreachable",
            f"{http_server}/missing",
            f"{http_server}/ok2",
        ]
        results = fetch_pages(urls, rate_limit=100.0)
        by_url = {r.url: r for r in results}
        assert "page /ok1" in by_url[urls[0]].html
        assert by_url[urls[1]].error
        assert by_url[urls[2]].error == "HTTP 404"
        assert "page /ok2" in by_url[urls[3]].html

    def test_duplicate_fetched_once(self, http_server):
        url = f"{http_server}/dup"
        results = fetch_pages([url, url, url], rate_limit=100.0)
        assert len(results) == 1

    def test_rate_limit_spacing(self, http_server):
        urls = [f"{http_server}/r{i}" for i in range(3)]
        start = time.monotonic()
        fetch_pages(urls, rate_limit=1.0)
        assert time.monotonic() - start >= 2.0

    def test_rate_limit_validation(self):
        with pytest.raises(ValueError):
            fetch_pages(["http://x.example/"], rate_limit=0)
