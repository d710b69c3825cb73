"""Fact-check and article corpora: ClaimReview extraction, dedup, persistence.

Pages are parsed best-effort with the stdlib HTML parser; ClaimReview
markup is read from JSON-LD script blocks and, when no JSON-LD is present,
from microdata attributes. Corpora persist as one JSON object per line.
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
from dataclasses import dataclass, fields
from datetime import date, datetime
from html.parser import HTMLParser
from pathlib import Path
from urllib.parse import parse_qsl, urlencode, urljoin, urlparse, urlunparse

log = logging.getLogger(__name__)


@dataclass
class FactCheck:
    """One reviewed claim extracted from ClaimReview markup."""

    id: str
    url: str
    publisher: str
    title: str
    claim_reviewed: str
    review_date: date | None = None
    rating_label: str | None = None
    rating_value: int | None = None
    body_text: str | None = None


@dataclass
class Article:
    """A news/article page to be checked against the fact-check corpus."""

    id: str
    url: str
    site: str
    title: str
    body_text: str
    fetched_at: datetime | None = None


@dataclass
class CorpusStats:
    n_factchecks: int
    n_sites: int
    n_articles: int
    per_site_counts: dict[str, int]


@dataclass
class ExtractionDiagnostics:
    jsonld_parse_errors: int = 0
    skipped_missing_claim: int = 0


class CorpusFormatError(Exception):
    """A corpus file line failed to parse (strict mode)."""


_TRACKING_PARAMS = {"fbclid", "gclid", "mc_cid", "mc_eid", "igshid", "ref_src", "ocid"}

_BLOCK_TAGS = {
    "address", "article", "aside", "blockquote", "br", "dd", "div", "dl",
    "dt", "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2",
    "h3", "h4", "h5", "h6", "header", "hr", "li", "main", "ol", "p", "pre",
    "section", "table", "td", "th", "tr", "ul",
}
_SKIP_TAGS = {"script", "style", "noscript", "nav", "template"}
_VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link",
    "meta", "param", "source", "track", "wbr",
}


def strip_tracking_params(url: str) -> str:
    """Drop utm_* and known click-tracking query params; drop the fragment."""
    parts = urlparse(url)
    kept = [
        (k, v)
        for k, v in parse_qsl(parts.query, keep_blank_values=True)
        if not k.lower().startswith("utm_") and k.lower() not in _TRACKING_PARAMS
    ]
    return urlunparse(parts._replace(query=urlencode(kept), fragment=""))


def _dedupe_url_key(url: str) -> str:
    return strip_tracking_params(url).lower()


def _normalize_claim(claim: str) -> str:
    return " ".join(claim.split()).casefold()


def make_factcheck_id(url: str, claim_reviewed: str) -> str:
    h = hashlib.sha1()
    h.update(_dedupe_url_key(url).encode())
    h.update(b"\x00")
    h.update(_normalize_claim(claim_reviewed).encode())
    return h.hexdigest()[:16]


def make_article_id(url: str) -> str:
    return hashlib.sha1(_dedupe_url_key(url).encode()).hexdigest()[:16]


def hostname(url: str) -> str:
    return (urlparse(url).hostname or "").lower()


class _PageParser(HTMLParser):
    """Single-pass collector: <title>, JSON-LD blocks, visible text lines,
    microdata items. Tolerates malformed markup (never raises)."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.title = ""
        self.jsonld_blocks: list[str] = []
        self.text_lines: list[str] = []
        self.microdata_items: list[dict] = []
        self._depth = 0
        self._skip_until: int | None = None
        self._in_jsonld = False
        self._in_title = False
        self._jsonld_chunks: list[str] = []
        self._title_chunks: list[str] = []
        self._line: list[str] = []
        self._item_stack: list[tuple[int, dict]] = []
        self._prop_stack: list[tuple[int, dict, str, list[str]]] = []

    # -- text assembly ----------------------------------------------------

    def _flush_line(self) -> None:
        text = " ".join("".join(self._line).split())
        if text:
            self.text_lines.append(text)
        self._line = []

    # -- microdata helpers --------------------------------------------------

    @staticmethod
    def _attr_value(tag: str, attrs: dict) -> str | None:
        if attrs.get("content") is not None:
            return attrs["content"]
        if tag in ("a", "link", "area") and attrs.get("href") is not None:
            return attrs["href"]
        if tag in ("img", "audio", "video", "embed", "iframe", "source") and attrs.get("src") is not None:
            return attrs["src"]
        if tag == "time" and attrs.get("datetime") is not None:
            return attrs["datetime"]
        return None

    def _assign_prop(self, item: dict, name: str, value) -> None:
        for prop in name.split():
            if prop and prop not in item:
                item[prop] = value

    def _open_props(self, tag: str, attrs: dict, closes: bool) -> None:
        has_scope = "itemscope" in attrs
        prop_name = attrs.get("itemprop")
        if has_scope:
            item: dict = {"@type": (attrs.get("itemtype") or "").strip()}
            if prop_name and self._item_stack:
                self._assign_prop(self._item_stack[-1][1], prop_name, item)
            else:
                self.microdata_items.append(item)
            if not closes:
                self._item_stack.append((self._depth, item))
        elif prop_name and self._item_stack:
            value = self._attr_value(tag, attrs)
            if value is not None or closes:
                self._assign_prop(self._item_stack[-1][1], prop_name, value or "")
            else:
                self._prop_stack.append(
                    (self._depth, self._item_stack[-1][1], prop_name, [])
                )

    def _close_at_depth(self) -> None:
        while self._prop_stack and self._prop_stack[-1][0] >= self._depth:
            _, item, name, chunks = self._prop_stack.pop()
            self._assign_prop(item, name, " ".join("".join(chunks).split()))
        while self._item_stack and self._item_stack[-1][0] >= self._depth:
            self._item_stack.pop()

    # -- parser callbacks ---------------------------------------------------

    def handle_starttag(self, tag: str, attrs_list) -> None:
        attrs = dict(attrs_list)
        if tag in _VOID_TAGS:
            if tag == "br" or tag in _BLOCK_TAGS:
                self._flush_line()
            if self._skip_until is None:
                self._open_props(tag, attrs, closes=True)
            return
        self._depth += 1
        if tag in _SKIP_TAGS and self._skip_until is None:
            self._skip_until = self._depth
            if tag == "script":
                script_type = (attrs.get("type") or "").split(";")[0].strip().lower()
                if script_type == "application/ld+json":
                    self._in_jsonld = True
                    self._jsonld_chunks = []
            return
        if self._skip_until is not None:
            return
        if tag == "title":
            self._in_title = True
            self._title_chunks = []
        if tag in _BLOCK_TAGS:
            self._flush_line()
        self._open_props(tag, attrs, closes=False)

    def handle_startendtag(self, tag: str, attrs_list) -> None:
        attrs = dict(attrs_list)
        if tag in _BLOCK_TAGS or tag == "br":
            self._flush_line()
        if self._skip_until is None:
            self._open_props(tag, attrs, closes=True)

    def handle_endtag(self, tag: str) -> None:
        if tag in _VOID_TAGS:
            return
        if self._skip_until is not None:
            if self._depth == self._skip_until and tag in _SKIP_TAGS:
                if self._in_jsonld and tag == "script":
                    self.jsonld_blocks.append("".join(self._jsonld_chunks))
                    self._in_jsonld = False
                self._skip_until = None
                self._depth = max(self._depth - 1, 0)
            else:
                self._depth = max(self._depth - 1, 0)
            return
        if tag == "title" and self._in_title:
            self.title = " ".join("".join(self._title_chunks).split())
            self._in_title = False
        if tag in _BLOCK_TAGS:
            self._flush_line()
        self._close_at_depth()
        self._depth = max(self._depth - 1, 0)

    def handle_data(self, data: str) -> None:
        if self._in_jsonld:
            self._jsonld_chunks.append(data)
            return
        if self._skip_until is not None:
            return
        if self._in_title:
            # head metadata, not visible page text
            self._title_chunks.append(data)
            return
        self._line.append(data)
        for _, _, _, chunks in self._prop_stack:
            chunks.append(data)

    def close(self) -> None:
        super().close()
        self._flush_line()


def parse_page(html: str) -> _PageParser:
    parser = _PageParser()
    try:
        parser.feed(html)
        parser.close()
    except Exception:  # malformed markup must never abort extraction
        log.exception("HTML parse aborted early; keeping partial results")
    return parser


def extract_page_text(html: str) -> str:
    """Visible text with block boundaries as newlines (scripts/styles/nav stripped)."""
    return "\n".join(parse_page(html).text_lines)


def _is_claimreview_type(value) -> bool:
    if isinstance(value, list):
        return any(_is_claimreview_type(v) for v in value)
    return isinstance(value, str) and value.rstrip("/").rsplit("/", 1)[-1].lower() == "claimreview"


def _walk_claimreviews(node, out: list[dict]) -> None:
    if isinstance(node, dict):
        if _is_claimreview_type(node.get("@type")):
            out.append(node)
        for value in node.values():
            _walk_claimreviews(value, out)
    elif isinstance(node, list):
        for value in node:
            _walk_claimreviews(value, out)


def _parse_review_date(value) -> date | None:
    if not isinstance(value, str) or len(value) < 10:
        return None
    try:
        return date.fromisoformat(value[:10])
    except ValueError:
        return None


def _parse_rating_value(value) -> int | None:
    try:
        return int(str(value).strip())
    except (TypeError, ValueError):
        return None


def _build_factcheck(
    obj: dict, source_url: str, page_title: str, body_text: str
) -> FactCheck | None:
    claim = obj.get("claimReviewed")
    if not isinstance(claim, str):
        return None
    claim = " ".join(claim.split())
    if not claim:
        return None

    url = obj.get("url")
    url = urljoin(source_url, url) if isinstance(url, str) and url else source_url

    rating = obj.get("reviewRating")
    rating_label = None
    rating_value = None
    if isinstance(rating, dict):
        alt = rating.get("alternateName")
        if isinstance(alt, str) and alt.strip():
            rating_label = alt.strip()
        if rating.get("ratingValue") is not None:
            rating_value = _parse_rating_value(rating.get("ratingValue"))

    review_date = _parse_review_date(obj.get("datePublished"))
    if review_date is None:
        item_reviewed = obj.get("itemReviewed")
        if isinstance(item_reviewed, dict):
            review_date = _parse_review_date(item_reviewed.get("datePublished"))

    title = obj.get("name") or obj.get("headline")
    if not isinstance(title, str) or not title.strip():
        title = page_title
    return FactCheck(
        id=make_factcheck_id(url, claim),
        url=url,
        publisher=hostname(url),
        title=" ".join(title.split()),
        claim_reviewed=claim,
        review_date=review_date,
        rating_label=rating_label,
        rating_value=rating_value,
        body_text=body_text or None,
    )


def extract_claim_reviews(
    html: str,
    source_url: str,
    diagnostics: ExtractionDiagnostics | None = None,
) -> list[FactCheck]:
    """All ClaimReview objects on a page, one FactCheck each.

    JSON-LD is preferred; microdata is consulted only when no JSON-LD
    ClaimReview parses. No per-page dedup (that is a corpus-level step).
    """
    diagnostics = diagnostics if diagnostics is not None else ExtractionDiagnostics()
    page = parse_page(html)
    body_text = "\n".join(page.text_lines)

    objects: list[dict] = []
    for block in page.jsonld_blocks:
        try:
            payload = json.loads(block)
        except json.JSONDecodeError:
            diagnostics.jsonld_parse_errors += 1
            continue
        _walk_claimreviews(payload, objects)

    if not objects:
        for item in page.microdata_items:
            _walk_claimreviews(item, objects)

    out: list[FactCheck] = []
    for obj in objects:
        fc = _build_factcheck(obj, source_url, page.title, body_text)
        if fc is None:
            diagnostics.skipped_missing_claim += 1
            continue
        out.append(fc)
    return out


def extract_article(html: str, url: str, fetched_at: datetime | None = None) -> Article:
    """Build an Article from a fetched page; raises if no usable text."""
    page = parse_page(html)
    body = "\n".join(page.text_lines)
    if not page.title and not body:
        raise ValueError(f"page at {url} has no extractable title or text")
    return Article(
        id=make_article_id(url),
        url=url,
        site=hostname(url),
        title=page.title,
        body_text=body,
        fetched_at=fetched_at,
    )


def dedupe(records: list[FactCheck]) -> list[FactCheck]:
    """Collapse records sharing (normalized url, normalized claim), keeping
    the first occurrence. Idempotent."""
    seen: set[tuple[str, str]] = set()
    out: list[FactCheck] = []
    for fc in records:
        key = (_dedupe_url_key(fc.url), _normalize_claim(fc.claim_reviewed))
        if key not in seen:
            seen.add(key)
            out.append(fc)
    return out


def compute_stats(factchecks: list[FactCheck], articles: list[Article] | None = None) -> CorpusStats:
    per_site: dict[str, int] = {}
    for fc in factchecks:
        per_site[fc.publisher] = per_site.get(fc.publisher, 0) + 1
    return CorpusStats(
        n_factchecks=len(factchecks),
        n_sites=len(per_site),
        n_articles=len(articles or []),
        per_site_counts=per_site,
    )


# -- persistence (one JSON object per line, UTF-8) --------------------------


def _record_to_json(record: FactCheck | Article) -> str:
    payload = {}
    for f in fields(record):
        value = getattr(record, f.name)
        if isinstance(value, (date, datetime)):
            value = value.isoformat()
        payload[f.name] = value
    return json.dumps(payload, ensure_ascii=False)


def save_corpus(records: list[FactCheck] | list[Article], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(_record_to_json(record) + "\n")


def _load_records(path: str | Path, builder, strict: bool):
    records = []
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(builder(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                if strict:
                    raise CorpusFormatError(f"{path}:{lineno}: {exc}") from exc
                skipped += 1
                log.warning("skipping malformed record %s:%d: %s", path, lineno, exc)
    if skipped:
        log.warning("skipped %d malformed record(s) in %s", skipped, path)
    return records


def _factcheck_from_json(payload: dict) -> FactCheck:
    return FactCheck(
        id=payload["id"],
        url=payload["url"],
        publisher=payload["publisher"],
        title=payload["title"],
        claim_reviewed=payload["claim_reviewed"],
        review_date=(
            date.fromisoformat(payload["review_date"])
            if payload.get("review_date")
            else None
        ),
        rating_label=payload.get("rating_label"),
        rating_value=payload.get("rating_value"),
        body_text=payload.get("body_text"),
    )


def _article_from_json(payload: dict) -> Article:
    return Article(
        id=payload["id"],
        url=payload["url"],
        site=payload["site"],
        title=payload["title"],
        body_text=payload["body_text"],
        fetched_at=(
            datetime.fromisoformat(payload["fetched_at"])
            if payload.get("fetched_at")
            else None
        ),
    )


def load_factchecks(path: str | Path, strict: bool = True) -> list[FactCheck]:
    return _load_records(path, _factcheck_from_json, strict)


def load_articles(path: str | Path, strict: bool = True) -> list[Article]:
    return _load_records(path, _article_from_json, strict)


def load_corpus(path: str | Path, strict: bool = True):
    """Sniff the record type from the first line's keys, then load."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                first = json.loads(line)
                break
        else:
            return []
    return (
        load_factchecks(path, strict=strict)
        if "claim_reviewed" in first
        else load_articles(path, strict=strict)
    )


# -- fetching -----------------------------------------------------------------


@dataclass
class FetchResult:
    url: str
    html: str | None = None
    status: int | None = None
    error: str | None = None


def fetch_pages(
    urls: list[str],
    rate_limit: float = 1.0,
    timeout: float = 10.0,
    user_agent: str = "relcheck/0.1",
) -> list[FetchResult]:
    """Fetch each URL at most once; failures become per-URL error entries.

    Requests to the same host are spaced at least 1/rate_limit seconds
    apart (start to start). Sequential, so per-host ordering is trivial.
    """
    import requests

    if rate_limit <= 0:
        raise ValueError("rate_limit must be positive")
    min_interval = 1.0 / rate_limit
    last_start: dict[str, float] = {}
    results: list[FetchResult] = []
    seen: set[str] = set()
    for url in urls:
        if url in seen:
            continue
        seen.add(url)
        host = hostname(url)
        elapsed = time.monotonic() - last_start.get(host, float("-inf"))
        if elapsed < min_interval:
            time.sleep(min_interval - elapsed)
        last_start[host] = time.monotonic()
        try:
            resp = requests.get(url, timeout=timeout, headers={"User-Agent": user_agent})
            if resp.ok:
                results.append(FetchResult(url=url, html=resp.text, status=resp.status_code))
            else:
                results.append(
                    FetchResult(url=url, status=resp.status_code, error=f"HTTP {resp.status_code}")
                )
        except requests.RequestException as exc:
            results.append(FetchResult(url=url, error=str(exc)))
    return results
