#!/usr/bin/env python3
"""Regenerate the labeled fixture corpus under data/fixtures/.

Writes fact-check pages (ClaimReview as JSON-LD, two as microdata),
article pages from two "dubious news" fixture sites, and the relevance
judgments keyed by the library's record ids. Rerunning is idempotent.

Usage: python scripts/gen_fixtures.py
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from relcheck.corpus import make_article_id, make_factcheck_id  # noqa: E402

PAGES_FC = ROOT / "data" / "fixtures" / "pages" / "factchecks"
PAGES_ART = ROOT / "data" / "fixtures" / "pages" / "articles"

# theme -> recurring vocabulary woven through every page of that theme
THEME_WORDS = {
    "vaccine": "vaccine vaccines vaccination immunization cdc autism infants flu doses pediatric",
    "climate": "climate carbon emissions warming atmosphere fossil epa temperature greenhouse",
    "nuclear": "nuclear reactor radiation fukushima radioactive meltdown pacific contamination",
    "microchip": "microchip microchipping implant tracking chip surveillance citizens banknotes",
    "election": "election ballots voters voting machines fraud precinct tallies rigged",
    "diet": "juice cure arthritis spice memory remedy detox miracle wellness turmeric",
}

FACTCHECKS = [
    # (slug, site, theme, claim, rating, encoding)
    ("vax-raid", "factcheck-a.example", "vaccine",
     "A federal agency raid seized hidden vaccine injury data.", "False", "jsonld"),
    ("vax-autism", "factcheck-a.example", "vaccine",
     "Routine flu vaccines cause autism in infants.", "Pants on Fire", "jsonld"),
    ("vax-vial", "truthmeter.example", "vaccine",
     "A broken vaccine vial forces evacuation of an entire school building.", "Mostly False", "microdata"),
    ("cli-co2", "factcheck-b.example", "climate",
     "Carbon dioxide emissions play no role in global warming.", "False", "jsonld"),
    ("cli-jail", "factcheck-b.example", "climate",
     "Lawmakers made denying climate change a jailable crime.", "False", "jsonld"),
    ("nuc-ocean", "factcheck-a.example", "nuclear",
     "A damaged nuclear reactor at Fukushima Daiichi is about to fall into the ocean.", "False", "jsonld"),
    ("nuc-fish", "truthmeter.example", "nuclear",
     "Radioactive fish from the Pacific are unsafe to eat anywhere.", "Mostly False", "microdata"),
    ("chip-australia", "factcheck-b.example", "microchip",
     "Australia is the first country to begin microchipping its citizens.", "False", "jsonld"),
    ("chip-banknotes", "factcheck-a.example", "microchip",
     "New banknotes contain tracking microchips that record purchases.", "False", "jsonld"),
    ("ele-dead", "truthmeter.example", "election",
     "Millions of ballots from dead voters swung the national election.", "Pants on Fire", "jsonld"),
    ("ele-machines", "factcheck-b.example", "election",
     "Voting machines were programmed to switch votes between parties.", "False", "jsonld"),
    ("diet-celery", "factcheck-a.example", "diet",
     "Drinking celery juice daily cures chronic arthritis.", "False", "jsonld"),
    ("diet-spice", "truthmeter.example", "diet",
     "A common kitchen spice reverses memory loss in one week.", "Unproven", "jsonld"),
]

ARTICLES = [
    # (slug, site, theme, title, body_restate_slug, body_kind, labels)
    # body_kind: "full" carries theme+claim text, "thin" is filler only
    # labels: list of (fc_slug, "on_claim" | "on_theme" | "irrelevant")
    ("story-autism", "dailyblast.example", "vaccine",
     "Doctors admit routine flu vaccines cause autism in infants", "vax-autism", "full",
     [("vax-autism", "on_claim"), ("vax-raid", "on_theme"), ("vax-vial", "on_theme")]),
    ("story-co2", "dailyblast.example", "climate",
     "Study shows carbon dioxide emissions play no role in global warming", "cli-co2", "full",
     [("cli-co2", "on_claim"), ("cli-jail", "on_theme")]),
    ("story-reactor", "newsfeed.example", "nuclear",
     "Damaged nuclear reactor at Fukushima Daiichi about to fall into the ocean", "nuc-ocean", "full",
     [("nuc-ocean", "on_claim"), ("nuc-fish", "on_theme")]),
    ("story-chip", "newsfeed.example", "microchip",
     "Australia becomes first country to begin microchipping its citizens", "chip-australia", "full",
     [("chip-australia", "on_claim"), ("chip-banknotes", "on_theme")]),
    ("story-machines", "dailyblast.example", "election",
     "Whistleblower says voting machines were programmed to switch votes", "ele-machines", "full",
     [("ele-machines", "on_claim"), ("ele-dead", "on_theme")]),
    ("story-vaxtheme", "newsfeed.example", "vaccine",
     "What the pediatric establishment refuses to say regarding immunization schedules", None, "full",
     [("vax-raid", "on_theme"), ("vax-autism", "on_theme"), ("vax-vial", "on_theme")]),
    ("story-clitheme", "dailyblast.example", "climate",
     "Greenhouse alarm narrative crumbles under scrutiny say independent researchers", None, "full",
     [("cli-co2", "on_theme"), ("cli-jail", "on_theme")]),
    ("story-celery", "newsfeed.example", "diet",
     "Drinking celery juice daily cures chronic arthritis say wellness coaches", "diet-celery", "full",
     [("diet-celery", "on_claim"), ("diet-spice", "on_theme")]),
    ("story-raid", "dailyblast.example", "vaccine",
     "You will not believe what investigators just uncovered", "vax-raid", "full",
     [("vax-raid", "on_claim"), ("vax-autism", "on_theme"), ("vax-vial", "on_theme")]),
    ("story-sports", "newsfeed.example", None,
     "Hometown squad clinches playoff berth after overtime thriller", None, "sports",
     [("vax-autism", "irrelevant"), ("cli-co2", "irrelevant"), ("nuc-ocean", "irrelevant")]),
    ("story-fish", "newsfeed.example", "nuclear",
     "Radioactive fish from the Pacific declared unsafe to eat anywhere", "nuc-fish", "full",
     [("nuc-fish", "on_claim"), ("nuc-ocean", "on_theme")]),
    ("story-banknotes", "dailyblast.example", "microchip",
     "New banknotes contain tracking microchips that record your purchases", "chip-banknotes", "full",
     [("chip-banknotes", "on_claim"), ("chip-australia", "on_theme")]),
    ("story-jail", "dailyblast.example", None,
     "Lawmakers just made denying climate change a jailable crime", None, "thin",
     [("cli-jail", "on_claim"), ("cli-co2", "on_theme")]),
    ("story-dead", "newsfeed.example", None,
     "Millions of ballots from dead voters swung the national election", None, "thin",
     [("ele-dead", "on_claim"), ("ele-machines", "on_theme")]),
]

FC_FILLER = [
    "Readers asked us to look into a story spreading across social feeds this week.",
    "The original post offers no sourcing beyond a screenshot and an unnamed insider.",
    "We contacted the agencies involved and reviewed the public records ourselves.",
    "Archived copies show the story mutated as it hopped between websites.",
    "Officials we reached described the viral version as a distortion of routine events.",
    "Our reporters traced the earliest version to a satire account.",
    "Public documents contradict the central assertion of the viral post.",
    "Experts in the field told us the claim misreads the underlying report.",
]

ART_FILLER = [
    "Share this before it gets taken down.",
    "The mainstream press refuses to cover this developing story.",
    "Sources close to the matter spoke on condition of anonymity.",
    "This report has been updated as new details emerge.",
    "Readers deserve the truth no matter how uncomfortable.",
    "More revelations are expected in the coming days.",
]

FC_CLAIMS = {slug: claim for slug, _, _, claim, _, _ in FACTCHECKS}


def fc_url(slug: str, site: str) -> str:
    return f"https://{site}/factcheck/{slug}"

def art_url(slug: str, site: str) -> str:
    return f"https://{site}/{slug}.html"


def fc_body(theme: str, claim: str, i: int) -> str:
    themed = THEME_WORDS[theme]
    filler = " ".join(FC_FILLER[i % 4 : i % 4 + 3])
    return (
        f"<p>The claim: {claim}</p>"
        f"<p>{filler}</p>"
        f"<p>Stories in this genre lean on familiar language: {themed}.</p>"
        f"<p>{FC_FILLER[(i + 3) % len(FC_FILLER)]} Our rating appears above.</p>"
    )


def art_body(theme: str | None, restate: str | None, kind: str, i: int) -> str:
    paras = []
    if kind == "sports":
        paras.append(
            "<p>The crowd roared as the final buzzer sounded and the banners came down. "
            "Coaches praised the defense, the rookies, and the roaring home fans.</p>"
        )
    elif kind == "thin":
        # no overlap with the fact-check corpus vocabulary: the headline is
        # this article's only retrievable signal
        paras.append(
            "<p>Crews gathered outside while phones kept ringing. Cameras waited "
            "in the cold. Editors promised updates once somebody answers.</p>"
        )
        return "".join(paras)
    else:
        if restate:
            paras.append(f"<p>{FC_CLAIMS[restate]} That is what insiders now say.</p>")
        if theme:
            themed = THEME_WORDS[theme]
            paras.append(f"<p>Followers of this story know the pattern: {themed}.</p>")
    paras.append(f"<p>{ART_FILLER[i % len(ART_FILLER)]} {ART_FILLER[(i + 2) % len(ART_FILLER)]}</p>")
    return "".join(paras)


def jsonld_page(url: str, title: str, claim: str, rating: str, body: str, date: str) -> str:
    import json

    markup = {
        "@context": "https://schema.org",
        "@type": "ClaimReview",
        "url": url,
        "name": title,
        "datePublished": date,
        "claimReviewed": claim,
        "reviewRating": {"@type": "Rating", "alternateName": rating, "ratingValue": "1"},
    }
    return f"""<!-- url: {url} -->
<!DOCTYPE html>
<html><head>
<title>{title}</title>
<script type="application/ld+json">{json.dumps(markup, indent=1)}</script>
<style>p {{ margin: 1em }}</style>
</head>
<body>
<nav><a href="/">Home</a> <a href="/about">About</a></nav>
<article><h1>{title}</h1>{body}</article>
<script>console.log("analytics");</script>
<footer>Contact us</footer>
</body></html>
"""


def microdata_page(url: str, title: str, claim: str, rating: str, body: str, date: str) -> str:
    return f"""<!-- url: {url} -->
<!DOCTYPE html>
<html><head><title>{title}</title></head>
<body>
<nav><a href="/">Home</a></nav>
<article itemscope itemtype="https://schema.org/ClaimReview">
 <h1 itemprop="name">{title}</h1>
 <meta itemprop="url" content="{url}">
 <meta itemprop="datePublished" content="{date}">
 <p>Claim under review: <span itemprop="claimReviewed">{claim}</span></p>
 <div itemprop="reviewRating" itemscope itemtype="https://schema.org/Rating">
   Rating: <span itemprop="alternateName">{rating}</span>
   <meta itemprop="ratingValue" content="2">
 </div>
 {body}
</article>
</body></html>
"""


def article_page(url: str, title: str, body: str, headline: bool = True) -> str:
    h1 = f"<h1>{title}</h1>" if headline else ""
    return f"""<!-- url: {url} -->
<!DOCTYPE html>
<html><head><title>{title}</title></head>
<body>
<nav><a href="/">Front Page</a> <a href="/trending">Trending</a></nav>
<main>{h1}{body}</main>
<script>trackPageview();</script>
</body></html>
"""


def main() -> None:
    for pages_dir in (PAGES_FC, PAGES_ART):
        pages_dir.mkdir(parents=True, exist_ok=True)
        for old in pages_dir.glob("*.html"):
            old.unlink()

    for i, (slug, site, theme, claim, rating, encoding) in enumerate(FACTCHECKS):
        url = fc_url(slug, site)
        title = f"Fact check: {claim.rstrip('.')}"
        date = f"2017-{(i % 12) + 1:02d}-{(i % 27) + 1:02d}"
        body = fc_body(theme, claim, i)
        page = (jsonld_page if encoding == "jsonld" else microdata_page)(
            url, title, claim, rating, body, date
        )
        (PAGES_FC / f"{slug}.html").write_text(page)

    labels_rows = []
    for i, (slug, site, theme, title, restate, kind, labels) in enumerate(ARTICLES):
        url = art_url(slug, site)
        page = article_page(url, title, art_body(theme, restate, kind, i), headline=kind != "thin")
        (PAGES_ART / f"{slug}.html").write_text(page)
        article_id = make_article_id(url)
        for fc_slug, label in labels:
            fc_site = next(s for sl, s, *_ in FACTCHECKS if sl == fc_slug)
            fc_id = make_factcheck_id(fc_url(fc_slug, fc_site), FC_CLAIMS[fc_slug])
            labels_rows.append([article_id, fc_id, label])

    with open(ROOT / "data" / "fixtures" / "labels.csv", "w", newline="") as fh:
        csv.writer(fh).writerows(labels_rows)

    print(f"wrote {len(FACTCHECKS)} fact-check pages, {len(ARTICLES)} article pages, "
          f"{len(labels_rows)} judgments")


if __name__ == "__main__":
    main()
