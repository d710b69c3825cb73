"""Synthetic end-to-end experiment corpus: 10 planted themes, 60 fact
checks, 200 articles with known on-claim/on-theme ground truth.

Channel weaknesses are planted so the feature ablation has teeth: ~30% of
claim articles get clickbait titles (out-of-vocabulary bait), a different
~30% get thin bodies (out-of-vocabulary filler), and every publisher wires
style terms into fact-check bodies so some topics track style rather than
themes. Everything is driven by one seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from relcheck.corpus import Article, FactCheck, make_article_id, make_factcheck_id
from relcheck.ranker import FactCheckCollection
from relcheck.textproc import Vocabulary, build_vocabulary, to_bow, tokenize
from relcheck.topics import TopicModel, set_thematic, top_words, train_lda
from relcheck.tuning import LabeledJudgment, RelevanceLabel

N_THEMES = 10
FCS_PER_THEME = 6
N_ARTICLES = 200

THEME_TERMS = {t: [f"th{t}w{j}" for j in range(12)] for t in range(N_THEMES)}
CLAIM_TERMS = {
    (t, f): [f"c{t}f{f}x{j}" for j in range(3)]
    for t in range(N_THEMES)
    for f in range(FCS_PER_THEME)
}
STYLE_TERMS = {0: [f"sa{j}" for j in range(6)], 1: [f"sb{j}" for j in range(6)]}
BAIT_TERMS = [f"bait{j}" for j in range(10)]      # never in fact-check text
FILLER_TERMS = [f"pad{j}" for j in range(10)]     # never in fact-check text


@dataclass
class SynthWorld:
    factchecks: list[FactCheck]
    articles: list[Article]
    labels: list[LabeledJudgment]
    vocab: Vocabulary
    model: TopicModel
    collection: FactCheckCollection
    articles_with_on_claim: set[str]


def _claim_text(theme: int, f: int) -> str:
    terms = THEME_TERMS[theme][:4] + CLAIM_TERMS[(theme, f)]
    return " ".join(terms)


def build_factchecks(rng: np.random.RandomState) -> list[FactCheck]:
    factchecks = []
    for theme in range(N_THEMES):
        for f in range(FCS_PER_THEME):
            publisher = f % 2
            claim = _claim_text(theme, f)
            body_terms = (
                CLAIM_TERMS[(theme, f)] * 2
                + [THEME_TERMS[theme][rng.randint(12)] for _ in range(8)]
                + [STYLE_TERMS[publisher][rng.randint(6)] for _ in range(6)]
            )
            url = f"https://checker{publisher}.example/t{theme}f{f}"
            factchecks.append(
                FactCheck(
                    id=make_factcheck_id(url, claim),
                    url=url,
                    publisher=f"checker{publisher}.example",
                    title=f"checking {claim}",
                    claim_reviewed=claim,
                    body_text=" ".join(body_terms),
                )
            )
    return factchecks


def build_articles(
    rng: np.random.RandomState, factchecks: list[FactCheck]
) -> tuple[list[Article], list[LabeledJudgment], set[str]]:
    by_theme: dict[int, list[FactCheck]] = {
        t: factchecks[t * FCS_PER_THEME : (t + 1) * FCS_PER_THEME] for t in range(N_THEMES)
    }
    articles: list[Article] = []
    labels: list[LabeledJudgment] = []
    with_on_claim: set[str] = set()

    for i in range(N_ARTICLES):
        theme = i % N_THEMES
        url = f"https://fakenews.example/a{i}"
        article_id = make_article_id(url)
        is_claim_article = (i // N_THEMES) % 10 < 7  # 70%

        if is_claim_article:
            f = rng.randint(FCS_PER_THEME)
            fc = by_theme[theme][f]
            handicap = rng.randint(10)
            clickbait = handicap < 3            # 30%: title carries nothing
            thin_body = 3 <= handicap < 6       # 30%: body carries nothing

            if clickbait:
                title = " ".join(BAIT_TERMS[rng.randint(10)] for _ in range(5))
            else:
                title = fc.claim_reviewed + f" say insiders a{i}"
            if thin_body:
                body = " ".join(FILLER_TERMS[rng.randint(10)] for _ in range(15))
            else:
                body_terms = (
                    CLAIM_TERMS[(theme, f)] * 2
                    + [THEME_TERMS[theme][rng.randint(12)] for _ in range(10)]
                    + [FILLER_TERMS[rng.randint(10)] for _ in range(4)]
                )
                body = " ".join(body_terms)

            labels.append(LabeledJudgment(article_id, fc.id, RelevanceLabel.ON_CLAIM))
            with_on_claim.add(article_id)
            for other in by_theme[theme]:
                if other.id != fc.id:
                    labels.append(
                        LabeledJudgment(article_id, other.id, RelevanceLabel.ON_THEME)
                    )
        else:
            title = " ".join(THEME_TERMS[theme][rng.randint(12)] for _ in range(4))
            body = " ".join(
                [THEME_TERMS[theme][rng.randint(12)] for _ in range(14)]
                + [FILLER_TERMS[rng.randint(10)] for _ in range(4)]
            )
            for fc in by_theme[theme]:
                labels.append(LabeledJudgment(article_id, fc.id, RelevanceLabel.ON_THEME))

        articles.append(
            Article(
                id=article_id,
                url=url,
                site="fakenews.example",
                title=title,
                body_text=body,
            )
        )
    return articles, labels, with_on_claim


def identify_thematic(model: TopicModel) -> frozenset[int]:
    """Stand-in for the manual labeling pass: a topic is thematic when its
    top words are dominated by planted theme vocabulary."""
    thematic = set()
    for topic_id in range(model.k):
        top = [term for term, _ in top_words(model, topic_id, 5)]
        if sum(term.startswith("th") for term in top) >= 3:
            thematic.add(topic_id)
    return frozenset(thematic)


def build_synth_world(seed: int = 2024) -> SynthWorld:
    rng = np.random.RandomState(seed)
    factchecks = build_factchecks(rng)
    articles, labels, with_on_claim = build_articles(rng, factchecks)

    docs = [tokenize(f"{fc.claim_reviewed} {fc.body_text}") for fc in factchecks]
    vocab = build_vocabulary(docs)
    model = train_lda(
        [to_bow(doc, vocab) for doc in docs],
        vocab,
        k=12,
        alpha=0.5,
        iterations=300,
        seed=seed,
    )
    model = set_thematic(model, identify_thematic(model))
    collection = FactCheckCollection(factchecks, vocab, model, infer_iterations=100, seed=seed)
    return SynthWorld(
        factchecks=factchecks,
        articles=articles,
        labels=labels,
        vocab=vocab,
        model=model,
        collection=collection,
        articles_with_on_claim=with_on_claim,
    )
