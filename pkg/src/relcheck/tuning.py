"""Relevance labeling, cumulative-score weight tuning, ablation evaluation.

Retrieved pairs are judged on_claim (+2), on_theme (+1) or irrelevant (-2);
the tuning objective is the summed score of everything retrieved over a
labeled article set. The evaluation harness reports per-category precision
(with absolute counts) and on-claim recall for each feature configuration.
"""

from __future__ import annotations

import csv
import itertools
import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .corpus import Article
from .ranker import FactCheckCollection, ScoredResult, Weights, score_pair

log = logging.getLogger(__name__)

EVAL_TOP_K = 5

_NUMERIC = {"on_claim": 2, "on_theme": 1, "irrelevant": -2}


class RelevanceLabel(Enum):
    ON_CLAIM = "on_claim"
    ON_THEME = "on_theme"
    IRRELEVANT = "irrelevant"

    @property
    def numeric(self) -> int:
        return _NUMERIC[self.value]


@dataclass
class LabeledJudgment:
    article_id: str
    factcheck_id: str
    label: RelevanceLabel
    annotator: str | None = None


def cumulative_score(results: list[LabeledJudgment]) -> int:
    """Sum of numeric label values (+2 / +1 / -2) over a result set."""
    return sum(j.label.numeric for j in results)


def save_labels(labels: list[LabeledJudgment], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        for j in labels:
            row = [j.article_id, j.factcheck_id, j.label.value]
            if j.annotator:
                row.append(j.annotator)
            writer.writerow(row)


def load_labels(path: str | Path) -> list[LabeledJudgment]:
    """Load judgments; duplicate (article, factcheck) keys and unknown label
    strings are errors naming the offending line(s)."""
    labels: list[LabeledJudgment] = []
    seen: dict[tuple[str, str], int] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if len(row) not in (3, 4):
                raise ValueError(f"{path}:{lineno}: expected 3 or 4 fields, got {len(row)}")
            article_id, factcheck_id, label_str = row[0].strip(), row[1].strip(), row[2].strip()
            try:
                label = RelevanceLabel(label_str)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: unknown label {label_str!r}") from None
            key = (article_id, factcheck_id)
            if key in seen:
                raise ValueError(
                    f"{path}:{lineno}: duplicate judgment for {key}, first seen on line {seen[key]}"
                )
            seen[key] = lineno
            labels.append(
                LabeledJudgment(
                    article_id,
                    factcheck_id,
                    label,
                    annotator=row[3].strip() if len(row) == 4 else None,
                )
            )
    return labels


class JudgmentLookup:
    """(article_id, factcheck_id) -> label; unlabeled retrieved pairs count
    as irrelevant (with an aggregate warning) so precision is not inflated."""

    def __init__(self, labels: list[LabeledJudgment]):
        self.by_pair = {(j.article_id, j.factcheck_id): j.label for j in labels}
        self.unlabeled_seen: set[tuple[str, str]] = set()

    def get(self, article_id: str, factcheck_id: str) -> RelevanceLabel:
        label = self.by_pair.get((article_id, factcheck_id))
        if label is None:
            self.unlabeled_seen.add((article_id, factcheck_id))
            return RelevanceLabel.IRRELEVANT
        return label

    def articles_with_on_claim(self) -> set[str]:
        return {
            a_id
            for (a_id, _), label in self.by_pair.items()
            if label is RelevanceLabel.ON_CLAIM
        }

    def warn_unlabeled(self) -> None:
        if self.unlabeled_seen:
            log.warning(
                "%d retrieved pair(s) had no judgment; counted as irrelevant",
                len(self.unlabeled_seen),
            )


def _component_cache(
    articles: list[Article], collection: FactCheckCollection
) -> dict[str, list[ScoredResult]]:
    """Channel scores per (article, fact check), computed once; totals are
    recombined per weight setting with the same expression score_pair uses."""
    unit = Weights(1.0, 1.0, 1.0, 1.0, t_l=0.0)
    cache: dict[str, list[ScoredResult]] = {}
    for article in articles:
        feats = collection.article_features(article)
        cache[article.id] = [
            score_pair(feats, fc_feats, unit, collection.model.thematic_ids, fc_id)
            for fc_id, fc_feats in collection.features.items()
        ]
    return cache


def _rank_components(
    components: list[ScoredResult], weights: Weights, k: int
) -> list[tuple[str, float]]:
    rescored = [
        (
            r.factcheck_id,
            weights.w_title * r.s_title
            + weights.w_body * r.s_body
            + weights.w_topics * r.s_topics
            + weights.w_thematic * r.s_thematic,
        )
        for r in components
    ]
    rescored.sort(key=lambda pair: (-pair[1], pair[0]))
    return [(fc_id, total) for fc_id, total in rescored if total >= weights.t_l][:k]


def tune_weights(
    articles: list[Article],
    labels: list[LabeledJudgment],
    collection: FactCheckCollection,
    grid: dict[str, list[float]],
    k: int = EVAL_TOP_K,
) -> tuple[Weights, int]:
    """Exhaustive grid search maximizing the net cumulative score.

    grid maps w_title/w_body/w_topics/w_thematic (and optionally t_l) to
    candidate value lists. Ties break to the lexicographically smallest
    (w_title, w_body, w_topics, w_thematic, t_l) tuple.
    """
    if not articles:
        raise ValueError("tune_weights requires a labeled article set")
    axes = []
    for name in ("w_title", "w_body", "w_topics", "w_thematic"):
        values = sorted(grid.get(name, []))
        if not values:
            raise ValueError(f"grid is missing values for {name}")
        axes.append(values)
    axes.append(sorted(grid.get("t_l", [0.0])) or [0.0])

    lookup = JudgmentLookup(labels)
    cache = _component_cache(articles, collection)

    best: tuple[Weights, int] | None = None
    for combo in itertools.product(*axes):
        weights = Weights(*combo)
        score = 0
        for article in articles:
            for fc_id, _ in _rank_components(cache[article.id], weights, k):
                score += lookup.get(article.id, fc_id).numeric
        if best is None or score > best[1]:
            best = (weights, score)
    lookup.warn_unlabeled()
    assert best is not None
    return best


@dataclass
class EvalRow:
    configuration: str
    counts: dict[str, int]
    precisions: dict[str, float]
    n_returned: int
    on_claim_recall: float


@dataclass
class EvalReport:
    rows: list[EvalRow]
    n_articles: int

    def format_table(self) -> str:
        header = f"{'configuration':<18} {'on_claim':>14} {'on_theme':>14} {'irrelevant':>14} {'recall':>7}"
        lines = [header, "-" * len(header)]
        for row in self.rows:
            cells = [
                f"{row.precisions[cat]:.2f} ({row.counts[cat]})"
                for cat in ("on_claim", "on_theme", "irrelevant")
            ]
            lines.append(
                f"{row.configuration:<18} {cells[0]:>14} {cells[1]:>14} {cells[2]:>14} "
                f"{row.on_claim_recall:>7.2f}"
            )
        return "\n".join(lines)

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for row in self.rows:
                fh.write(
                    json.dumps(
                        {
                            "configuration": row.configuration,
                            "counts": row.counts,
                            "precisions": row.precisions,
                            "n_returned": row.n_returned,
                            "on_claim_recall": row.on_claim_recall,
                        }
                    )
                    + "\n"
                )


def ablation_configurations(
    weights: Weights, thresholds: dict[str, float] | None = None
) -> list[tuple[str, Weights]]:
    """The standard five-row ablation: each channel alone, then all together.

    Single channels run at weight 1.0 (their ranking is scale-invariant;
    only the threshold interacts with the scale). Each configuration
    carries its own threshold, defaulting to 0 for the single channels and
    the tuned t_l for the combination.
    """
    thresholds = thresholds or {}
    rows = [
        ("title_claim", Weights(1.0, 0, 0, 0, thresholds.get("title_claim", 0.0))),
        ("page_content", Weights(0, 1.0, 0, 0, thresholds.get("page_content", 0.0))),
        ("topics", Weights(0, 0, 1.0, 0, thresholds.get("topics", 0.0))),
        ("thematic_topics", Weights(0, 0, 0, 1.0, thresholds.get("thematic_topics", 0.0))),
        (
            "all_features",
            Weights(
                weights.w_title,
                weights.w_body,
                weights.w_topics,
                weights.w_thematic,
                thresholds.get("all_features", weights.t_l),
            ),
        ),
    ]
    return rows


def evaluate(
    articles: list[Article],
    labels: list[LabeledJudgment],
    collection: FactCheckCollection,
    configurations: list[tuple[str, Weights]],
    k: int = EVAL_TOP_K,
) -> EvalReport:
    """Retrieve top-k per article under each configuration and tabulate
    per-category precision plus on-claim recall."""
    lookup = JudgmentLookup(labels)
    cache = _component_cache(articles, collection)
    has_on_claim = lookup.articles_with_on_claim() & {a.id for a in articles}

    rows: list[EvalRow] = []
    for name, weights in configurations:
        counts = {"on_claim": 0, "on_theme": 0, "irrelevant": 0}
        recalled: set[str] = set()
        for article in articles:
            for fc_id, _ in _rank_components(cache[article.id], weights, k):
                label = lookup.get(article.id, fc_id)
                counts[label.value] += 1
                if label is RelevanceLabel.ON_CLAIM:
                    recalled.add(article.id)
        n_returned = sum(counts.values())
        precisions = {
            cat: (counts[cat] / n_returned if n_returned else 0.0) for cat in counts
        }
        recall = (
            len(recalled & has_on_claim) / len(has_on_claim) if has_on_claim else 0.0
        )
        rows.append(
            EvalRow(
                configuration=name,
                counts=counts,
                precisions=precisions,
                n_returned=n_returned,
                on_claim_recall=recall,
            )
        )
    lookup.warn_unlabeled()
    return EvalReport(rows=rows, n_articles=len(articles))
