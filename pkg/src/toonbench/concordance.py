"""Agreement between human rankings and metric scores.

Each human ranking of K model outputs expands into K*(K-1)/2 ordered
pairs; a metric is credited on a pair when its score for the preferred
output is strictly better (direction-aware).  Exact score ties earn
half credit or none, by policy.  Only order is consulted, so rates are
invariant under monotone transforms of a metric's scores.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import ManifestError, NoComparablePairsError
from .metrics import TABLE_ORDER, MetricId, higher_is_better

TIE_HALF_CREDIT = "halfCredit"
TIE_DISAGREE = "disagree"


@dataclass(frozen=True)
class HumanRanking:
    image_id: str
    annotator_id: str
    ordering: tuple[str, ...]  # model names, best first
    timestamp: str  # ISO-8601 UTC

    def __post_init__(self):
        if len(self.ordering) < 2:
            raise ValueError(f"ranking for {self.image_id!r} needs at least 2 models")
        if len(set(self.ordering)) != len(self.ordering):
            raise ValueError(f"ranking for {self.image_id!r} contains duplicates")


@dataclass(frozen=True)
class ConcordanceReport:
    per_metric: dict[MetricId, float]
    comparable_pairs: int
    dropped_pairs: int
    tie_policy: str


def now_utc() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def append_ranking(path: str | Path, ranking: HumanRanking) -> None:
    """Durably append one ranking as a JSONL line (write, flush, fsync)."""
    line = json.dumps(
        {
            "imageId": ranking.image_id,
            "annotatorId": ranking.annotator_id,
            "ordering": list(ranking.ordering),
            "timestamp": ranking.timestamp,
        },
        sort_keys=True,
    )
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(line + "\n")
        fh.flush()
        os.fsync(fh.fileno())


def load_rankings(path: str | Path) -> list[HumanRanking]:
    rankings = []
    text = Path(path).read_text("utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
            rankings.append(
                HumanRanking(
                    image_id=str(doc["imageId"]),
                    annotator_id=str(doc["annotatorId"]),
                    ordering=tuple(doc["ordering"]),
                    timestamp=str(doc["timestamp"]),
                )
            )
        except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
            raise ManifestError(f"{path}:{lineno}: bad ranking line: {exc}") from exc
    return rankings


#: score table type: scores[image_id][model_name][metric] -> float | None
ScoreTable = dict[str, dict[str, dict[MetricId, float | None]]]


def compute_concordance(
    rankings: list[HumanRanking],
    scores: ScoreTable,
    tie_policy: str = TIE_HALF_CREDIT,
    metric_ids: tuple[MetricId, ...] = TABLE_ORDER,
) -> ConcordanceReport:
    """Per-metric agreement rate with the human pair preferences.

    A pair is comparable only when both models carry a complete score
    vector for that image, so comparable_pairs is identical across
    metrics; incomplete pairs are dropped and counted.
    """
    if tie_policy not in (TIE_HALF_CREDIT, TIE_DISAGREE):
        raise ValueError(f"unknown tie policy {tie_policy!r}")
    credited = {m: 0.0 for m in metric_ids}
    comparable = 0
    dropped = 0

    def complete(image_id: str, model: str) -> bool:
        per_model = scores.get(image_id, {}).get(model)
        return per_model is not None and all(per_model.get(m) is not None for m in metric_ids)

    for ranking in rankings:
        models = ranking.ordering
        for i in range(len(models)):
            for j in range(i + 1, len(models)):
                preferred, other = models[i], models[j]
                if not (complete(ranking.image_id, preferred) and complete(ranking.image_id, other)):
                    dropped += 1
                    continue
                comparable += 1
                for m in metric_ids:
                    a = scores[ranking.image_id][preferred][m]
                    b = scores[ranking.image_id][other][m]
                    if a == b:
                        if tie_policy == TIE_HALF_CREDIT:
                            credited[m] += 0.5
                    elif (a > b) == higher_is_better(m):
                        credited[m] += 1.0
    if comparable == 0:
        raise NoComparablePairsError("no ranking pair has complete metric scores")
    rates = {m: credited[m] / comparable for m in metric_ids}
    return ConcordanceReport(
        per_metric=rates,
        comparable_pairs=comparable,
        dropped_pairs=dropped,
        tie_policy=tie_policy,
    )


def rank_metrics(report: ConcordanceReport) -> list[MetricId]:
    """Metric ids by agreement rate descending; ties alphabetical."""
    return sorted(report.per_metric, key=lambda m: (-report.per_metric[m], m.value))
