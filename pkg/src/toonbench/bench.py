"""Batch evaluation of model prediction directories against a manifest.

Produces one overall report per model plus one per category, rendered
as markdown (headline table), CSV (per-image detail) or JSON (both).
Evaluation is embarrassingly parallel per image; aggregation is a
sequential reduction over the manifest order, so reports are
bit-identical regardless of worker count.
"""

from __future__ import annotations

import hashlib
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import Category, DatasetManifest, DatasetRecord, validate_manifest
from .errors import (
    AmbiguousPredictionError,
    EmptyReportsError,
    ManifestInvalidError,
    MissingPredictionError,
    NoCandidatesError,
    NoPairsResolvedError,
)
from .mask import decode_mask
from .metrics import (
    BIOU_DILATION_RATIO,
    TABLE_ORDER,
    MetricId,
    MetricValue,
    PixelAccuracyConfig,
    evaluate_all,
    higher_is_better,
)

OVERALL = "overall"

METRIC_LABELS = {
    MetricId.PA: "Pixel Accuracy",
    MetricId.BIOU: "Mean Boundary IoU",
    MetricId.WF: "Weighted F-measure",
    MetricId.E: "E-measure",
    MetricId.S: "S-measure",
    MetricId.MAE: "MAE",
    MetricId.F: "F-measure",
    MetricId.MSE: "MSE",
}


@dataclass(frozen=True)
class ModelRun:
    model_name: str
    prediction_dir: Path

    def resolve(self, records: list[DatasetRecord]) -> tuple[dict[str, Path], list[str]]:
        """Map record ids to prediction files by filename stem.

        Returns (resolved, missing ids).  Multiple matches for one id
        are an error, never a guess.
        """
        directory = Path(self.prediction_dir)
        by_stem: dict[str, list[Path]] = {}
        if directory.is_dir():
            for f in sorted(directory.iterdir()):
                if f.is_file() and f.suffix.lower() == ".png":
                    by_stem.setdefault(f.stem, []).append(f)
        resolved: dict[str, Path] = {}
        missing: list[str] = []
        for r in records:
            matches = by_stem.get(r.id, [])
            if len(matches) > 1:
                raise AmbiguousPredictionError(
                    f"model {self.model_name!r}: {len(matches)} files match id {r.id!r}"
                )
            if matches:
                resolved[r.id] = matches[0]
            else:
                missing.append(r.id)
        return resolved, missing


@dataclass(frozen=True)
class ImageScore:
    record_id: str
    category: Category
    values: tuple[MetricValue, ...]  # in TABLE_ORDER


@dataclass(frozen=True)
class MetricReport:
    model_name: str
    scope: str  # "overall" or a category name
    image_count: int
    per_metric: dict[MetricId, float | None]
    coverage: dict[MetricId, int]  # images actually scored per metric
    per_image: tuple[ImageScore, ...]


class _ScoreCache:
    """Keyed on content hashes plus config; purely an optimization."""

    def __init__(self):
        self._lock = threading.Lock()
        self._data: dict[tuple, tuple[MetricValue, ...]] = {}

    def get(self, key):
        with self._lock:
            return self._data.get(key)

    def put(self, key, values):
        with self._lock:
            self._data[key] = values


def _load_with_hash(path: Path) -> tuple[str, np.ndarray]:
    data = path.read_bytes()
    return hashlib.sha256(data).hexdigest(), decode_mask(data, source=str(path))


def run_benchmark(
    manifest: DatasetManifest,
    runs: list[ModelRun],
    split: str = "test",
    cfg: PixelAccuracyConfig = PixelAccuracyConfig(),
    biou_dilation_ratio: float = BIOU_DILATION_RATIO,
    allow_missing: bool = False,
    jobs: int = 1,
) -> list[MetricReport]:
    """Evaluate every model over the selected split.

    Records of the selected split are validated on disk first.  Missing
    predictions fail the run unless allow_missing, which excludes those
    records (per model) instead.  Returns, per model, one overall
    report followed by one report per non-empty category.
    """
    records = manifest.by_split(split)
    if not records:
        raise NoPairsResolvedError(f"no records in split {split!r}")
    scoped = DatasetManifest(records=records, seed=manifest.seed, base_dir=manifest.base_dir)
    issues = validate_manifest(scoped)
    if issues:
        listing = "; ".join(f"{i.record_id}: {i.kind} ({i.detail})" for i in issues[:10])
        raise ManifestInvalidError(f"{len(issues)} issue(s) in split {split!r}: {listing}")

    resolutions: list[dict[str, Path]] = []
    for run in runs:
        resolved, missing = run.resolve(records)
        if missing and not allow_missing:
            raise MissingPredictionError(
                f"model {run.model_name!r}: no prediction for {len(missing)} record(s), "
                f"e.g. {missing[:5]}; pass allow_missing to exclude them"
            )
        if not resolved:
            raise NoPairsResolvedError(f"model {run.model_name!r} resolved no predictions")
        resolutions.append(resolved)

    cache = _ScoreCache()
    gt_lock = threading.Lock()
    gt_store: dict[str, tuple[str, np.ndarray]] = {}

    def ground_truth(record: DatasetRecord) -> tuple[str, np.ndarray]:
        with gt_lock:
            cached = gt_store.get(record.id)
        if cached is not None:
            return cached
        loaded = _load_with_hash(manifest.resolve_mask(record))
        with gt_lock:
            gt_store[record.id] = loaded
        return loaded

    cfg_key = (cfg.delta, cfg.foreground_threshold, cfg.erosion_iterations, biou_dilation_ratio)

    def score_one(task: tuple[int, DatasetRecord]) -> tuple[tuple[int, str], ImageScore]:
        run_idx, record = task
        pred_path = resolutions[run_idx][record.id]
        gt_hash, gt = ground_truth(record)
        pred_hash, pred = _load_with_hash(pred_path)
        key = (pred_hash, gt_hash, cfg_key)
        values = cache.get(key)
        if values is None:
            values = tuple(evaluate_all(pred, gt, cfg, biou_dilation_ratio))
            cache.put(key, values)
        return (run_idx, record.id), ImageScore(record.id, record.category, values)

    tasks = [
        (run_idx, record)
        for run_idx in range(len(runs))
        for record in records
        if record.id in resolutions[run_idx]
    ]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = dict(pool.map(score_one, tasks))
    else:
        results = dict(map(score_one, tasks))

    reports: list[MetricReport] = []
    for run_idx, run in enumerate(runs):
        scores = [
            results[(run_idx, record.id)]
            for record in records
            if record.id in resolutions[run_idx]
        ]
        reports.append(_aggregate(run.model_name, OVERALL, scores))
        for category in Category:
            in_cat = [s for s in scores if s.category is category]
            if in_cat:
                reports.append(_aggregate(run.model_name, category.value, in_cat))
    return reports


def _aggregate(model_name: str, scope: str, scores: list[ImageScore]) -> MetricReport:
    per_metric: dict[MetricId, float | None] = {}
    coverage: dict[MetricId, int] = {}
    for pos, mid in enumerate(TABLE_ORDER):
        vals = [s.values[pos].value for s in scores if s.values[pos].value is not None]
        coverage[mid] = len(vals)
        per_metric[mid] = (sum(vals) / len(vals)) if vals else None
    return MetricReport(
        model_name=model_name,
        scope=scope,
        image_count=len(scores),
        per_metric=per_metric,
        coverage=coverage,
        per_image=tuple(scores),
    )


def _fmt(value: float | None, scale: float = 1.0) -> str:
    return "" if value is None else f"{value * scale:.4f}"


def render_report(
    reports: list[MetricReport],
    fmt: str = "markdown",
    mae_display_scale: float = 1.0,
) -> str:
    """Render reports as markdown, csv or json.

    Markdown shows aggregate tables (best value per column bold, ties
    all bold); csv carries full per-image detail; json carries both.
    The MAE display scale affects markdown only.
    """
    if not reports:
        raise EmptyReportsError("nothing to render")
    if fmt == "markdown":
        return _render_markdown(reports, mae_display_scale)
    if fmt == "csv":
        return _render_csv(reports)
    if fmt == "json":
        return _render_json(reports)
    raise ValueError(f"unknown format {fmt!r}")


def _render_markdown(reports: list[MetricReport], mae_scale: float) -> str:
    scopes: list[str] = []
    for r in reports:
        if r.scope not in scopes:
            scopes.append(r.scope)
    lines: list[str] = []
    for scope in scopes:
        rows = [r for r in reports if r.scope == scope]
        lines.append(f"## {scope}")
        lines.append("")
        header = ["Model", "Images"] + [METRIC_LABELS[m] for m in TABLE_ORDER]
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "|".join([" --- "] * len(header)) + "|")
        best: dict[MetricId, float] = {}
        for mid in TABLE_ORDER:
            vals = [r.per_metric[mid] for r in rows if r.per_metric[mid] is not None]
            if vals:
                best[mid] = max(vals) if higher_is_better(mid) else min(vals)
        for r in rows:
            cells = [r.model_name, str(r.image_count)]
            for mid in TABLE_ORDER:
                v = r.per_metric[mid]
                scale = mae_scale if mid is MetricId.MAE else 1.0
                text = _fmt(v, scale)
                if v is not None and mid in best and v == best[mid] and len(rows) > 1:
                    text = f"**{text}**"
                cells.append(text)
            lines.append("| " + " | ".join(cells) + " |")
        notes = []
        for r in rows:
            for mid in TABLE_ORDER:
                if r.coverage[mid] < r.image_count:
                    notes.append(
                        f"- {r.model_name}: {METRIC_LABELS[mid]} scored on "
                        f"{r.coverage[mid]}/{r.image_count} images"
                    )
        if notes:
            lines.append("")
            lines.extend(notes)
        lines.append("")
    return "\n".join(lines)


def _render_csv(reports: list[MetricReport]) -> str:
    overall = [r for r in reports if r.scope == OVERALL] or reports
    lines = ["model,record_id,category," + ",".join(m.value for m in TABLE_ORDER) + ",errors"]
    for r in overall:
        for s in r.per_image:
            cells = [r.model_name, s.record_id, s.category.value]
            errors = []
            for mv in s.values:
                cells.append("" if mv.value is None else repr(mv.value))
                if mv.error is not None:
                    errors.append(f"{mv.metric.value}={mv.error}")
            cells.append(";".join(errors))
            lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _render_json(reports: list[MetricReport]) -> str:
    doc = {
        "reports": [
            {
                "model": r.model_name,
                "scope": r.scope,
                "imageCount": r.image_count,
                "perMetric": {m.value: r.per_metric[m] for m in TABLE_ORDER},
                "coverage": {m.value: r.coverage[m] for m in TABLE_ORDER},
            }
            for r in reports
        ],
        "perImage": [
            {
                "model": r.model_name,
                "recordId": s.record_id,
                "category": s.category.value,
                "values": {mv.metric.value: mv.value for mv in s.values},
                "errors": {mv.metric.value: mv.error for mv in s.values if mv.error is not None},
            }
            for r in reports
            if r.scope == OVERALL
            for s in r.per_image
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def select_checkpoint(
    candidates: list[ModelRun],
    manifest: DatasetManifest,
    criterion: MetricId = MetricId.PA,
    cfg: PixelAccuracyConfig = PixelAccuracyConfig(),
    biou_dilation_ratio: float = BIOU_DILATION_RATIO,
    allow_missing: bool = False,
    jobs: int = 1,
) -> tuple[str, list[MetricReport]]:
    """Best candidate by mean criterion on the validation split.

    Direction-aware (MAE/MSE lower is better); exact ties break by
    model name ascending.  Returns the winner plus the full comparison
    reports.
    """
    if not candidates:
        raise NoCandidatesError("no candidate runs")
    reports = run_benchmark(
        manifest,
        candidates,
        split="validation",
        cfg=cfg,
        biou_dilation_ratio=biou_dilation_ratio,
        allow_missing=allow_missing,
        jobs=jobs,
    )
    overall = [r for r in reports if r.scope == OVERALL]

    def sort_key(r: MetricReport):
        v = r.per_metric[criterion]
        missing = v is None
        rank = 0.0 if missing else (-v if higher_is_better(criterion) else v)
        return (missing, rank, r.model_name)

    best = min(overall, key=sort_key)
    return best.model_name, reports
