"""Local review service backing the ranking UI.

Feeds blinded ranking tasks to annotators, serves checkerboard
composites of each model's cutout, and appends accepted rankings to a
JSONL file before acknowledging.  Blind labels are a deterministic
permutation per (image, session seed); model names never appear in any
payload sent to the UI.
"""

from __future__ import annotations

import hashlib
import io
import random
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image
from pydantic import BaseModel

from .concordance import (
    ConcordanceReport,
    HumanRanking,
    append_ranking,
    compute_concordance,
    load_rankings,
    now_utc,
)
from .dataset import DatasetManifest, DatasetRecord
from .errors import (
    DuplicateSubmissionError,
    LabelMismatchError,
    NoComparablePairsError,
    SessionError,
    UnknownHandleError,
    UnknownTaskError,
)
from .mask import load_mask
from .metrics import TABLE_ORDER, MetricId, evaluate_all

CHECKER_TILE = 8
CHECKER_LIGHT = 255
CHECKER_DARK = 200


@dataclass(frozen=True)
class Candidate:
    label: str
    asset: str


@dataclass(frozen=True)
class RankingTask:
    image_id: str
    original_asset: str
    candidates: tuple[Candidate, ...]
    remaining: int


@dataclass
class _ImageEntry:
    record: DatasetRecord
    models: tuple[str, ...]  # all models with a prediction for this image
    label_to_model: dict[str, str]


def _blind_labels(models: list[str], seed: int, image_id: str) -> dict[str, str]:
    shuffled = sorted(models)
    random.Random(f"{seed}:labels:{image_id}").shuffle(shuffled)
    return {chr(ord("A") + i): m for i, m in enumerate(shuffled)}


def _handle(seed: int, image_id: str, kind: str) -> str:
    return hashlib.sha256(f"{seed}:{image_id}:{kind}".encode()).hexdigest()[:24]


def checkerboard_composite(image: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Apply the prediction as alpha over an editor-style checkerboard."""
    h, w = alpha.shape
    ys = (np.arange(h) // CHECKER_TILE)[:, None]
    xs = (np.arange(w) // CHECKER_TILE)[None, :]
    checker = np.where((ys + xs) % 2 == 0, CHECKER_LIGHT, CHECKER_DARK).astype(np.float64)
    a = alpha.astype(np.float64) / 255.0
    out = image.astype(np.float64) * a[..., None] + checker[..., None] * (1.0 - a[..., None])
    return np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8)


class ReviewSession:
    """Session state: task order, blinding, completion, persistence.

    Submissions are serialized through one lock so the rankings file is
    never interleaved; acknowledgment happens only after a durable
    append.
    """

    def __init__(
        self,
        manifest: DatasetManifest,
        predictions: dict[str, Path],
        rankings_path: str | Path,
        seed: int = 0,
        split: str | None = "test",
    ):
        if len(predictions) < 2:
            raise SessionError("need at least 2 models to rank")
        self.manifest = manifest
        self.seed = seed
        self.rankings_path = Path(rankings_path)
        self._lock = threading.Lock()
        self._assets: dict[str, tuple[str, str | None]] = {}  # handle -> (image_id, model|None)

        records = manifest.by_split(split)
        if not records and split is not None:
            records = manifest.by_split(None)
        self._images: dict[str, _ImageEntry] = {}
        self._predictions: dict[tuple[str, str], Path] = {}
        for record in records:
            models = []
            for name, directory in predictions.items():
                matches = [
                    f
                    for f in sorted(Path(directory).iterdir())
                    if f.is_file() and f.stem == record.id and f.suffix.lower() == ".png"
                ]
                if matches:
                    models.append(name)
                    self._predictions[(record.id, name)] = matches[0]
            if len(models) < 2:
                continue
            label_map = _blind_labels(models, seed, record.id)
            self._images[record.id] = _ImageEntry(record, tuple(sorted(models)), label_map)
            self._assets[_handle(seed, record.id, "original")] = (record.id, None)
            for label, model in label_map.items():
                self._assets[_handle(seed, record.id, f"model:{model}")] = (record.id, model)
        if not self._images:
            raise SessionError("no image has predictions from at least 2 models")

        order = sorted(self._images)
        random.Random(f"{seed}:order").shuffle(order)
        self._order = order

        self._completed: set[tuple[str, str]] = set()  # (image_id, annotator_id)
        if self.rankings_path.exists():
            for ranking in load_rankings(self.rankings_path):
                self._completed.add((ranking.image_id, ranking.annotator_id))

        self._score_cache: dict[tuple[str, str], dict[MetricId, float | None]] = {}

    @property
    def model_names(self) -> list[str]:
        names = set()
        for entry in self._images.values():
            names.update(entry.models)
        return sorted(names)

    def _remaining(self, annotator_id: str) -> list[str]:
        return [i for i in self._order if (i, annotator_id) not in self._completed]

    def next_task(self, annotator_id: str) -> RankingTask | None:
        """Next uncompleted task in seeded order, or None when done."""
        with self._lock:
            pending = self._remaining(annotator_id)
            if not pending:
                return None
            image_id = pending[0]
            entry = self._images[image_id]
            candidates = tuple(
                Candidate(label, _handle(self.seed, image_id, f"model:{entry.label_to_model[label]}"))
                for label in sorted(entry.label_to_model)
            )
            return RankingTask(
                image_id=image_id,
                original_asset=_handle(self.seed, image_id, "original"),
                candidates=candidates,
                remaining=len(pending),
            )

    def submit_ranking(self, annotator_id: str, image_id: str, ordered_labels: list[str]) -> int:
        """Resolve blind labels, append durably, mark complete.

        Returns the number of tasks remaining for this annotator.
        """
        with self._lock:
            entry = self._images.get(image_id)
            if entry is None:
                raise UnknownTaskError(f"unknown image {image_id!r}")
            if (image_id, annotator_id) in self._completed:
                raise DuplicateSubmissionError(f"{annotator_id!r} already ranked {image_id!r}")
            expected = set(entry.label_to_model)
            if len(ordered_labels) != len(expected) or set(ordered_labels) != expected:
                raise LabelMismatchError(
                    f"expected a permutation of {sorted(expected)}, got {ordered_labels}"
                )
            ranking = HumanRanking(
                image_id=image_id,
                annotator_id=annotator_id,
                ordering=tuple(entry.label_to_model[label] for label in ordered_labels),
                timestamp=now_utc(),
            )
            append_ranking(self.rankings_path, ranking)
            self._completed.add((image_id, annotator_id))
            return len(self._remaining(annotator_id))

    def asset_png(self, handle: str) -> bytes:
        """Composite (or original) PNG bytes for a session-issued handle."""
        try:
            image_id, model = self._assets[handle]
        except KeyError:
            raise UnknownHandleError("unknown asset handle") from None
        entry = self._images[image_id]
        with Image.open(self.manifest.resolve_image(entry.record)) as img:
            rgb = np.asarray(img.convert("RGB"))
        if model is None:
            out = Image.fromarray(rgb, "RGB")
        else:
            alpha = load_mask(self._predictions[(image_id, model)])
            if alpha.shape != rgb.shape[:2]:
                raise SessionError(
                    f"prediction for {image_id!r}/{model!r} is {alpha.shape}, image is {rgb.shape[:2]}"
                )
            out = Image.fromarray(checkerboard_composite(rgb, alpha), "RGB")
        buf = io.BytesIO()
        out.save(buf, format="PNG")
        return buf.getvalue()

    def _scores_for(self, image_id: str, model: str) -> dict[MetricId, float | None]:
        key = (image_id, model)
        cached = self._score_cache.get(key)
        if cached is not None:
            return cached
        entry = self._images[image_id]
        gt = load_mask(self.manifest.resolve_mask(entry.record))
        pred = load_mask(self._predictions[key])
        values = {mv.metric: mv.value for mv in evaluate_all(pred, gt)}
        self._score_cache[key] = values
        return values

    def concordance(self) -> ConcordanceReport | None:
        """Live concordance over rankings persisted so far; None if empty."""
        if not self.rankings_path.exists():
            return None
        rankings = load_rankings(self.rankings_path)
        if not rankings:
            return None
        table: dict[str, dict[str, dict[MetricId, float | None]]] = {}
        for ranking in rankings:
            if ranking.image_id not in self._images:
                continue
            for model in ranking.ordering:
                if (ranking.image_id, model) not in self._predictions:
                    continue
                table.setdefault(ranking.image_id, {})[model] = self._scores_for(
                    ranking.image_id, model
                )
        try:
            return compute_concordance(rankings, table)
        except NoComparablePairsError:
            return None


_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>toonbench review</title></head>
<body><h1>toonbench review service</h1>
<p>No UI bundle found. Point --ui-dir at a built frontend, or use the JSON
API: GET /api/task?annotator=ID, POST /api/ranking, GET /api/asset/yourhandle,
GET /api/concordance.</p></body></html>
"""


class RankingIn(BaseModel):
    annotatorId: str
    imageId: str
    ordering: list[str]


def create_app(session: ReviewSession, ui_dir: str | Path | None = None):
    """FastAPI app exposing the review surface plus static UI hosting.

    CORS is wide open: the service binds localhost and the UI may be
    served from a dev server on another port.
    """
    from fastapi import FastAPI, HTTPException
    from fastapi.middleware.cors import CORSMiddleware
    from fastapi.responses import HTMLResponse, Response

    app = FastAPI(title="toonbench review")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.get("/api/task")
    def get_task(annotator: str):
        task = session.next_task(annotator)
        if task is None:
            return {"done": True, "remaining": 0}
        return {
            "done": False,
            "imageId": task.image_id,
            "original": task.original_asset,
            "candidates": [{"label": c.label, "asset": c.asset} for c in task.candidates],
            "remaining": task.remaining,
        }

    @app.post("/api/ranking")
    def post_ranking(body: RankingIn):
        try:
            remaining = session.submit_ranking(body.annotatorId, body.imageId, body.ordering)
        except UnknownTaskError as exc:
            raise HTTPException(404, str(exc))
        except DuplicateSubmissionError as exc:
            raise HTTPException(409, str(exc))
        except LabelMismatchError as exc:
            raise HTTPException(400, str(exc))
        return {"ok": True, "remaining": remaining}

    @app.get("/api/asset/{handle}")
    def get_asset(handle: str):
        try:
            payload = session.asset_png(handle)
        except UnknownHandleError:
            raise HTTPException(404, "unknown asset handle")
        return Response(content=payload, media_type="image/png")

    @app.get("/api/concordance")
    def get_concordance():
        report = session.concordance()
        if report is None:
            return {"comparablePairs": 0, "droppedPairs": 0, "perMetric": {}, "ranking": []}
        from .concordance import rank_metrics

        return {
            "comparablePairs": report.comparable_pairs,
            "droppedPairs": report.dropped_pairs,
            "tiePolicy": report.tie_policy,
            "perMetric": {m.value: report.per_metric[m] for m in TABLE_ORDER},
            "ranking": [m.value for m in rank_metrics(report)],
        }

    ui_path = Path(ui_dir) if ui_dir else None
    if ui_path and ui_path.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_path, html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index():
            return _FALLBACK_PAGE

    return app
