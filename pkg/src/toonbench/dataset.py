"""Dataset manifests, deterministic stratified splits, and curation.

A manifest is a versioned JSON document binding image/mask paths to one
of six categories; paths are relative to the manifest's directory.
Splitting is stratified per category with a fixed rounding rule:
train = floor(0.8n), validation = round-half-up(0.1n), test = the
remainder.  Curation selects hard examples first (lowest baseline
score) and fills with easy ones up to a fraction cap.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field, replace
from pathlib import Path

from PIL import Image, UnidentifiedImageError

from .errors import (
    AlreadySplitError,
    EmptyCategoryError,
    ManifestError,
    TargetTooLargeError,
)
from .mask import load_mask
from .errors import DecodeError, ToonbenchError

MANIFEST_VERSION = 1
SPLITS = ("train", "validation", "test")


class Category(enum.Enum):
    REFERENCE = "reference"
    EMOTION = "emotion"
    POSE = "pose"
    FACTORY = "factory"
    ACTION = "action"
    ITEMS = "items"


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    image: str
    mask: str
    category: Category
    split: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ManifestError("record id must be non-empty")
        if not self.image or not self.mask:
            raise ManifestError(f"record {self.id!r}: image and mask paths must be non-empty")
        if self.split is not None and self.split not in SPLITS:
            raise ManifestError(f"record {self.id!r}: unknown split {self.split!r}")


@dataclass
class DatasetManifest:
    records: list[DatasetRecord]
    seed: int | None = None
    base_dir: Path = field(default_factory=Path)

    def by_split(self, split: str | None) -> list[DatasetRecord]:
        if split is None or split == "all":
            return list(self.records)
        return [r for r in self.records if r.split == split]

    def resolve_image(self, record: DatasetRecord) -> Path:
        return self.base_dir / record.image

    def resolve_mask(self, record: DatasetRecord) -> Path:
        return self.base_dir / record.mask


@dataclass(frozen=True)
class CurationPolicy:
    easy_score_threshold: float = 0.99
    easy_fraction: float = 0.20
    target_size: int = 1

    def __post_init__(self):
        if not 0.0 <= self.easy_fraction <= 1.0:
            raise ValueError("easy_fraction must be in [0, 1]")
        if self.target_size < 1:
            raise ValueError("target_size must be >= 1")


@dataclass(frozen=True)
class CurationResult:
    selected: list[DatasetRecord]
    hard_count: int
    easy_count: int
    short: bool  # true when the cap left the selection below target


@dataclass(frozen=True)
class Issue:
    kind: str
    record_id: str
    detail: str


def load_manifest(path: str | Path) -> DatasetManifest:
    path = Path(path)
    try:
        doc = json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("version") != MANIFEST_VERSION:
        raise ManifestError(f"{path}: expected manifest version {MANIFEST_VERSION}")
    records = []
    for raw in doc.get("records", []):
        try:
            category = Category(raw["category"])
        except (KeyError, ValueError) as exc:
            raise ManifestError(f"{path}: bad category in record {raw.get('id')!r}") from exc
        try:
            records.append(
                DatasetRecord(
                    id=str(raw["id"]),
                    image=str(raw["image"]),
                    mask=str(raw["mask"]),
                    category=category,
                    split=raw.get("split"),
                )
            )
        except KeyError as exc:
            raise ManifestError(f"{path}: record missing field {exc}") from exc
    return DatasetManifest(records=records, seed=doc.get("seed"), base_dir=path.parent)


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    doc = {
        "version": MANIFEST_VERSION,
        "seed": manifest.seed,
        "records": [
            {
                "id": r.id,
                "image": r.image,
                "mask": r.mask,
                "category": r.category.value,
                **({"split": r.split} if r.split is not None else {}),
            }
            for r in manifest.records
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", "utf-8")


def split_sizes(n: int) -> tuple[int, int, int]:
    """(train, validation, test) counts for one category of size n."""
    train = n * 8 // 10  # floor(0.8 n), exact in integers
    validation = (n + 5) // 10  # round-half-up of n/10
    test = n - train - validation
    return train, validation, test


def assign_splits(manifest: DatasetManifest, seed: int) -> DatasetManifest:
    """Assign train/validation/test per category, deterministically.

    Membership depends only on the record ids and the seed: records are
    shuffled within each category after sorting by id, so permuting the
    manifest never changes the assignment.
    """
    if any(r.split is not None for r in manifest.records):
        raise AlreadySplitError("manifest already carries split assignments")
    by_category: dict[Category, list[DatasetRecord]] = {c: [] for c in Category}
    for r in manifest.records:
        by_category[r.category].append(r)
    empty = [c.value for c in Category if not by_category[c]]
    if empty:
        raise EmptyCategoryError(f"categories without records: {', '.join(empty)}")

    assignment: dict[str, str] = {}
    for category in Category:
        ids = sorted(r.id for r in by_category[category])
        if len(ids) != len(set(ids)):
            raise ManifestError(f"duplicate record ids in category {category.value}")
        rng = random.Random(f"{seed}:{category.value}")
        rng.shuffle(ids)
        n_train, n_val, _ = split_sizes(len(ids))
        for i, rid in enumerate(ids):
            if i < n_train:
                assignment[rid] = "train"
            elif i < n_train + n_val:
                assignment[rid] = "validation"
            else:
                assignment[rid] = "test"

    records = [replace(r, split=assignment[r.id]) for r in manifest.records]
    return DatasetManifest(records=records, seed=seed, base_dir=manifest.base_dir)


def curate(
    scored: list[tuple[DatasetRecord, float]],
    policy: CurationPolicy,
) -> CurationResult:
    """Pick hard examples first, easy ones up to the fraction cap.

    Hard = baseline score below the threshold.  Both groups are taken
    ascending by (score, id).  When the cap leaves the selection below
    the target the result is flagged short rather than padded.
    """
    if policy.target_size > len(scored):
        raise TargetTooLargeError(f"target {policy.target_size} exceeds {len(scored)} scored records")
    hard = sorted(
        ((s, r) for r, s in scored if s < policy.easy_score_threshold),
        key=lambda t: (t[0], t[1].id),
    )
    easy = sorted(
        ((s, r) for r, s in scored if s >= policy.easy_score_threshold),
        key=lambda t: (t[0], t[1].id),
    )
    easy_cap = int(policy.easy_fraction * policy.target_size)
    n_easy = min(easy_cap, len(easy))
    n_hard = min(policy.target_size - n_easy, len(hard))
    selected = [r for _, r in hard[:n_hard]] + [r for _, r in easy[:n_easy]]
    return CurationResult(
        selected=selected,
        hard_count=n_hard,
        easy_count=n_easy,
        short=len(selected) < policy.target_size,
    )


def validate_manifest(manifest: DatasetManifest) -> list[Issue]:
    """File-level consistency issues, sorted by record id; empty = clean."""
    issues: list[Issue] = []
    seen: dict[str, int] = {}
    for r in manifest.records:
        seen[r.id] = seen.get(r.id, 0) + 1
    for rid, count in seen.items():
        if count > 1:
            issues.append(Issue("DuplicateId", rid, f"{count} records share this id"))

    for r in manifest.records:
        image_path = manifest.resolve_image(r)
        mask_path = manifest.resolve_mask(r)
        image_size = None
        if not image_path.is_file():
            issues.append(Issue("MissingFile", r.id, f"image not found: {r.image}"))
        else:
            try:
                with Image.open(image_path) as img:
                    image_size = (img.height, img.width)
            except (UnidentifiedImageError, OSError):
                issues.append(Issue("DecodeError", r.id, f"image not decodable: {r.image}"))
        if not mask_path.is_file():
            issues.append(Issue("MissingFile", r.id, f"mask not found: {r.mask}"))
            continue
        try:
            mask = load_mask(mask_path)
        except (DecodeError, ToonbenchError):
            issues.append(Issue("DecodeError", r.id, f"mask not decodable: {r.mask}"))
            continue
        if image_size is not None and image_size != mask.shape:
            issues.append(
                Issue("DimensionMismatch", r.id, f"image {image_size} vs mask {mask.shape}")
            )
        if not (mask > 128).any():
            issues.append(Issue("EmptyForeground", r.id, "mask has no pixel above 128"))
    issues.sort(key=lambda i: (i.record_id, i.kind))
    return issues
