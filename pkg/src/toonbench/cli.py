"""Command-line interface.

Exit codes: 0 success, 1 data errors, 2 usage errors.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from .bench import ModelRun, render_report, run_benchmark, select_checkpoint
from .concordance import (
    TIE_DISAGREE,
    TIE_HALF_CREDIT,
    compute_concordance,
    load_rankings,
    rank_metrics,
)
from .dataset import (
    Category,
    CurationPolicy,
    DatasetManifest,
    DatasetRecord,
    assign_splits,
    curate,
    load_manifest,
    save_manifest,
    validate_manifest,
)
from .errors import ToonbenchError
from .metrics import BIOU_DILATION_RATIO, TABLE_ORDER, MetricId, PixelAccuracyConfig, evaluate_all


class _DataError(click.ClickException):
    exit_code = 1


def _wrap(func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except ToonbenchError as exc:
        raise _DataError(str(exc)) from exc


def _parse_preds(preds: tuple[str, ...]) -> list[ModelRun]:
    runs = []
    for spec in preds:
        name, sep, directory = spec.partition("=")
        if not sep or not name or not directory:
            raise click.UsageError(f"--pred expects NAME=DIR, got {spec!r}")
        runs.append(ModelRun(model_name=name, prediction_dir=Path(directory)))
    if not runs:
        raise click.UsageError("at least one --pred NAME=DIR is required")
    return runs


def _write_out(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, "utf-8")
    else:
        click.echo(text, nl=False)


@click.group()
def main():
    """Alpha-mask evaluation toolkit."""


@main.command("eval")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--pred", "preds", multiple=True, help="NAME=DIR, repeatable")
@click.option("--split", default="test", type=click.Choice(["train", "validation", "test", "all"]))
@click.option("--format", "fmt", default="markdown", type=click.Choice(["markdown", "csv", "json"]))
@click.option("--out", default=None, type=click.Path())
@click.option("--allow-missing", is_flag=True, help="exclude records without predictions")
@click.option("--pa-delta", default=10, show_default=True)
@click.option("--pa-erosion", default=1, show_default=True)
@click.option("--biou-ratio", default=BIOU_DILATION_RATIO, show_default=True)
@click.option("--mae-scale", default=1.0, show_default=True, help="display multiplier for MAE in markdown")
@click.option("--jobs", default=1, show_default=True)
def eval_cmd(manifest_path, preds, split, fmt, out, allow_missing, pa_delta, pa_erosion, biou_ratio, mae_scale, jobs):
    """Evaluate model prediction directories over a manifest split."""
    manifest = _wrap(load_manifest, manifest_path)
    runs = _parse_preds(preds)
    cfg = PixelAccuracyConfig(delta=pa_delta, erosion_iterations=pa_erosion)
    reports = _wrap(
        run_benchmark,
        manifest,
        runs,
        split=split,
        cfg=cfg,
        biou_dilation_ratio=biou_ratio,
        allow_missing=allow_missing,
        jobs=jobs,
    )
    _write_out(render_report(reports, fmt, mae_display_scale=mae_scale), out)


@main.command("select")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--pred", "preds", multiple=True)
@click.option("--criterion", default="PA", type=click.Choice([m.value for m in TABLE_ORDER]))
@click.option("--allow-missing", is_flag=True)
@click.option("--pa-delta", default=10, show_default=True)
@click.option("--pa-erosion", default=1, show_default=True)
@click.option("--biou-ratio", default=BIOU_DILATION_RATIO, show_default=True)
@click.option("--jobs", default=1, show_default=True)
def select_cmd(manifest_path, preds, criterion, allow_missing, pa_delta, pa_erosion, biou_ratio, jobs):
    """Pick the best checkpoint by mean validation metric."""
    manifest = _wrap(load_manifest, manifest_path)
    runs = _parse_preds(preds)
    cfg = PixelAccuracyConfig(delta=pa_delta, erosion_iterations=pa_erosion)
    best, reports = _wrap(
        select_checkpoint,
        runs,
        manifest,
        criterion=MetricId(criterion),
        cfg=cfg,
        biou_dilation_ratio=biou_ratio,
        allow_missing=allow_missing,
        jobs=jobs,
    )
    click.echo(render_report(reports, "markdown"), nl=False)
    click.echo(f"selected: {best}")


@main.command("split")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--seed", required=True, type=int)
@click.option("--out", default=None, type=click.Path(), help="defaults to rewriting the manifest in place")
def split_cmd(manifest_path, seed, out):
    """Assign stratified train/validation/test splits."""
    manifest = _wrap(load_manifest, manifest_path)
    updated = _wrap(assign_splits, manifest, seed)
    save_manifest(updated, out or manifest_path)
    counts = {s: sum(1 for r in updated.records if r.split == s) for s in ("train", "validation", "test")}
    click.echo(f"assigned splits with seed {seed}: {counts}")


@main.command("curate")
@click.option("--scores", "scores_path", required=True, type=click.Path(exists=True))
@click.option("--target", required=True, type=int)
@click.option("--threshold", default=0.99, show_default=True, help="scores at or above are easy")
@click.option("--easy-fraction", default=0.20, show_default=True)
@click.option("--out", default=None, type=click.Path())
def curate_cmd(scores_path, target, threshold, easy_fraction, out):
    """Select hard examples first from a scored record list.

    The scores file is JSON: {"version": 1, "scores": [{"id", "image",
    "mask", "category", "score"}, ...]}.  Output is a manifest of the
    selected records.
    """
    doc = json.loads(Path(scores_path).read_text("utf-8"))
    if not isinstance(doc, dict) or "scores" not in doc:
        raise _DataError(f"{scores_path}: expected an object with a 'scores' array")
    scored = []
    try:
        for raw in doc["scores"]:
            record = DatasetRecord(
                id=str(raw["id"]),
                image=str(raw["image"]),
                mask=str(raw["mask"]),
                category=Category(raw["category"]),
            )
            scored.append((record, float(raw["score"])))
    except (KeyError, ValueError, TypeError) as exc:
        raise _DataError(f"{scores_path}: bad score entry: {exc}") from exc
    policy = CurationPolicy(easy_score_threshold=threshold, easy_fraction=easy_fraction, target_size=target)
    result = _wrap(curate, scored, policy)
    manifest = DatasetManifest(records=result.selected)
    if out:
        save_manifest(manifest, out)
    else:
        save_manifest(manifest, "/dev/stdout")
    note = " (short of target)" if result.short else ""
    click.echo(
        f"curated {len(result.selected)}/{target}: {result.hard_count} hard + {result.easy_count} easy{note}",
        err=True,
    )


@main.command("validate")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
def validate_cmd(manifest_path):
    """Check manifest records against the files on disk."""
    manifest = _wrap(load_manifest, manifest_path)
    issues = validate_manifest(manifest)
    for issue in issues:
        click.echo(f"{issue.record_id}: {issue.kind}: {issue.detail}")
    if issues:
        raise _DataError(f"{len(issues)} issue(s) found")
    click.echo(f"manifest clean: {len(manifest.records)} records")


@main.command("concord")
@click.option("--rankings", "rankings_path", required=True, type=click.Path(exists=True))
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--pred", "preds", multiple=True)
@click.option("--split", default="all", type=click.Choice(["train", "validation", "test", "all"]))
@click.option("--tie-policy", default=TIE_HALF_CREDIT, type=click.Choice([TIE_HALF_CREDIT, TIE_DISAGREE]))
def concord_cmd(rankings_path, manifest_path, preds, split, tie_policy):
    """Agreement of each metric with recorded human rankings."""
    manifest = _wrap(load_manifest, manifest_path)
    runs = _parse_preds(preds)
    rankings = _wrap(load_rankings, rankings_path)
    if not rankings:
        raise _DataError(f"{rankings_path}: no rankings")

    ranked_images = {r.image_id for r in rankings}
    records = [r for r in manifest.by_split(split) if r.id in ranked_images]
    from .mask import load_mask

    table: dict = {}
    for run in runs:
        resolved, _ = run.resolve(records)
        for record in records:
            path = resolved.get(record.id)
            if path is None:
                continue
            gt = load_mask(manifest.resolve_mask(record))
            pred = load_mask(path)
            values = {mv.metric: mv.value for mv in evaluate_all(pred, gt)}
            table.setdefault(record.id, {})[run.model_name] = values
    report = _wrap(compute_concordance, rankings, table, tie_policy)
    click.echo(f"comparable pairs: {report.comparable_pairs} (dropped {report.dropped_pairs})")
    for mid in rank_metrics(report):
        click.echo(f"{mid.value}: {report.per_metric[mid]:.4f}")


@main.command("serve")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--pred", "preds", multiple=True)
@click.option("--rankings", "rankings_path", required=True, type=click.Path())
@click.option("--split", default="test", type=click.Choice(["train", "validation", "test", "all"]))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--port", default=8008, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui-dir", default=None, type=click.Path(), help="static UI bundle to host at /")
def serve_cmd(manifest_path, preds, rankings_path, split, seed, port, host, ui_dir):
    """Run the ranking review service."""
    import uvicorn

    from .review import ReviewSession, create_app

    manifest = _wrap(load_manifest, manifest_path)
    runs = _parse_preds(preds)
    predictions = {run.model_name: Path(run.prediction_dir) for run in runs}
    session = _wrap(
        ReviewSession,
        manifest,
        predictions,
        rankings_path,
        seed=seed,
        split=None if split == "all" else split,
    )
    if ui_dir is None:
        repo_frontend = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        ui_dir = repo_frontend if repo_frontend.is_dir() else None
    app = create_app(session, ui_dir)
    click.echo(f"serving {len(session.model_names)} models on http://{host}:{port}/")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
