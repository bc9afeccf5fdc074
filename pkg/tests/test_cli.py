import json

from click.testing import CliRunner

from toonbench.cli import main
from toonbench.dataset import Category, load_manifest

from .fixture_builder import build_fixture


def _invoke(*args):
    return CliRunner().invoke(main, list(args))


class TestEval:
    def test_markdown_to_stdout(self, bench_fixture):
        res = _invoke(
            "eval",
            "--manifest", str(bench_fixture["manifest"]),
            "--pred", f"alpha={bench_fixture['preds']['alpha']}",
            "--pred", f"beta={bench_fixture['preds']['beta']}",
            "--split", "test",
        )
        assert res.exit_code == 0, res.output
        assert "| Model | Images | Pixel Accuracy |" in res.output
        assert "## overall" in res.output

    def test_json_to_file(self, bench_fixture, tmp_path):
        out = tmp_path / "report.json"
        res = _invoke(
            "eval",
            "--manifest", str(bench_fixture["manifest"]),
            "--pred", f"alpha={bench_fixture['preds']['alpha']}",
            "--format", "json",
            "--out", str(out),
            "--jobs", "2",
        )
        assert res.exit_code == 0, res.output
        doc = json.loads(out.read_text())
        assert doc["reports"][0]["model"] == "alpha"

    def test_bad_pred_spec_is_usage_error(self, bench_fixture):
        res = _invoke("eval", "--manifest", str(bench_fixture["manifest"]), "--pred", "nodir")
        assert res.exit_code == 2

    def test_no_pred_is_usage_error(self, bench_fixture):
        res = _invoke("eval", "--manifest", str(bench_fixture["manifest"]))
        assert res.exit_code == 2

    def test_missing_predictions_data_error(self, bench_fixture, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        res = _invoke(
            "eval",
            "--manifest", str(bench_fixture["manifest"]),
            "--pred", f"ghost={empty}",
        )
        assert res.exit_code == 1
        assert "no prediction" in res.output

    def test_pa_flags_change_scores(self, bench_fixture, tmp_path):
        argv = [
            "eval",
            "--manifest", str(bench_fixture["manifest"]),
            "--pred", f"beta={bench_fixture['preds']['beta']}",
            "--format", "csv",
        ]
        loose = _invoke(*argv, "--pa-delta", "255")
        strict = _invoke(*argv, "--pa-delta", "0", "--pa-erosion", "0")
        assert loose.exit_code == 0 and strict.exit_code == 0
        assert loose.output != strict.output


class TestSelect:
    def test_selects_best_on_validation(self, bench_fixture):
        res = _invoke(
            "select",
            "--manifest", str(bench_fixture["manifest"]),
            "--pred", f"alpha={bench_fixture['preds']['alpha']}",
            "--pred", f"beta={bench_fixture['preds']['beta']}",
            "--criterion", "PA",
        )
        assert res.exit_code == 0, res.output
        assert res.output.strip().endswith("selected: alpha")


class TestSplitAndValidate:
    def test_split_writes_assignments(self, tmp_path):
        from toonbench.dataset import DatasetManifest, DatasetRecord, save_manifest

        records = [
            DatasetRecord(f"{c.value}-{i}", f"i{i}.png", f"m{i}.png", c)
            for c in Category
            for i in range(5)
        ]
        path = tmp_path / "m.json"
        save_manifest(DatasetManifest(records=records), path)
        res = _invoke("split", "--manifest", str(path), "--seed", "3")
        assert res.exit_code == 0, res.output
        reloaded = load_manifest(path)
        assert reloaded.seed == 3
        assert all(r.split in ("train", "validation", "test") for r in reloaded.records)

    def test_split_twice_fails(self, tmp_path):
        from toonbench.dataset import DatasetManifest, DatasetRecord, save_manifest

        records = [
            DatasetRecord(f"{c.value}-{i}", "i.png", "m.png", c) for c in Category for i in range(2)
        ]
        path = tmp_path / "m.json"
        save_manifest(DatasetManifest(records=records), path)
        assert _invoke("split", "--manifest", str(path), "--seed", "1").exit_code == 0
        res = _invoke("split", "--manifest", str(path), "--seed", "1")
        assert res.exit_code == 1

    def test_validate_clean_and_dirty(self, tmp_path):
        fx = build_fixture(tmp_path / "fx")
        res = _invoke("validate", "--manifest", str(fx["manifest"]))
        assert res.exit_code == 0, res.output
        assert "manifest clean" in res.output
        (tmp_path / "fx" / "masks" / "reference-00.png").unlink()
        res2 = _invoke("validate", "--manifest", str(fx["manifest"]))
        assert res2.exit_code == 1
        assert "MissingFile" in res2.output


class TestCurate:
    def test_curate_scores_file(self, tmp_path):
        scores = {
            "version": 1,
            "scores": [
                {
                    "id": f"r{i:03d}",
                    "image": f"i{i}.png",
                    "mask": f"m{i}.png",
                    "category": "pose",
                    "score": 0.5 + 0.002 * i,
                }
                for i in range(100)
            ]
            + [
                {
                    "id": f"e{i:03d}",
                    "image": f"i{i}.png",
                    "mask": f"m{i}.png",
                    "category": "items",
                    "score": 0.995,
                }
                for i in range(50)
            ],
        }
        scores_path = tmp_path / "scores.json"
        scores_path.write_text(json.dumps(scores))
        out = tmp_path / "curated.json"
        res = _invoke("curate", "--scores", str(scores_path), "--target", "50", "--out", str(out))
        assert res.exit_code == 0, res.output
        assert "40 hard + 10 easy" in res.output
        curated = load_manifest(out)
        assert len(curated.records) == 50

    def test_target_too_large(self, tmp_path):
        scores_path = tmp_path / "scores.json"
        scores_path.write_text(json.dumps({"version": 1, "scores": []}))
        res = _invoke("curate", "--scores", str(scores_path), "--target", "5")
        assert res.exit_code == 1


class TestConcord:
    def test_concord_over_rankings(self, bench_fixture, tmp_path):
        from toonbench.concordance import HumanRanking, append_ranking, now_utc

        manifest = load_manifest(bench_fixture["manifest"])
        rankings = tmp_path / "r.jsonl"
        for record in manifest.by_split("test")[:3]:
            append_ranking(
                rankings, HumanRanking(record.id, "ann", ("alpha", "beta"), now_utc())
            )
        res = _invoke(
            "concord",
            "--rankings", str(rankings),
            "--manifest", str(bench_fixture["manifest"]),
            "--pred", f"alpha={bench_fixture['preds']['alpha']}",
            "--pred", f"beta={bench_fixture['preds']['beta']}",
        )
        assert res.exit_code == 0, res.output
        assert "comparable pairs: 3" in res.output
        assert "PA:" in res.output
