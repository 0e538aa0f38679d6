"""Unit tests for the command-line entry point."""

import json

import pytest

from src.cli import main
from src.reporting import ExperimentPresets
from tests.conftest import write_image


class TestCliErrors:
    """Test suite for exit codes and error lines."""

    def test_unsupported_class_count_is_usage_error(self, tmp_path, capsys):
        code = main(["label", "--manifest", str(tmp_path / "manifest.csv"), "--classes", "9",
                     "--out", str(tmp_path / "labels.json")])

        assert code == 2
        assert capsys.readouterr().err.startswith("error: UnsupportedClassCount:")

    def test_missing_manifest_is_data_error(self, tmp_path, capsys):
        code = main(["label", "--manifest", str(tmp_path / "manifest.csv"), "--out", str(tmp_path / "l.json")])

        assert code == 3
        err = capsys.readouterr().err
        assert err.startswith("error: MissingArtifacts:")
        assert len(err.strip().splitlines()) == 1

    def test_unknown_backbone(self, tmp_path, capsys):
        code = main(["profile", "--backbones", "ALEXNET", "--out", str(tmp_path / "p.csv")])

        assert code == 2
        assert "UsageError" in capsys.readouterr().err

    def test_invalid_config_value(self, tmp_path, capsys):
        config = tmp_path / "experiment.yaml"
        config.write_text("n_classes: 12\n")
        code = main(["train", "--config", str(config), "--manifest", "m.csv", "--labels", "l.json"])

        assert code == 2
        assert capsys.readouterr().err.startswith("error: UsageError: n_classes")

    def test_missing_arguments_are_one_line(self, capsys):
        assert main(["train"]) == 2
        err = capsys.readouterr().err
        assert err.startswith("error: UsageError: tuber train:")
        assert err.count("\n") == 1

    def test_unknown_flag_is_one_line(self, tmp_path, capsys):
        code = main(["label", "--manifest", str(tmp_path / "manifest.csv"), "--out",
                     str(tmp_path / "labels.json"), "--colour", "red"])

        assert code == 2
        err = capsys.readouterr().err
        assert err.startswith("error: UsageError:")
        assert "--colour" in err
        assert err.count("\n") == 1
        assert "usage:" not in err


class TestCropTrays:
    """Test suite for `crop-trays`."""

    def test_writes_tiles(self, tmp_path):
        image = write_image(tmp_path / "tray.png", (60, 40))
        out = tmp_path / "tiles"

        assert main(["crop-trays", "--image", str(image), "--rows", "2", "--cols", "3", "--out", str(out)]) == 0
        assert len(list(out.glob("tray_r*c*.png"))) == 6


class TestPipelineSmoke:
    """synth -> label -> train -> evaluate -> report -> explain on a tiny dataset."""

    def test_end_to_end(self, tmp_path):
        data = tmp_path / "data"
        assert main(["synth", "--preset", "tiny", "--seed", "0", "--out", str(data)]) == 0
        assert (data / "manifest.csv").exists()

        labels = tmp_path / "labels.json"
        assert main(["label", "--manifest", str(data / "manifest.csv"), "--sprout", "--out", str(labels)]) == 0

        config = ExperimentPresets.quick_test("sprout")
        config = config.model_copy(
            update={"train": config.train.model_copy(update={"max_epochs": 1, "k_folds": 2})}
        )
        config_path = config.save_to_file(tmp_path / "experiment.yaml")

        run = tmp_path / "run"
        assert main(["train", "--quiet", "--config", str(config_path), "--manifest", str(data / "manifest.csv"),
                     "--labels", str(labels), "--out", str(run)]) == 0
        metrics = json.loads((run / "metrics.json").read_text())
        assert metrics["n_folds"] == 2
        assert (run / "folds" / "fold_1" / "predictions.csv").exists()

        assert main(["evaluate", "--quiet", "--run", str(run)]) == 0
        assert (run / "plots" / "accuracy_by_fold.png").exists()

        assert main(["report", "--quiet", "--run", str(run)]) == 0
        assert "## Cross-validation summary" in (run / "report.md").read_text()

        image = sorted((data / "images").glob("*.png"))[-1]
        assert main(["explain", "--quiet", "--run", str(run), "--fold", "1", "--image", str(image),
                     "--class", "2"]) == 0
        assert (run / "heatmaps" / f"{image.stem}_2.png").exists()
