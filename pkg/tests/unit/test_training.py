"""Unit tests for training, cross-validation, holdout and grid search."""

import json
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

from src.core.errors import GridTooLarge, LabelOutOfRange, UsageError
from src.evaluation.aggregate import CVSummary, MetricSummary
from src.labeling.class_scheme import build_class_scheme
from src.labeling.labeler import label_dataset
from src.models import BackboneId, HeadConfig, ModelSpec
from src.training import (
    TrainPresets,
    cross_validate,
    expand_grid,
    fold_dir,
    grid_search,
    holdout_validate,
    load_metrics,
    samples_from_labels,
    train_model,
)
from src.models.zoo import load_model
from src.training.cross_validation import split_validation
from src.training.data import TrainingSample
from src.training.grid_search import GridPointResult, apply_grid_point, select_best
from src.training.trainer import predict_samples


@pytest.fixture(scope="module")
def sprout_samples(tiny_dataset):
    manifest, _ = tiny_dataset
    labels = label_dataset(manifest, build_class_scheme(2), sprout_mode=True)
    return samples_from_labels(labels, manifest.root_dir)


@pytest.fixture
def spec():
    return ModelSpec(backbone=BackboneId.TINY_CNN, head=HeadConfig.from_name("NoTop", 2), input_size=64)


@pytest.fixture
def config():
    return TrainPresets.quick_test().model_copy(update={"k_folds": 2})


def _point(index, mean, std):
    return GridPointResult(
        index=index,
        params={"head": "NoTop"},
        summary=CVSummary(n_folds=5, metrics={"accuracy": MetricSummary(mean, std)}),
        head_label="NoTop-2",
    )


class TestTrainModel:
    """Test suite for single-model training."""

    def test_history_and_callbacks(self, spec, config, sprout_samples):
        seen = []

        def callback(job, epoch, stats):
            seen.append((job, epoch, sorted(stats)))

        handle, history = train_model(
            spec, sprout_samples[:24], sprout_samples[24:], config,
            job_name="unit", progress_callback=callback,
        )

        assert 1 <= history.epochs <= config.max_epochs
        assert history.stop_reason in ("early_stop", "max_epochs")
        assert 1 <= history.best_epoch <= history.epochs
        assert [epoch for _, epoch, _ in seen] == list(range(1, history.epochs + 1))
        assert seen[0][2] == sorted(
            ["train_loss", "train_acc", "val_loss", "val_acc", "lr", "best_epoch", "elapsed_time"]
        )
        assert handle.metadata["best_epoch"] == history.best_epoch

    def test_failing_callback_does_not_stop_training(self, spec, config, sprout_samples):
        def callback(job, epoch, stats):
            raise RuntimeError("dashboard gone")

        _, history = train_model(spec, sprout_samples, [], config, progress_callback=callback)
        assert history.epochs >= 1

    def test_input_size_mismatch(self, spec, sprout_samples):
        with pytest.raises(UsageError):
            train_model(spec, sprout_samples, [], TrainPresets.desk())

    def test_label_out_of_range(self, spec, config, sprout_samples):
        bad = TrainingSample(key=("X", 0), image_path=sprout_samples[0].image_path, class_index=3)
        with pytest.raises(LabelOutOfRange):
            train_model(spec, list(sprout_samples) + [bad], [], config)


class TestCrossValidation:
    """Test suite for k-fold runs."""

    def test_artifacts_and_partition(self, spec, config, sprout_samples, tmp_path):
        result = cross_validate(spec, sprout_samples, config, tmp_path)

        assert [f.fold for f in result.folds] == [1, 2]
        tested = sorted(k for f in result.folds for k in f.predictions.keys)
        assert tested == sorted(s.key for s in sprout_samples)
        for fold in (1, 2):
            for name in ("checkpoint.bin", "history.csv", "confusion.csv", "predictions.csv"):
                assert (fold_dir(tmp_path, fold) / name).exists()
        assert (tmp_path / "folds" / "plan.json").exists()

        metrics = load_metrics(tmp_path)
        assert metrics["mode"] == "cv"
        assert metrics["n_folds"] == 2
        assert set(metrics["summary"]) >= {"accuracy", "f1_weighted", "mcc"}

    def test_validation_comes_from_training_folds(self, spec, config, sprout_samples, tmp_path):
        result = cross_validate(spec, sprout_samples, config, tmp_path, keep_models=False)

        for fold in result.folds:
            assert fold.validation == "inner_split"
            assert fold.n_val > 0
            assert fold.n_train + fold.n_val + fold.n_test == len(sprout_samples)
        assert {f["validation"] for f in load_metrics(tmp_path)["per_fold"]} == {"inner_split"}

    def test_reloaded_checkpoint_reproduces_fold_accuracy(self, spec, config, sprout_samples, tmp_path):
        result = cross_validate(spec, sprout_samples, config, tmp_path, keep_models=False)
        fold = result.folds[0]
        by_key = {s.key: s for s in sprout_samples}
        test_samples = [by_key[key] for key in fold.predictions.keys]

        handle = load_model(fold_dir(tmp_path, 1) / "checkpoint.bin")
        proba = predict_samples(handle, test_samples, config.input_size)
        predicted = proba.argmax(axis=1) + 1
        truth = np.array([s.class_index for s in test_samples])

        assert float((predicted == truth).mean()) == pytest.approx(fold.report.accuracy)

    def test_row_order_does_not_change_folds(self, spec, config, sprout_samples, tmp_path):
        first = cross_validate(spec, sprout_samples, config, tmp_path / "a", keep_models=False)
        second = cross_validate(spec, list(reversed(sprout_samples)), config, tmp_path / "b", keep_models=False)
        assert first.plan == second.plan

    def test_holdout(self, spec, config, sprout_samples, tiny_dataset, tmp_path):
        manifest, _ = tiny_dataset
        result = holdout_validate(spec, sprout_samples, manifest, config, tmp_path, test_fraction=0.25)

        assert result.mode == "holdout"
        assert result.summary.single_fold
        assert result.summary.std() == 0.0
        split = json.loads((tmp_path / "folds" / "split.json").read_text())
        assert len(split["test"]) + len(split["train"]) == len(sprout_samples)
        assert load_metrics(tmp_path)["test_fraction"] == 0.25


class TestGridSearch:
    """Test suite for hyperparameter grids."""

    def test_expand_counts(self):
        grid = {"head": ["NoTop", "1024", "1024-1024", "1024-1024-1024"], "learning_rate": [1e-3, 1e-4]}
        points = expand_grid(grid)

        assert len(points) == 8
        assert points[0] == {"head": "NoTop", "learning_rate": 1e-3}
        assert points[1] == {"head": "NoTop", "learning_rate": 1e-4}

    def test_cap(self):
        with pytest.raises(GridTooLarge):
            expand_grid({"a": list(range(10)), "b": list(range(10))}, cap=64)

    def test_empty(self):
        with pytest.raises(UsageError):
            expand_grid({"head": []})

    def test_tie_break_prefers_lower_std(self):
        assert select_best([_point(1, 0.9, 0.02), _point(2, 0.9, 0.01)]).index == 2

    def test_tie_break_then_grid_order(self):
        assert select_best([_point(1, 0.9, 0.01), _point(2, 0.9, 0.01)]).index == 1

    def test_single_point(self):
        assert select_best([_point(1, 0.5, 0.1)]).index == 1

    def test_apply_point(self, spec, config):
        new_spec, new_config = apply_grid_point(
            spec, config, {"head": "1024", "dropout_rate": 0.3, "learning_rate": 1e-4, "batch_size": 4}
        )

        assert new_spec.head.hidden_widths == (1024,)
        assert new_spec.head.dropout_rate == 0.3
        assert new_spec.n_classes == 2
        assert (new_config.learning_rate, new_config.batch_size) == (1e-4, 4)

    def test_unknown_key(self, spec, config):
        with pytest.raises(UsageError):
            apply_grid_point(spec, config, {"momentum": 0.9})

    def test_search_writes_table_and_best_folds(self, spec, config, sprout_samples, tmp_path):
        config = config.model_copy(update={"max_epochs": 1})
        result = grid_search(spec, {"head": ["NoTop", "1024"]}, sprout_samples, config, tmp_path)

        assert len(result.points) == 2
        assert [p.head_label for p in result.points] == ["NoTop-2", "1024-2"]
        assert (tmp_path / "grid_results.csv").exists()
        assert (tmp_path / "grid" / "point_2" / "metrics.json").exists()
        assert fold_dir(tmp_path, 1).joinpath("predictions.csv").exists()
        assert load_metrics(tmp_path)["summary"]["accuracy"]["mean"] == pytest.approx(result.best.mean_accuracy)


class TestValidationSplit:
    """Test suite for the validation set carved from the training folds."""

    @staticmethod
    def _samples(sizes):
        samples = []
        for cls, n in sizes.items():
            samples += [TrainingSample(key=(f"C{cls}_{i}", 0), image_path=Path(f"C{cls}_{i}.png"), class_index=cls)
                        for i in range(n)]
        return samples

    def test_inner_split_is_stratified_and_disjoint(self, config):
        train = self._samples({1: 30, 2: 10})
        fit, val, source = split_validation(train, [], config.model_copy(update={"validation_fraction": 0.1}))

        assert source == "inner_split"
        assert not {s.key for s in fit} & {s.key for s in val}
        assert len(fit) + len(val) == len(train)
        assert Counter(s.class_index for s in val) == {1: 3, 2: 1}

    def test_zero_fraction_monitors_test_fold(self, config):
        train, test = self._samples({1: 10, 2: 10}), self._samples({1: 2})

        fit, val, source = split_validation(train, test, config.model_copy(update={"validation_fraction": 0.0}))

        assert source == "test_fold"
        assert fit == train
        assert val == test

    def test_tiny_class_falls_back_to_test_fold(self, config):
        train, test = self._samples({1: 10, 2: 1}), self._samples({2: 2})

        _, val, source = split_validation(train, test, config)

        assert source == "test_fold"
        assert val == test

    def test_same_seed_same_split(self, config):
        train = self._samples({1: 20, 2: 20})
        first = split_validation(train, [], config)[1]
        second = split_validation(list(reversed(train)), [], config)[1]
        assert [s.key for s in first] == [s.key for s in second]
