"""Unit tests for the loss, schedulers, fold planning, history and augmentation."""

import math
import random

import numpy as np
import pytest
import torch

from src.core.errors import ClassTooSmall, InvalidClassIndex
from src.training.augment import augment, build_eval_transform, build_train_transform, sample_rng_state
from src.training.config import AugmentationConfig, TrainConfig, TrainPresets
from src.training.folds import FoldPlan, stratified_kfold
from src.training.history import EpochRecord, History
from src.training.losses import make_criterion, smoothed_cross_entropy, smoothed_cross_entropy_grad
from src.training.schedulers import EarlyStopState, PlateauState, early_stop_update, plateau_step
from src.models.spec import BackboneId


def _labels(per_class):
    return {(f"P{cls}_{i}", i): cls for cls, n in per_class.items() for i in range(n)}


class TestSmoothedCrossEntropy:
    """Test suite for label-smoothed cross-entropy."""

    def test_uniform_logits(self):
        assert smoothed_cross_entropy([0.0, 0.0], 0, 0.1) == pytest.approx(math.log(2), abs=1e-4)

    def test_plain_cross_entropy(self):
        assert smoothed_cross_entropy([math.log(9), 0.0], 0, 0.0) == pytest.approx(0.10536, abs=1e-5)

    def test_smoothed(self):
        assert smoothed_cross_entropy([math.log(9), 0.0], 0, 0.1) == pytest.approx(0.21521, abs=1e-5)

    def test_torch_criterion_matches(self):
        logits = torch.tensor([[math.log(9), 0.0], [0.3, -1.2]])
        targets = torch.tensor([0, 1])
        expected = np.mean([
            smoothed_cross_entropy(logits[i].numpy(), int(targets[i]), 0.1) for i in range(2)
        ])
        assert make_criterion(0.1)(logits, targets).item() == pytest.approx(expected, abs=1e-6)

    def test_smoothing_keeps_a_floor(self):
        assert smoothed_cross_entropy([50.0, 0.0, 0.0], 0, 0.1) > 0.05

    def test_gradient_matches_finite_difference(self):
        logits = np.array([0.4, -0.2, 1.1])
        grad = smoothed_cross_entropy_grad(logits, 2, 0.1)
        h = 1e-6
        for i in range(3):
            step = np.zeros(3)
            step[i] = h
            numeric = (smoothed_cross_entropy(logits + step, 2, 0.1)
                       - smoothed_cross_entropy(logits - step, 2, 0.1)) / (2 * h)
            assert grad[i] == pytest.approx(numeric, abs=1e-6)

    def test_bad_class(self):
        with pytest.raises(InvalidClassIndex):
            smoothed_cross_entropy([0.0, 0.0], 2, 0.1)


class TestPlateauScheduler:
    """Test suite for the plateau learning-rate rule."""

    def _run(self, metrics, lr=1e-3):
        state = PlateauState(lr=lr)
        for metric in metrics:
            state = plateau_step(state, metric, factor=0.5, patience=30)
        return state

    def test_halves_after_31_flat_epochs(self):
        assert self._run([1.0] + [1.0] * 31).lr == pytest.approx(5e-4)

    def test_30_flat_epochs_keep_lr(self):
        assert self._run([1.0] + [1.0] * 30).lr == pytest.approx(1e-3)

    def test_improvement_resets_counter(self):
        state = self._run([1.0] + [1.0] * 29 + [0.5])
        assert state.lr == pytest.approx(1e-3)
        assert state.epochs_since_improve == 0

    def test_two_plateaus(self):
        state = self._run([1.0] + [1.0] * 62)
        assert state.lr == pytest.approx(2.5e-4)
        assert state.reductions == 2

    def test_noise_below_threshold_is_not_improvement(self):
        state = self._run([1.0] + [1.0 - 1e-10] * 31)
        assert state.lr == pytest.approx(5e-4)


class TestEarlyStopping:
    """Test suite for early stopping."""

    def _stop_epoch(self, metrics, patience):
        state = EarlyStopState()
        for epoch, metric in enumerate(metrics, start=1):
            stop, state = early_stop_update(state, epoch, metric, patience)
            if stop:
                return epoch, state
        return None, state

    def test_monotone_never_stops(self):
        epoch, state = self._stop_epoch([1.0 / e for e in range(1, 201)], patience=100)
        assert epoch is None
        assert state.best_epoch == 200

    def test_best_at_7_stops_at_107(self):
        metrics = [1.0 - 0.1 * e for e in range(1, 8)] + [0.5] * 200
        epoch, state = self._stop_epoch(metrics, patience=100)
        assert epoch == 107
        assert state.best_epoch == 7

    def test_patience_zero(self):
        epoch, _ = self._stop_epoch([0.9, 0.8, 0.85, 0.7], patience=0)
        assert epoch == 3

    @pytest.mark.parametrize("seed", range(5))
    def test_stop_epoch_is_best_plus_patience(self, seed):
        rnd = random.Random(seed)
        metrics = [rnd.random() for _ in range(300)]
        epoch, state = self._stop_epoch(metrics, patience=20)
        assert epoch == state.best_epoch + 20


class TestFolds:
    """Test suite for stratified k-fold planning."""

    def test_one_of_each_class_per_fold(self):
        plan = stratified_kfold(_labels({1: 5, 2: 5}), k=5, seed=0)
        labels = _labels({1: 5, 2: 5})

        for fold in range(1, 6):
            assert sorted(labels[k] for k in plan.test_keys(fold)) == [1, 2]

    def test_fold_sizes(self):
        plan = stratified_kfold(_labels({1: 150, 2: 156}), k=5, seed=42)
        assert sorted(plan.fold_sizes()) == [61, 61, 61, 61, 62]

    def test_folds_partition_the_keys(self):
        labels = _labels({1: 20, 2: 13, 3: 9})
        plan = stratified_kfold(labels, k=5, seed=1)
        test_union = [k for f in range(1, 6) for k in plan.test_keys(f)]

        assert sorted(test_union) == sorted(labels)
        for f in range(1, 6):
            assert not set(plan.test_keys(f)) & set(plan.train_keys(f))

    def test_row_order_does_not_matter(self):
        labels = _labels({1: 12, 2: 12})
        shuffled = dict(reversed(list(labels.items())))
        assert stratified_kfold(labels, 4, 3) == stratified_kfold(shuffled, 4, 3)

    def test_class_too_small(self):
        with pytest.raises(ClassTooSmall):
            stratified_kfold(_labels({1: 10, 2: 3}), k=5)

    def test_plan_round_trip(self, tmp_path):
        plan = stratified_kfold(_labels({1: 6, 2: 6}), k=3, seed=5)
        assert FoldPlan.load(plan.save(tmp_path / "plan.json")) == plan


class TestHistory:
    """Test suite for training history files."""

    def test_csv_round_trip(self, tmp_path):
        history = History(best_epoch=2)
        for epoch, val_loss in enumerate([0.9, 0.4, 0.6], start=1):
            history.append(EpochRecord(epoch, 1.0 / epoch, 0.5, val_loss, 0.7, 1e-3))

        loaded = History.read_csv(history.write_csv(tmp_path / "history.csv"))
        assert loaded.epochs == 3
        assert loaded.best_epoch == 2
        assert loaded.lrs == [1e-3] * 3

    def test_replayed_best_epoch_ignores_sub_threshold_gains(self, tmp_path):
        history = History()
        for epoch, val_loss in enumerate([0.05, 0.049999999, 0.07], start=1):
            history.append(EpochRecord(epoch, 1.0, 0.5, val_loss, 0.7, 1e-3))
        path = history.write_csv(tmp_path / "history.csv")

        assert History.read_csv(path).best_epoch == 1
        assert History.read_csv(path, best_epoch=3).best_epoch == 3


class TestAugmentation:
    """Test suite for the augmentation pipeline."""

    def test_identity_is_deterministic_resize(self):
        image = torch.randint(0, 255, (3, 80, 80), dtype=torch.uint8)
        transform = build_train_transform(AugmentationConfig(enabled=False), 64)
        out = augment(image, transform, 1)

        assert out.shape == (3, 64, 64)
        assert torch.equal(out, build_eval_transform(64)(image))

    def test_same_state_same_output(self):
        image = torch.randint(0, 255, (3, 80, 80), dtype=torch.uint8)
        transform = build_train_transform(AugmentationConfig(), 64)
        state = sample_rng_state(42, 3, ("P001", 10))
        assert torch.equal(augment(image, transform, state), augment(image, transform, state))

    def test_rng_state_depends_on_epoch_and_key(self):
        assert sample_rng_state(42, 1, ("P001", 0)) != sample_rng_state(42, 2, ("P001", 0))
        assert sample_rng_state(42, 1, ("P001", 0)) != sample_rng_state(42, 1, ("P001", 5))


class TestTrainConfig:
    """Test suite for training presets."""

    def test_published_defaults(self):
        config = TrainPresets.published()
        assert (config.max_epochs, config.batch_size, config.input_size) == (500, 16, 224)
        assert (config.lrs_patience, config.es_patience, config.lrs_factor) == (30, 100, 0.5)
        assert config.label_smoothing == 0.1

    def test_learning_rate_per_family(self):
        assert TrainConfig().resolved_lr(BackboneId.RESNET50) == 1e-3
        assert TrainConfig().resolved_lr(BackboneId.VIT_B16) == 1e-4
        assert TrainConfig(learning_rate=5e-4).resolved_lr(BackboneId.VIT_B16) == 5e-4
