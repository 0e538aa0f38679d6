"""
Acceptance runs on synthetic data: overfitting, augmentation robustness, localization
and the full CLI pipeline.

Marked slow; each takes minutes on a laptop CPU.
"""

import json

import numpy as np
import pytest
import torch

from src.cli import main
from src.evaluation.sweep import read_sweep
from src.explain import grad_cam, load_mask, localization_score
from src.models import BackboneId, HeadConfig, ModelSpec
from src.models.zoo import predict_proba
from src.reporting import ExperimentPresets
from src.synth import SynthConfig, generate_synthetic_dataset
from src.training import TrainingSample, train_model
from src.training.augment import (
    augment,
    build_eval_transform,
    build_train_transform,
    load_image_tensor,
    sample_rng_state,
)
from src.training.config import AugmentationConfig, TrainPresets
from src.training.trainer import predict_samples

pytestmark = pytest.mark.slow

INPUT_SIZE = 64


@pytest.fixture(scope="module")
def sprout_set(tmp_path_factory):
    """16 sprouted and 16 unsprouted synthetic observations plus their ground truth."""
    out = tmp_path_factory.mktemp("acceptance")
    config = SynthConfig(
        n_potatoes=8, horizon_days=160, sample_interval_days=20, image_size=INPUT_SIZE, seed=5
    )
    _, records = generate_synthetic_dataset(config, out)
    sprouted = [r for r in records if r.sprouted]
    plain = [r for r in records if not r.sprouted]
    chosen = sprouted[:16] + plain[:16]
    samples = [
        TrainingSample(
            key=(r.potato_id, r.day),
            image_path=out / r.image_path,
            class_index=2 if r.sprouted else 1,
        )
        for r in chosen
    ]
    return out, records, sorted(samples, key=lambda s: s.key)


def overfit(backbone, samples, max_epochs=200, augmentation=None):
    spec = ModelSpec(backbone=backbone, head=HeadConfig.from_name("NoTop", 2), input_size=INPUT_SIZE)
    config = TrainPresets.quick_test().model_copy(
        update={
            "max_epochs": max_epochs,
            "es_patience": max_epochs,
            "lrs_patience": max_epochs,
            "label_smoothing": 0.0,
            "augmentation": augmentation or AugmentationConfig(enabled=False),
        }
    )
    handle, _ = train_model(spec, samples, samples, config, job_name=f"overfit {backbone.value}")
    return handle


def train_accuracy(handle, samples):
    proba = predict_samples(handle, samples, INPUT_SIZE)
    truth = np.array([s.class_index for s in samples])
    return float(np.mean(proba.argmax(axis=1) + 1 == truth))


@pytest.fixture(scope="module")
def cnn(sprout_set):
    _, _, samples = sprout_set
    return overfit(BackboneId.TINY_CNN, samples, augmentation=AugmentationConfig())


class TestOverfit:
    """Tiny backbones can memorize a small two-class set."""

    def test_four_images(self, sprout_set):
        _, _, samples = sprout_set
        four = [s for s in samples if s.class_index == 1][:2] + [s for s in samples if s.class_index == 2][:2]
        assert train_accuracy(overfit(BackboneId.TINY_CNN, four, max_epochs=100), four) == 1.0

    @pytest.mark.parametrize("backbone", [BackboneId.TINY_CNN, BackboneId.TINY_VIT])
    def test_thirty_two_images(self, backbone, sprout_set):
        _, _, samples = sprout_set
        assert train_accuracy(overfit(backbone, samples), samples) >= 0.95


class TestAugmentationKeepsLabels:
    """Augmented views of an unsprouted potato stay unsprouted."""

    def test_thousand_variants(self, cnn, sprout_set):
        _, _, samples = sprout_set
        sample = next(s for s in samples if s.class_index == 1)
        image = load_image_tensor(sample.image_path)
        transform = build_train_transform(AugmentationConfig(), INPUT_SIZE)

        batch = torch.stack(
            [augment(image, transform, sample_rng_state(0, epoch, sample.key)) for epoch in range(1000)]
        )
        predicted = predict_proba(cnn, batch).argmax(axis=1) + 1
        assert np.mean(predicted == 1) >= 0.9


class TestLocalization:
    """Grad-CAM of a trained sprout detector points at the sprouts."""

    def test_top_decile_inside_sprout_masks(self, cnn, sprout_set):
        root, records, _ = sprout_set
        sprouted = [r for r in records if r.sprouted][:20]
        transform = build_eval_transform(INPUT_SIZE)

        scores, baselines = [], []
        for record in sprouted:
            image = transform(load_image_tensor(root / record.image_path))
            saliency = grad_cam(cnn, image, target_class=2)
            mask = load_mask(root / record.mask_path, saliency.upsampled_map.shape)
            if not mask.any():
                continue
            scores.append(localization_score(saliency.upsampled_map, mask, top_fraction=0.1))
            baselines.append(localization_score(np.ones(mask.shape), mask, top_fraction=1.0))

        assert len(scores) >= 10
        assert np.mean(scores) > np.mean(baselines)
        assert np.mean(scores) >= 0.5


@pytest.fixture(scope="module")
def desk_dataset(tmp_path_factory):
    """Default generator (6 potatoes x 41 days) labeled into 2 shelf-life classes."""
    root = tmp_path_factory.mktemp("desk")
    data = root / "data"
    assert main(["synth", "--quiet", "--seed", "0", "--out", str(data)]) == 0
    labels = root / "labels.json"
    assert main(["label", "--quiet", "--manifest", str(data / "manifest.csv"), "--classes", "2",
                 "--out", str(labels)]) == 0
    config = ExperimentPresets.desk(n_classes=2).save_to_file(root / "experiment.yaml")
    return root, data / "manifest.csv", labels, config


def train_run(desk_dataset, name):
    root, manifest, labels, config = desk_dataset
    run = root / name
    assert main(["train", "--quiet", "--config", str(config), "--manifest", str(manifest),
                 "--labels", str(labels), "--out", str(run)]) == 0
    return json.loads((run / "metrics.json").read_text())


class TestEndToEnd:
    """Full CLI pipeline on the default synthetic generator."""

    def test_two_class_accuracy_and_repeatability(self, desk_dataset):
        first = train_run(desk_dataset, "run_a")
        second = train_run(desk_dataset, "run_b")

        assert first["n_folds"] == 5
        assert first["summary"]["accuracy"]["mean"] >= 0.90
        assert second["summary"]["accuracy"]["mean"] == pytest.approx(
            first["summary"]["accuracy"]["mean"], abs=1e-3
        )

    def test_accuracy_falls_with_more_classes(self, desk_dataset):
        root, manifest, _, config = desk_dataset
        out = root / "sweep"
        assert main(["sweep-classes", "--quiet", "--config", str(config), "--manifest", str(manifest),
                     "--min", "2", "--max", "7", "--out", str(out)]) == 0

        sweep = read_sweep(out / "sweep.csv").set_index("n_classes")
        assert list(sweep.index) == [2, 3, 4, 5, 6, 7]
        assert sweep.loc[2, "mean_accuracy"] - sweep.loc[7, "mean_accuracy"] >= 0.05
        assert (out / "plots" / "class_count_sweep.png").exists()
