"""Unit tests for the synthetic dataset generator."""

import numpy as np
import pytest
from scipy import ndimage

from src.core.config import settings
from src.labeling.weight_loss import estimate_shelf_life
from src.synth import (
    AgeState,
    SynthConfig,
    SynthPresets,
    draw_potato_params,
    generate_synthetic_dataset,
    load_ground_truth,
    render_potato_image,
    simulate_weight_trajectory,
    sprout_state,
)
from src.synth.render import WRINKLE_COLOR


class TestWeightModel:
    """Test suite for simulated weight trajectories."""

    def test_linear_model_without_noise(self):
        config = SynthConfig(
            initial_weight_g=100.0,
            initial_weight_jitter_g=0.0,
            base_loss_rate_pct_per_day=0.1,
            loss_rate_jitter=0.0,
            noise_pct=0.0,
            horizon_days=200,
            sample_interval_days=10,
        )
        trajectory = simulate_weight_trajectory(config, 0)
        weights = dict(trajectory.points)

        assert weights[100] == pytest.approx(90.0)
        assert estimate_shelf_life(trajectory).shelf_life_day == pytest.approx(100.0)

    def test_deterministic_per_seed_and_index(self):
        config = SynthPresets.desk()
        assert simulate_weight_trajectory(config, 3) == simulate_weight_trajectory(config, 3)
        assert simulate_weight_trajectory(config, 3) != simulate_weight_trajectory(config, 4)

    def test_weights_strictly_decrease(self):
        config = SynthPresets.long_storage()
        for index in range(config.n_potatoes):
            weights = simulate_weight_trajectory(config, index).weights
            assert all(b < a for a, b in zip(weights, weights[1:]))

    def test_most_potatoes_reach_threshold(self):
        config = SynthConfig(n_potatoes=50)
        reached = sum(
            not estimate_shelf_life(simulate_weight_trajectory(config, i)).censored for i in range(50)
        )
        assert reached >= 45

    def test_rejects_rates_that_empty_the_potato(self):
        with pytest.raises(ValueError):
            SynthConfig(base_loss_rate_pct_per_day=0.6, loss_rate_jitter=0.0, horizon_days=200)


class TestRender:
    """Test suite for potato image rendering."""

    def test_no_sprouts_gives_empty_mask(self):
        image, mask = render_potato_image(AgeState(weight_loss_pct=3.0), seed=1, size=128)

        assert image.size == (128, 128)
        assert not mask.any()

    def test_short_sprout_still_marks_the_mask(self):
        _, mask = render_potato_image(
            AgeState(weight_loss_pct=2.0, sprout_count=2, sprout_length=0.3), seed=4, size=128
        )
        assert mask.any()

    def test_three_sprouts_three_components(self):
        _, mask = render_potato_image(
            AgeState(weight_loss_pct=5.0, sprout_count=3, sprout_length=20.0), seed=11, size=250
        )
        _, n_components = ndimage.label(mask, structure=np.ones((3, 3)))
        assert n_components == 3

    def test_wrinkles_grow_with_loss(self):
        def wrinkle_pixels(loss):
            image, _ = render_potato_image(AgeState(weight_loss_pct=loss), seed=5, size=250)
            return int(np.all(np.asarray(image) == WRINKLE_COLOR, axis=-1).sum())

        assert wrinkle_pixels(12.0) > wrinkle_pixels(0.0)

    def test_same_seed_same_pixels(self):
        state = AgeState(weight_loss_pct=4.0, sprout_count=2, sprout_length=12.0)
        first, _ = render_potato_image(state, seed=9, size=96)
        second, _ = render_potato_image(state, seed=9, size=96)
        assert np.array_equal(np.asarray(first), np.asarray(second))


class TestSproutState:
    """Test suite for sprout onset and growth."""

    def test_monotone_in_day(self):
        config = SynthConfig()
        params = draw_potato_params(config, 0)
        states = [sprout_state(config, params, day) for day in config.days]

        counts = [c for c, _ in states]
        lengths = [length for _, length in states]
        assert counts == sorted(counts)
        assert lengths == sorted(lengths)
        assert counts[0] == 0


class TestGenerator:
    """Test suite for dataset generation."""

    def test_observation_count(self, tmp_path):
        config = SynthConfig(n_potatoes=2, image_size=64)
        manifest, records = generate_synthetic_dataset(config, tmp_path, max_workers=1)

        assert len(manifest.observations) == 2 * 41
        assert len(records) == 2 * 41
        assert (tmp_path / "manifest.csv").exists()
        assert load_ground_truth(tmp_path / "ground_truth.json") == records

    def test_default_plan_has_246_observations(self):
        assert SynthConfig().n_potatoes * len(SynthConfig().days) == 246

    def test_files_on_disk(self, tiny_dataset):
        manifest, records = tiny_dataset
        root = manifest.root_dir

        for record in records:
            assert (root / record.image_path).exists()
            assert (root / record.mask_path).exists()

    def test_sprout_label_matches_mask(self, tiny_dataset):
        manifest, records = tiny_dataset
        labels = {obs.key: obs.sprout_label for obs in manifest.observations}

        assert any(r.sprouted for r in records)
        assert any(not r.sprouted for r in records)
        for record in records:
            assert labels[(record.potato_id, record.day)] == (record.sprout_count > 0)

    def test_different_seeds_differ(self, tmp_path):
        config_a = SynthPresets.tiny(seed=1).model_copy(update={"n_potatoes": 1})
        config_b = SynthPresets.tiny(seed=2).model_copy(update={"n_potatoes": 1})
        generate_synthetic_dataset(config_a, tmp_path / "a", max_workers=1)
        generate_synthetic_dataset(config_b, tmp_path / "b", max_workers=1)

        a = (tmp_path / "a" / "images" / "P001_0.png").read_bytes()
        b = (tmp_path / "b" / "images" / "P001_0.png").read_bytes()
        assert a != b

    def test_uses_settings_worker_count(self, tmp_path, monkeypatch):
        monkeypatch.setattr(settings, "max_parallel_jobs", 2)
        manifest, _ = generate_synthetic_dataset(
            SynthPresets.tiny().model_copy(update={"n_potatoes": 2}), tmp_path
        )
        assert manifest.potato_ids() == ["P001", "P002"]
