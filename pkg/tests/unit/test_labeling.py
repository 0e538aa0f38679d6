"""Unit tests for weight loss, shelf life, class schemes, labeling and holdout splits."""

from collections import Counter

import numpy as np
import pytest

from src.core.errors import (
    ClassTooSmall,
    MissingArtifacts,
    MissingSproutLabel,
    NonPositiveInitialWeight,
    UnsupportedClassCount,
)
from src.data.manifest import DatasetManifest, PotatoObservation, WeightTrajectory, load_manifest
from src.data.splits import holdout_split
from src.labeling.class_scheme import assign_class, build_class_scheme
from src.labeling.labeler import class_summary, label_dataset, load_labels, write_labels
from src.labeling.weight_loss import (
    ShelfLifeEstimate,
    cumulative_weight_loss,
    estimate_shelf_life,
    remaining_shelf_life,
)
from src.synth.config import SynthConfig
from src.synth.trajectory import simulate_weight_trajectory


def _trajectory(*points):
    return WeightTrajectory(potato_id="P1", points=tuple(points))


def _balanced_manifest(per_class, n_classes=2):
    return _manifest({cls: per_class for cls in range(1, n_classes + 1)})


def _manifest(sizes):
    observations, labels = [], {}
    for cls, size in sizes.items():
        for i in range(size):
            obs = PotatoObservation(potato_id=f"C{cls}_{i}", day=0, image_ref="x.png", weight_g=100)
            observations.append(obs)
            labels[obs.key] = cls
    return DatasetManifest(root_dir=".", observations=observations), labels


class TestWeightLoss:
    """Test suite for cumulative weight loss."""

    @pytest.mark.parametrize(
        "w0, wt, expected",
        [(100, 90, 10.0), (150, 150, 0.0), (200, 187.5, 6.25)],
    )
    def test_values(self, w0, wt, expected):
        assert cumulative_weight_loss(w0, wt) == pytest.approx(expected)

    def test_weight_gain_is_negative(self):
        assert cumulative_weight_loss(100, 101) == pytest.approx(-1.0)

    def test_non_positive_w0(self):
        with pytest.raises(NonPositiveInitialWeight):
            cumulative_weight_loss(0, 10)


class TestShelfLife:
    """Test suite for threshold interpolation."""

    def test_interpolated_crossing(self):
        estimate = estimate_shelf_life(_trajectory((0, 100), (10, 96), (20, 89)))

        assert estimate.shelf_life_day == pytest.approx(18.571, abs=1e-3)
        assert not estimate.censored

    def test_boundary_hit(self):
        estimate = estimate_shelf_life(_trajectory((0, 100), (5, 90)))
        assert estimate.shelf_life_day == 5.0

    def test_censored(self):
        estimate = estimate_shelf_life(_trajectory((0, 100), (10, 95), (20, 91)))

        assert estimate.censored
        assert estimate.shelf_life_day is None
        assert remaining_shelf_life(estimate, 10) is None

    @pytest.mark.parametrize(
        "shelf_life_day, current_day, expected",
        [(121.0, 121, 0), (50.0, 30, 20), (18.571, 10, 8), (40.0, 55, 0)],
    )
    def test_remaining(self, shelf_life_day, current_day, expected):
        estimate = ShelfLifeEstimate("P1", shelf_life_day, False)
        assert remaining_shelf_life(estimate, current_day) == expected

    def test_matches_day_by_day_scan(self):
        config = SynthConfig(n_potatoes=100, horizon_days=120, sample_interval_days=7, seed=11)
        for index in range(config.n_potatoes):
            trajectory = simulate_weight_trajectory(config, index)
            days = np.asarray(trajectory.days, dtype=float)
            weights = np.asarray(trajectory.weights, dtype=float)
            grid = np.arange(days[0], days[-1] + 0.0005, 0.001)
            losses = (weights[0] - np.interp(grid, days, weights)) * 100.0 / weights[0]
            hits = np.nonzero(losses >= 10.0)[0]

            estimate = estimate_shelf_life(trajectory)
            if hits.size == 0:
                assert estimate.censored
                continue
            assert estimate.shelf_life_day == pytest.approx(grid[hits[0]], abs=0.01)

    def test_crossing_lies_between_bracketing_days(self):
        config = SynthConfig(n_potatoes=30, horizon_days=200, sample_interval_days=9, seed=2)
        for index in range(config.n_potatoes):
            trajectory = simulate_weight_trajectory(config, index)
            estimate = estimate_shelf_life(trajectory)
            if estimate.censored:
                continue
            losses = [cumulative_weight_loss(trajectory.w0, w) for w in trajectory.weights]
            first = next(i for i, loss in enumerate(losses) if loss >= 10.0)
            days = trajectory.days
            assert days[max(first - 1, 0)] <= estimate.shelf_life_day <= days[first]


class TestClassScheme:
    """Test suite for equal-width class bins."""

    def test_five_class_edges(self):
        assert build_class_scheme(5).edges == (2.5, 5.0, 7.5, 10.0)

    def test_two_class_edges(self):
        assert build_class_scheme(2).edges == (10.0,)

    def test_seven_class_edges_are_exact(self):
        edges = build_class_scheme(7).edges
        assert edges == pytest.approx(tuple(10 * k / 6 for k in range(1, 7)))
        assert edges[-1] == 10.0

    @pytest.mark.parametrize("n", [1, 9, 0])
    def test_unsupported(self, n):
        with pytest.raises(UnsupportedClassCount) as exc:
            build_class_scheme(n)
        assert exc.value.exit_code == 2

    @pytest.mark.parametrize(
        "n, loss, expected",
        [(5, 6.0, 3), (3, 0.0, 1), (4, 10.0, 4), (5, 2.5, 2), (5, -0.3, 1), (5, 37.0, 5)],
    )
    def test_assign(self, n, loss, expected):
        assert assign_class(build_class_scheme(n), loss) == expected

    def test_class_names(self):
        assert build_class_scheme(5).class_names() == ["0-2.5", "2.5-5", "5-7.5", "7.5-10", ">=10"]

    @pytest.mark.parametrize("n", range(2, 9))
    def test_classes_partition_the_loss_axis(self, n):
        scheme = build_class_scheme(n)
        for loss in np.round(np.arange(0.0, 20.0 + 1e-9, 0.01), 2):
            matches = [k for k in range(1, n + 1)
                       if scheme.class_range(k)[0] <= loss < scheme.class_range(k)[1]]
            assert matches == [assign_class(scheme, loss)]

    @pytest.mark.parametrize("n", range(2, 9))
    def test_assignment_is_monotone(self, n):
        scheme = build_class_scheme(n)
        classes = [assign_class(scheme, v) for v in np.round(np.arange(0.0, 20.0 + 1e-9, 0.01), 2)]
        assert all(a <= b for a, b in zip(classes, classes[1:]))
        assert classes[0] == 1
        assert classes[-1] == n

    def test_final_class_is_the_same_for_every_n(self):
        for loss in (10.0, 10.01, 15.0, 40.0):
            assert all(assign_class(build_class_scheme(n), loss) == n for n in range(2, 9))


class TestLabeler:
    """Test suite for dataset labeling."""

    def test_shelf_life_labels(self, three_day_manifest):
        samples = label_dataset(load_manifest(three_day_manifest), build_class_scheme(5))

        assert [s.class_index for s in samples] == [1, 2, 5]
        assert samples[1].weight_loss_pct == pytest.approx(4.0)
        assert [s.remaining_days for s in samples] == [18, 8, 0]
        assert all(s.scheme_n == 5 for s in samples)

    def test_sprout_labels(self, three_day_manifest):
        samples = label_dataset(load_manifest(three_day_manifest), build_class_scheme(2), sprout_mode=True)
        assert [s.class_index for s in samples] == [1, 1, 2]

    def test_sprout_label_required(self, tmp_path):
        manifest = DatasetManifest(
            root_dir=tmp_path,
            observations=[
                PotatoObservation(potato_id="P1", day=0, image_ref="a.png", weight_g=100, sprout_label=False),
                PotatoObservation(potato_id="P1", day=5, image_ref="b.png", weight_g=99),
            ],
        )
        with pytest.raises(MissingSproutLabel):
            label_dataset(manifest, build_class_scheme(2), sprout_mode=True)

    def test_class_summary_ranges(self, three_day_manifest):
        samples = label_dataset(load_manifest(three_day_manifest), build_class_scheme(5))
        rows = class_summary(samples, 5)

        assert [r["count"] for r in rows] == [1, 1, 0, 0, 1]
        assert rows[0]["remaining_min"] == rows[0]["remaining_max"] == 18
        assert rows[2]["loss_min"] is None

    def test_labels_round_trip(self, three_day_manifest, tmp_path):
        samples = label_dataset(load_manifest(three_day_manifest), build_class_scheme(5))
        path = write_labels(samples, tmp_path / "labels.json")
        assert load_labels(path) == samples

    def test_missing_labels_file(self, tmp_path):
        with pytest.raises(MissingArtifacts):
            load_labels(tmp_path / "labels.json")

    def test_synthetic_labels_cover_every_observation(self, tiny_dataset):
        manifest, records = tiny_dataset
        samples = label_dataset(manifest, build_class_scheme(5))

        assert len(samples) == len(records)
        truth = {(r.potato_id, r.day): r for r in records}
        for sample in samples:
            assert sample.weight_loss_pct == pytest.approx(truth[sample.key].weight_loss_pct)


class TestHoldoutSplit:
    """Test suite for stratified holdout splits."""

    def test_balanced_one_per_class(self):
        manifest, labels = _balanced_manifest(5)
        split = holdout_split(manifest, 0.2, seed=3, stratify_by=labels)

        assert len(split.test_ids) == 2
        assert sorted(labels[k] for k in split.test_ids) == [1, 2]
        assert not split.train_ids & split.test_ids

    def test_full_dataset_sized_split(self):
        manifest, labels = _balanced_manifest(153)
        split = holdout_split(manifest, 0.166, seed=0, stratify_by=labels)

        assert len(split.train_ids) == 255
        assert len(split.test_ids) == 51

    def test_same_seed_same_split(self):
        manifest, labels = _balanced_manifest(10)
        first = holdout_split(manifest, 0.3, seed=7, stratify_by=labels)
        second = holdout_split(manifest, 0.3, seed=7, stratify_by=labels)
        assert first == second

    def test_class_too_small(self):
        manifest, labels = _balanced_manifest(1)
        with pytest.raises(ClassTooSmall):
            holdout_split(manifest, 0.5, seed=0, stratify_by=labels)

    def test_unbalanced_classes_keep_their_share(self):
        manifest, labels = _manifest({1: 50, 2: 7, 3: 23})
        split = holdout_split(manifest, 0.2, seed=1, stratify_by=labels)

        assert Counter(labels[k] for k in split.test_ids) == {1: 10, 2: 1, 3: 5}
        assert len(split.test_ids) == 16

    @pytest.mark.parametrize("seed", range(5))
    @pytest.mark.parametrize("fraction", [0.1, 0.25, 0.4])
    def test_per_class_counts_within_one_of_exact_share(self, seed, fraction):
        sizes = {1: 41, 2: 9, 3: 17, 4: 3}
        manifest, labels = _manifest(sizes)
        split = holdout_split(manifest, fraction, seed=seed, stratify_by=labels)
        held_out = Counter(labels[k] for k in split.test_ids)

        assert len(split.test_ids) == int(np.floor(sum(sizes.values()) * fraction + 0.5))
        for cls, size in sizes.items():
            assert abs(held_out[cls] - size * fraction) <= 1
            assert held_out[cls] < size
        assert split.train_ids | split.test_ids == set(labels)
