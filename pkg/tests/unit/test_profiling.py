"""Unit tests for MAC counting, latency and the profile table."""

import pytest
from torch import nn

from src.core.errors import UnsupportedLayer, UsageError
from src.models import BackboneId, HeadConfig, ModelSpec
from src.models.zoo import build_classifier
from src.profiling import (
    ProfileRow,
    count_macs,
    measure_inference_latency,
    read_profile_csv,
    render_markdown,
    write_profile_csv,
)
from src.profiling.table import profile_backbone


@pytest.fixture
def tiny_handle():
    spec = ModelSpec(backbone=BackboneId.TINY_CNN, head=HeadConfig.from_name("NoTop", 2), input_size=64)
    return build_classifier(spec, seed=0)


class TestCountMacs:
    """Test suite for multiply-accumulate counting."""

    def test_single_conv(self):
        conv = nn.Conv2d(3, 8, kernel_size=3, padding=1)
        assert count_macs(conv, (1, 3, 4, 4)).total_macs == 3456

    def test_single_dense(self):
        dense = nn.Linear(1024, 1024)
        assert count_macs(dense, (1, 1024)).total_macs == 1_048_576

    def test_conv_macs_scale_with_area(self):
        model = nn.Sequential(nn.Conv2d(3, 8, 3, padding=1), nn.ReLU(), nn.Conv2d(8, 4, 3, padding=1))
        small = count_macs(model, (1, 3, 8, 8)).total_macs
        large = count_macs(model, (1, 3, 16, 16)).total_macs

        assert large == 4 * small

    def test_normalization_is_free(self):
        model = nn.Sequential(nn.Conv2d(3, 8, 3, padding=1), nn.BatchNorm2d(8))
        report = count_macs(model, (1, 3, 4, 4))
        assert report.total_macs == 3456
        assert report.unsupported == []

    def test_unsupported_layer(self):
        model = nn.Sequential(nn.Conv2d(3, 4, 3), nn.PReLU())
        report = count_macs(model, (1, 3, 8, 8))
        assert report.unsupported == ["1 (PReLU)"]

        with pytest.raises(UnsupportedLayer):
            count_macs(model, (1, 3, 8, 8), strict=True)

    def test_gflops_double_gmacs(self, tiny_handle):
        report = count_macs(tiny_handle, (1, 3, 64, 64))
        assert report.total_macs > 0
        assert report.gflops == pytest.approx(2 * report.gmacs)

    def test_tiny_vit_counts_attention(self):
        spec = ModelSpec(backbone=BackboneId.TINY_VIT, head=HeadConfig.from_name("NoTop", 2), input_size=64)
        report = count_macs(build_classifier(spec, seed=0), (1, 3, 64, 64))
        assert any(name.endswith(".attention") for name in report.per_layer)
        assert report.unsupported == []

    @pytest.mark.slow
    def test_resnet50_near_published(self):
        spec = ModelSpec(backbone=BackboneId.RESNET50, head=HeadConfig.from_name("NoTop", 2), input_size=224)
        handle = build_classifier(spec, seed=0, load_pretrained=False)
        assert count_macs(handle).gmacs == pytest.approx(4.13, rel=0.10)


class TestLatency:
    """Test suite for inference timing."""

    def test_positive_median(self, tiny_handle):
        result = measure_inference_latency(tiny_handle, n_warmup=1, n_timed=10)
        assert result.sec_per_image > 0
        assert result.batch_size == 1

    def test_too_few_timed_runs(self, tiny_handle):
        with pytest.raises(UsageError):
            measure_inference_latency(tiny_handle, n_timed=5)


class TestProfileTable:
    """Test suite for profile rows and their files."""

    def test_tiny_row_has_no_published_figures(self):
        row = profile_backbone(BackboneId.TINY_CNN, input_size=64, n_warmup=1, n_timed=10)

        assert row.backbone == "TINY_CNN"
        assert row.params > 0
        assert row.infer_sec_per_image > 0
        assert row.published_params is None
        assert row.published_gmacs is None

    def test_csv_keeps_missing_values_empty(self, tmp_path):
        rows = [
            ProfileRow("TINY_CNN", 1000, 0.01, None, 0.002),
            ProfileRow("RESNET50", 23_512_130, 4.13, 12.5, 0.02, 23_520_000, 4.13),
        ]
        path = write_profile_csv(rows, tmp_path / "profile.csv")

        header, first_data_line = path.read_text().splitlines()[:2]
        assert header == "backbone,params,gmacs,train_min_per_fold,infer_sec_per_image,paper_params,paper_gmacs"
        assert first_data_line.endswith(",,")
        assert read_profile_csv(path) == rows

    def test_markdown_separates_published_columns(self):
        table = render_markdown([ProfileRow("TINY_CNN", 1_000_000, 0.01, None, 0.002)])

        assert "Published GMacs" in table
        assert "| TINY_CNN | 1.00 |  | 0.01 |  |" in table
