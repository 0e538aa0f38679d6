"""Unit tests for the model zoo."""

import pytest
import torch
from torch import nn

from src.core.errors import CorruptCheckpoint, InvalidHead, ShapeMismatch
from src.models import BackboneId, HeadConfig, ModelSpec
from src.models.heads import ClassifierHead
from src.models.registry import registry
from src.models.tiny import DenseBlock, ResidualBlock, SelfAttention
from src.models.zoo import (
    build_classifier,
    count_parameters,
    count_trainable_parameters,
    load_model,
    predict_proba,
    read_checkpoint_metadata,
    save_model,
)


def tiny_spec(backbone=BackboneId.TINY_CNN, head="1024-1024", n_classes=3, input_size=64):
    return ModelSpec(
        backbone=backbone,
        head=HeadConfig.from_name(head, n_classes),
        input_size=input_size,
    )


class TestHeads:
    """Test suite for classifier heads."""

    def test_dense_layer_parameter_count(self):
        assert count_parameters(nn.Linear(1024, 1024)) == 1_049_600

    def test_notop_feeds_output_layer_directly(self):
        head = ClassifierHead(128, HeadConfig.from_name("NoTop", 2))

        assert len(head.hidden) == 0
        assert head.out.in_features == 128
        assert head.out.out_features == 2

    def test_hidden_layers(self):
        head = ClassifierHead(128, HeadConfig.from_name("1024-1024", 5))
        kinds = [type(m).__name__ for m in head.hidden]

        assert kinds == ["Linear", "BatchNorm1d", "ReLU", "Dropout"] * 2
        assert head.out.out_features == 5

    def test_labels(self):
        assert HeadConfig.from_name("NoTop", 4).label == "NoTop-4"
        assert HeadConfig.from_name("1024-1024", 2).label == "1024-1024-2"

    def test_unknown_head(self):
        with pytest.raises(InvalidHead):
            HeadConfig.from_name("2048", 2)
        with pytest.raises(InvalidHead):
            HeadConfig(hidden_widths=(512,))


class TestModelSpec:
    """Test suite for spec validation and freezing policy."""

    def test_auto_freezing(self):
        assert tiny_spec().finetune_mode == "full"
        assert ModelSpec(backbone=BackboneId.RESNET50).finetune_mode == "head"
        assert ModelSpec(backbone=BackboneId.RESNET50, pretrained=False).finetune_mode == "full"

    def test_tiny_backbones_have_no_weights(self):
        with pytest.raises(ValueError):
            ModelSpec(backbone=BackboneId.TINY_CNN, pretrained=True)

    def test_vit_input_size(self):
        with pytest.raises(ValueError):
            ModelSpec(backbone=BackboneId.VIT_B16, input_size=96)

    def test_registry_lists_every_backbone(self):
        assert {m.backbone for m in registry.list_backbones()} == set(BackboneId)
        assert registry.get_metadata(BackboneId.VIT_B16).default_lr == 1e-4


class TestTinyBlocks:
    """Test suite for the residual, dense and attention building blocks."""

    def test_zeroed_residual_branch_is_identity(self):
        block = ResidualBlock(8).eval()
        with torch.no_grad():
            block.residual[-1].weight.zero_()
        x = torch.randn(2, 8, 6, 6)

        assert torch.equal(block(x), x)

    def test_dense_block_concatenates_every_layer(self):
        block = DenseBlock(32, growth=16, n_layers=2).eval()
        x = torch.randn(1, 32, 8, 8)
        y = block(x)

        assert block.layer_input_channels == [32, 48]
        assert block.out_channels == 64
        assert y.shape == (1, 64, 8, 8)
        assert torch.equal(y[:, :32], x)

    def test_attention_keeps_token_shape(self):
        attention = SelfAttention(dim=64, heads=4)
        assert attention(torch.randn(2, 17, 64)).shape == (2, 17, 64)


class TestClassifier:
    """Test suite for built classifiers."""

    @pytest.mark.parametrize("backbone", [BackboneId.TINY_CNN, BackboneId.TINY_VIT])
    def test_probabilities_sum_to_one(self, backbone):
        handle = build_classifier(tiny_spec(backbone, n_classes=5), seed=0)
        proba = predict_proba(handle, torch.zeros(2, 3, 64, 64))

        assert proba.shape == (2, 5)
        assert proba.sum(axis=1) == pytest.approx([1.0, 1.0])

    def test_batch_of_one(self):
        handle = build_classifier(tiny_spec(head="NoTop", n_classes=2), seed=0)
        assert predict_proba(handle, torch.randn(1, 3, 64, 64)).shape == (1, 2)

    def test_duplicate_rows_identical(self):
        handle = build_classifier(tiny_spec(), seed=0)
        image = torch.randn(1, 3, 64, 64)
        proba = predict_proba(handle, torch.cat([image, image]))
        assert (proba[0] == proba[1]).all()

    def test_wrong_input_shape(self):
        handle = build_classifier(tiny_spec(), seed=0)
        with pytest.raises(ShapeMismatch):
            predict_proba(handle, torch.zeros(1, 3, 32, 32))

    def test_same_seed_same_weights(self):
        first = build_classifier(tiny_spec(), seed=7).model.state_dict()
        second = build_classifier(tiny_spec(), seed=7).model.state_dict()
        assert all(torch.equal(first[k], second[k]) for k in first)

    def test_frozen_backbone_trains_head_only(self):
        spec = tiny_spec().model_copy(update={"finetune": "head"})
        handle = build_classifier(spec, seed=0)

        assert not any(p.requires_grad for p in handle.model.backbone.parameters())
        assert handle.metadata["trainable_params"] == count_parameters(handle.model.head)

    def test_trainable_count_follows_freezing(self):
        full = build_classifier(tiny_spec().model_copy(update={"finetune": "full"}), seed=0)
        head_only = build_classifier(tiny_spec().model_copy(update={"finetune": "head"}), seed=0)

        assert count_trainable_parameters(full) == count_parameters(full.model)
        assert count_trainable_parameters(head_only) == count_parameters(head_only.model.head)
        assert count_trainable_parameters(head_only) < count_trainable_parameters(full)

    @pytest.mark.slow
    def test_vit_b16_parameter_count(self):
        spec = ModelSpec(backbone=BackboneId.VIT_B16, head=HeadConfig.from_name("NoTop", 5), pretrained=False)
        handle = build_classifier(spec, seed=0)
        proba = predict_proba(handle, torch.zeros(1, 3, 224, 224))

        assert proba.shape == (1, 5)
        assert handle.metadata["total_params"] / 1e6 == pytest.approx(86.6, rel=0.02)


class TestCheckpoints:
    """Test suite for save/load."""

    def test_round_trip(self, tmp_path):
        handle = build_classifier(tiny_spec(backbone=BackboneId.TINY_VIT), seed=3)
        probe = torch.randn(4, 3, 64, 64)
        expected = predict_proba(handle, probe)

        path = save_model(handle, tmp_path / "checkpoint.bin")
        loaded = load_model(path, expected_backbone=BackboneId.TINY_VIT)

        assert (predict_proba(loaded, probe) == expected).all()
        assert loaded.spec.head == handle.spec.head
        assert loaded.spec.finetune_mode == handle.spec.finetune_mode
        assert read_checkpoint_metadata(path)["seed"] == 3

    def test_wrong_backbone(self, tmp_path):
        path = save_model(build_classifier(tiny_spec(), seed=0), tmp_path / "checkpoint.bin")
        with pytest.raises(CorruptCheckpoint):
            load_model(path, expected_backbone=BackboneId.RESNET50)

    def test_garbage_file(self, tmp_path):
        path = tmp_path / "checkpoint.bin"
        path.write_bytes(b"\x00not a checkpoint")
        with pytest.raises(CorruptCheckpoint):
            load_model(path)
