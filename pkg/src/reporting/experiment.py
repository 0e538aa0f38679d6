# -*- coding: utf-8 -*-
"""
Experiment Configuration

One file describes a complete training experiment: task, class count, model, training
protocol, data paths and an optional hyperparameter grid. It is copied verbatim into
every run directory as config.json.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

import yaml
from pydantic import BaseModel, Field, model_validator

from ..core.errors import UsageError
from ..labeling.class_scheme import MAX_CLASSES, MIN_CLASSES
from ..models.spec import HEAD_VARIANTS, BackboneId, HeadConfig, ModelSpec
from ..training.config import TrainConfig, TrainPresets


class ExperimentConfig(BaseModel):
    """Complete experiment description"""

    task: Literal["sprout", "shelf_life"] = Field(
        default="shelf_life",
        description="sprout: binary sprout detection; shelf_life: weight-loss classes"
    )

    n_classes: int = Field(
        default=5,
        ge=MIN_CLASSES,
        le=MAX_CLASSES,
        description="Class count (forced to 2 for the sprout task)"
    )

    backbone: BackboneId = Field(default=BackboneId.TINY_CNN, description="Feature extractor")

    head: str = Field(default="1024-1024", description=f"Head variant, one of {sorted(HEAD_VARIANTS)}")

    dropout_rate: float = Field(default=0.5, ge=0.0, lt=1.0, description="Head dropout")

    pretrained: Optional[bool] = Field(
        default=None,
        description="Load ImageNet weights (None = yes for the four ImageNet backbones)"
    )

    finetune: Literal["auto", "head", "full"] = Field(default="auto", description="Trainable part")

    train: TrainConfig = Field(default_factory=TrainConfig, description="Training protocol")

    manifest: Optional[Path] = Field(default=None, description="Dataset manifest.csv")

    labels: Optional[Path] = Field(default=None, description="labels.json produced by `label`")

    seed: int = Field(default=42, description="Seed for folds, initialization and augmentation")

    grid: Optional[Dict[str, List[Any]]] = Field(
        default=None,
        description="Hyperparameter grid for `train --grid` (None = heads x {1e-3, 1e-4})"
    )

    holdout: Optional[float] = Field(
        default=None,
        gt=0.0,
        lt=1.0,
        description="Test fraction of a single holdout split instead of k-fold CV"
    )

    run_id: Optional[str] = Field(default=None, description="Run directory name")

    @model_validator(mode="after")
    def _check(self) -> "ExperimentConfig":
        if self.task == "sprout":
            self.n_classes = 2
        if self.head not in HEAD_VARIANTS:
            raise UsageError(f"unknown head {self.head!r}; expected one of {sorted(HEAD_VARIANTS)}")
        if self.train.seed != self.seed:
            self.train = self.train.model_copy(update={"seed": self.seed})
        return self

    @property
    def sprout_mode(self) -> bool:
        return self.task == "sprout"

    def model_spec(self) -> ModelSpec:
        return ModelSpec(
            backbone=self.backbone,
            head=HeadConfig.from_name(self.head, self.n_classes, dropout_rate=self.dropout_rate),
            pretrained=self.pretrained,
            finetune=self.finetune,
            input_size=self.train.input_size,
        )

    def train_config(self) -> TrainConfig:
        """Training protocol with the learning rate resolved for the backbone."""
        return self.train.for_backbone(self.backbone)

    @classmethod
    def load_from_file(cls, path: Path) -> "ExperimentConfig":
        """Load configuration from YAML/JSON file."""
        path = Path(path)
        if not path.exists():
            raise UsageError(f"config file not found: {path}")

        with open(path, "r", encoding="utf-8") as f:
            if path.suffix == ".json":
                data = json.load(f)
            elif path.suffix in [".yaml", ".yml"]:
                data = yaml.safe_load(f)
            else:
                raise UsageError(f"unsupported config format: {path.suffix}")

        return cls(**(data or {}))

    def save_to_file(self, path: Path) -> Path:
        """Save configuration to YAML/JSON file."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        data = self.model_dump(mode="json")

        with open(path, "w", encoding="utf-8") as f:
            if path.suffix == ".json":
                json.dump(data, f, indent=2)
            elif path.suffix in [".yaml", ".yml"]:
                yaml.safe_dump(data, f, default_flow_style=False, sort_keys=False)
            else:
                raise UsageError(f"unsupported config format: {path.suffix}")
        return path


# Preset configurations
class ExperimentPresets:
    """Predefined experiment configurations"""

    @staticmethod
    def published_sprout() -> ExperimentConfig:
        """DenseNet-121 sprout detection, full protocol"""
        return ExperimentConfig(task="sprout", backbone=BackboneId.DENSENET121, train=TrainPresets.published())

    @staticmethod
    def published_shelf_life(n_classes: int = 5) -> ExperimentConfig:
        """DenseNet-121 shelf-life classes, full protocol"""
        return ExperimentConfig(
            task="shelf_life",
            n_classes=n_classes,
            backbone=BackboneId.DENSENET121,
            train=TrainPresets.published(),
        )

    @staticmethod
    def desk(task: str = "shelf_life", n_classes: int = 5) -> ExperimentConfig:
        """Tiny CNN on a laptop CPU"""
        return ExperimentConfig(
            task=task,
            n_classes=n_classes,
            backbone=BackboneId.TINY_CNN,
            head="1024",
            train=TrainPresets.desk(),
        )

    @staticmethod
    def quick_test(task: str = "sprout") -> ExperimentConfig:
        """A few epochs at 64 px, for tests"""
        return ExperimentConfig(
            task=task,
            n_classes=2,
            backbone=BackboneId.TINY_CNN,
            head="NoTop",
            train=TrainPresets.quick_test(),
        )


__all__ = ["ExperimentConfig", "ExperimentPresets"]
