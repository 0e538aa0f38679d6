"""Training protocol: loss, schedules, folds, trainer, cross-validation and grid search."""

from .augment import augment, build_eval_transform, build_train_transform, sample_rng_state
from .config import AugmentationConfig, TrainConfig, TrainPresets
from .cross_validation import CVResult, FoldResult, cross_validate, fold_dir, holdout_validate, load_metrics
from .data import ImageCache, PotatoImageDataset, TrainingSample, samples_from_labels
from .folds import FoldPlan, stratified_kfold
from .grid_search import DEFAULT_GRID, GridSearchResult, expand_grid, grid_search
from .history import HISTORY_COLUMNS, EpochRecord, History
from .losses import make_criterion, smoothed_cross_entropy, smoothed_cross_entropy_grad
from .schedulers import EarlyStopState, PlateauState, early_stop_update, plateau_step
from .trainer import predict_samples, train_model

__all__ = [
    "augment",
    "build_eval_transform",
    "build_train_transform",
    "sample_rng_state",
    "AugmentationConfig",
    "TrainConfig",
    "TrainPresets",
    "CVResult",
    "FoldResult",
    "cross_validate",
    "fold_dir",
    "holdout_validate",
    "load_metrics",
    "ImageCache",
    "PotatoImageDataset",
    "TrainingSample",
    "samples_from_labels",
    "FoldPlan",
    "stratified_kfold",
    "DEFAULT_GRID",
    "GridSearchResult",
    "expand_grid",
    "grid_search",
    "HISTORY_COLUMNS",
    "EpochRecord",
    "History",
    "make_criterion",
    "smoothed_cross_entropy",
    "smoothed_cross_entropy_grad",
    "EarlyStopState",
    "PlateauState",
    "early_stop_update",
    "plateau_step",
    "predict_samples",
    "train_model",
]
