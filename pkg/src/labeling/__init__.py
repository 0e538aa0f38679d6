"""Weight-loss labeling, shelf life and class schemes."""

from .class_scheme import MAX_CLASSES, MIN_CLASSES, ClassScheme, assign_class, build_class_scheme
from .labeler import (
    NON_SPROUT_CLASS,
    SPROUT_CLASS,
    LabeledSample,
    class_summary,
    label_dataset,
    load_labels,
    write_labels,
)
from .weight_loss import (
    SHELF_LIFE_THRESHOLD_PCT,
    ShelfLifeEstimate,
    cumulative_weight_loss,
    estimate_shelf_life,
    remaining_shelf_life,
    trajectory_losses,
)

__all__ = [
    "MAX_CLASSES",
    "MIN_CLASSES",
    "ClassScheme",
    "assign_class",
    "build_class_scheme",
    "NON_SPROUT_CLASS",
    "SPROUT_CLASS",
    "LabeledSample",
    "class_summary",
    "label_dataset",
    "load_labels",
    "write_labels",
    "SHELF_LIFE_THRESHOLD_PCT",
    "ShelfLifeEstimate",
    "cumulative_weight_loss",
    "estimate_shelf_life",
    "remaining_shelf_life",
    "trajectory_losses",
]
