# -*- coding: utf-8 -*-
"""
Model trainer.

Adam on label-smoothed cross-entropy; validation loss drives the plateau LR schedule
and early stopping; the best-epoch weights are restored at the end.
"""

import copy
import time
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
import torch

from ..core.config import settings
from ..core.errors import LabelOutOfRange, UsageError
from ..core.logger import logger
from ..models.spec import ModelSpec
from ..models.zoo import ModelHandle, build_classifier, predict_proba
from .config import TrainConfig
from .data import EpochShuffleSampler, ImageCache, PotatoImageDataset, TrainingSample, make_loader
from .history import EpochRecord, History
from .losses import make_criterion
from .schedulers import EarlyStopState, PlateauState, early_stop_update, plateau_step

ProgressCallback = Callable[[str, int, Dict], None]


def _run_epoch(
    handle: ModelHandle,
    loader,
    criterion,
    optimizer: Optional[torch.optim.Optimizer] = None,
) -> Tuple[float, float]:
    """One pass over a loader; trains when an optimizer is given. Returns (loss, acc)."""
    training = optimizer is not None
    handle.train_mode() if training else handle.eval_mode()
    device = handle.device

    total_loss, correct, seen = 0.0, 0, 0
    with torch.set_grad_enabled(training):
        for images, labels in loader:
            images, labels = images.to(device), labels.to(device)
            logits = handle.model(images)
            loss = criterion(logits, labels)
            if training:
                optimizer.zero_grad()
                loss.backward()
                optimizer.step()
            total_loss += float(loss.item()) * labels.shape[0]
            correct += int((logits.argmax(dim=1) == labels).sum().item())
            seen += labels.shape[0]

    if seen == 0:
        return float("nan"), 0.0
    return total_loss / seen, correct / seen


def train_model(
    spec: ModelSpec,
    train_samples: Sequence[TrainingSample],
    val_samples: Sequence[TrainingSample],
    config: TrainConfig,
    job_name: str = "train",
    progress_callback: Optional[ProgressCallback] = None,
    cache: Optional[ImageCache] = None,
) -> Tuple[ModelHandle, History]:
    """
    Train a fresh classifier.

    Args:
        spec: Model specification (input_size must match config.input_size)
        train_samples: Training samples (1-based class indices)
        val_samples: Samples monitored for LR schedule and early stopping; when empty,
            training loss is monitored instead
        config: Training protocol
        job_name: Label used in logs and progress callbacks
        progress_callback: Optional callback(job_name, epoch, stats) after every epoch
        cache: Shared decoded-image cache

    Returns:
        (handle carrying best-epoch weights, history)
    """
    if spec.input_size != config.input_size:
        raise UsageError(f"model input_size {spec.input_size} != training input_size {config.input_size}")
    for s in list(train_samples) + list(val_samples):
        if not 1 <= s.class_index <= spec.n_classes:
            raise LabelOutOfRange(f"class {s.class_index} of {s.key} outside 1..{spec.n_classes}")

    cache = cache or ImageCache()
    lr = config.resolved_lr(spec.backbone)
    handle = build_classifier(spec, config.seed)
    handle.to(settings.resolve_device())

    train_ds = PotatoImageDataset(train_samples, config.input_size, config.augmentation, config.seed, cache)
    sampler = EpochShuffleSampler(len(train_ds), config.seed)
    train_loader = make_loader(train_ds, config.batch_size, sampler)
    val_loader = make_loader(PotatoImageDataset(val_samples, config.input_size, cache=cache), config.batch_size)

    params = [p for p in handle.model.parameters() if p.requires_grad]
    optimizer = torch.optim.Adam(params, lr=lr, betas=(config.beta1, config.beta2))
    criterion = make_criterion(config.label_smoothing)

    plateau = PlateauState(lr=lr)
    stopper = EarlyStopState()
    history = History()
    best_state = copy.deepcopy(handle.model.state_dict())
    start = time.time()

    logger.info(
        f"[{job_name}] training {spec.backbone.value} [{spec.head.label}] on {len(train_samples)} "
        f"samples, validating on {len(val_samples)}; lr={lr:g}, max_epochs={config.max_epochs}"
    )

    for epoch in range(1, config.max_epochs + 1):
        torch.manual_seed(config.seed + epoch)
        train_ds.set_epoch(epoch)
        sampler.set_epoch(epoch)

        epoch_lr = plateau.lr
        train_loss, train_acc = _run_epoch(handle, train_loader, criterion, optimizer)
        if len(val_samples):
            val_loss, val_acc = _run_epoch(handle, val_loader, criterion)
        else:
            val_loss, val_acc = train_loss, train_acc

        history.append(EpochRecord(epoch, train_loss, train_acc, val_loss, val_acc, epoch_lr))
        logger.debug(
            f"[{job_name}] epoch {epoch}: train_loss={train_loss:.4f} train_acc={train_acc:.3f} "
            f"val_loss={val_loss:.4f} val_acc={val_acc:.3f} lr={epoch_lr:.2e}"
        )

        plateau = plateau_step(
            plateau, val_loss, config.lrs_factor, config.lrs_patience, config.improvement_threshold
        )
        if plateau.lr != epoch_lr:
            for group in optimizer.param_groups:
                group["lr"] = plateau.lr
            logger.info(f"[{job_name}] epoch {epoch}: learning rate reduced to {plateau.lr:.2e}")

        stop, stopper = early_stop_update(
            stopper, epoch, val_loss, config.es_patience, config.improvement_threshold
        )
        if stopper.best_epoch == epoch:
            best_state = copy.deepcopy(handle.model.state_dict())

        if progress_callback:
            try:
                progress_callback(job_name, epoch, {
                    "train_loss": train_loss,
                    "train_acc": train_acc,
                    "val_loss": val_loss,
                    "val_acc": val_acc,
                    "lr": epoch_lr,
                    "best_epoch": stopper.best_epoch,
                    "elapsed_time": time.time() - start,
                })
            except Exception as e:
                logger.warning(f"Progress callback failed: {e}")

        if stop:
            history.stop_reason = "early_stop"
            logger.info(
                f"[{job_name}] early stop at epoch {epoch} (best epoch {stopper.best_epoch})"
            )
            break
    else:
        history.stop_reason = "max_epochs"

    history.best_epoch = stopper.best_epoch
    handle.model.load_state_dict(best_state)
    handle.metadata["best_epoch"] = history.best_epoch
    handle.metadata["stop_reason"] = history.stop_reason
    logger.info(
        f"[{job_name}] done in {time.time() - start:.1f}s: {history.epochs} epochs, "
        f"best epoch {history.best_epoch}, stop={history.stop_reason}"
    )
    return handle, history


def predict_samples(
    handle: ModelHandle,
    samples: Sequence[TrainingSample],
    input_size: int,
    cache: Optional[ImageCache] = None,
) -> np.ndarray:
    """(N, n_classes) probabilities with evaluation transforms."""
    images, _ = PotatoImageDataset(samples, input_size, cache=cache).stacked()
    if len(samples) == 0:
        return np.zeros((0, handle.spec.n_classes))
    return predict_proba(handle, images)


__all__ = ["ProgressCallback", "train_model", "predict_samples"]
