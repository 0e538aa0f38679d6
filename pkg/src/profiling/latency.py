# -*- coding: utf-8 -*-
"""Single-image inference latency."""

import time
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
import torch

from ..core.errors import UsageError
from ..core.logger import logger
from ..models.zoo import ModelHandle

DEFAULT_WARMUP = 10
DEFAULT_TIMED = 100


@dataclass
class LatencyResult:
    sec_per_image: float
    device: str
    batch_size: int
    n_warmup: int
    n_timed: int

    def to_dict(self) -> dict:
        return asdict(self)


def _sync(device: torch.device) -> None:
    if device.type == "cuda":
        torch.cuda.synchronize(device)


def measure_inference_latency(
    handle: ModelHandle,
    n_warmup: int = DEFAULT_WARMUP,
    n_timed: int = DEFAULT_TIMED,
    input_size: Optional[int] = None,
) -> LatencyResult:
    """
    Median wall time of n_timed batch-1 forward passes after n_warmup discarded ones.

    Raises:
        UsageError: n_timed < 10
    """
    if n_timed < 10:
        raise UsageError(f"n_timed must be >= 10, got {n_timed}")
    if n_warmup < 0:
        raise UsageError(f"n_warmup must be >= 0, got {n_warmup}")

    size = input_size or handle.spec.input_size
    device = handle.device
    x = torch.zeros(1, 3, size, size, device=device)
    handle.eval_mode()

    timings = []
    with torch.no_grad():
        for _ in range(n_warmup):
            handle.model(x)
        _sync(device)
        for _ in range(n_timed):
            start = time.perf_counter()
            handle.model(x)
            _sync(device)
            timings.append(time.perf_counter() - start)

    result = LatencyResult(
        sec_per_image=float(np.median(timings)),
        device=str(device),
        batch_size=1,
        n_warmup=n_warmup,
        n_timed=n_timed,
    )
    logger.debug(
        f"{handle.spec.backbone.value}: {result.sec_per_image * 1e3:.3f} ms/image on {result.device}"
    )
    return result


__all__ = ["DEFAULT_WARMUP", "DEFAULT_TIMED", "LatencyResult", "measure_inference_latency"]
