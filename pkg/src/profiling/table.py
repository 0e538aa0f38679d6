# -*- coding: utf-8 -*-
"""
Backbone cost table.

Measured parameters, GMacs and latency per backbone, side by side with published
figures. Persisted as profile.csv and rendered as Markdown.
"""

import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, List, Mapping, Optional, Sequence

import pandas as pd

from ..core.logger import logger
from ..models.registry import registry
from ..models.spec import BackboneId, HeadConfig, ModelSpec
from ..models.zoo import build_classifier, count_parameters
from .latency import DEFAULT_TIMED, DEFAULT_WARMUP, measure_inference_latency
from .macs import count_macs

PROFILE_COLUMNS = [
    "backbone",
    "params",
    "gmacs",
    "train_min_per_fold",
    "infer_sec_per_image",
    "paper_params",
    "paper_gmacs",
]

# ProfileRow field -> profile.csv column
_CSV_NAMES = {"published_params": "paper_params", "published_gmacs": "paper_gmacs"}


@dataclass
class ProfileRow:
    backbone: str
    params: int
    gmacs: float
    train_min_per_fold: Optional[float]
    infer_sec_per_image: float
    published_params: Optional[int] = None
    published_gmacs: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


def _optional(value) -> Optional[float]:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    return float(value)


def profile_backbone(
    backbone: BackboneId,
    input_size: int = 224,
    n_warmup: int = DEFAULT_WARMUP,
    n_timed: int = DEFAULT_TIMED,
    train_min_per_fold: Optional[float] = None,
    seed: int = 0,
) -> ProfileRow:
    """Profile one backbone with a NoTop head; weights are random (costs do not depend on them)."""
    spec = ModelSpec(
        backbone=backbone,
        head=HeadConfig.from_name("NoTop", n_classes=2),
        pretrained=False,
        input_size=input_size,
    )
    handle = build_classifier(spec, seed)
    meta = registry.get_metadata(backbone)
    macs = count_macs(handle, (1, 3, input_size, input_size))
    latency = measure_inference_latency(handle, n_warmup, n_timed)

    row = ProfileRow(
        backbone=backbone.value,
        params=count_parameters(handle.model),
        gmacs=macs.gmacs,
        train_min_per_fold=train_min_per_fold,
        infer_sec_per_image=latency.sec_per_image,
        published_params=int(round(meta.published_params_m * 1e6)) if meta.published_params_m else None,
        published_gmacs=meta.published_gmacs,
    )
    if row.published_gmacs and abs(row.gmacs - row.published_gmacs) / row.published_gmacs > 0.10:
        logger.warning(
            f"{meta.display_name}: {row.gmacs:.2f} GMacs measured vs {row.published_gmacs} published"
        )
    logger.info(
        f"Profiled {meta.display_name}: {row.params:,} params, {row.gmacs:.2f} GMacs, "
        f"{row.infer_sec_per_image * 1e3:.2f} ms/image"
    )
    return row


def build_profile_table(
    backbones: Sequence[BackboneId],
    input_size: int = 224,
    n_warmup: int = DEFAULT_WARMUP,
    n_timed: int = DEFAULT_TIMED,
    train_minutes: Optional[Mapping[BackboneId, float]] = None,
) -> List[ProfileRow]:
    """One ProfileRow per backbone, in the given order."""
    train_minutes = train_minutes or {}
    return [
        profile_backbone(b, input_size, n_warmup, n_timed, train_minutes.get(b))
        for b in backbones
    ]


def profile_frame(rows: Iterable[ProfileRow]) -> pd.DataFrame:
    records = [{_CSV_NAMES.get(k, k): v for k, v in r.to_dict().items()} for r in rows]
    frame = pd.DataFrame(records, columns=PROFILE_COLUMNS)
    for col in ("params", "paper_params"):
        frame[col] = frame[col].astype("Int64")
    return frame


def write_profile_csv(rows: Iterable[ProfileRow], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    profile_frame(rows).to_csv(path, index=False, lineterminator="\n", float_format="%.6g")
    return path


def read_profile_csv(path: Path) -> List[ProfileRow]:
    frame = pd.read_csv(path)
    rows = []
    for rec in frame.to_dict("records"):
        published_params = _optional(rec.get("paper_params"))
        rows.append(
            ProfileRow(
                backbone=str(rec["backbone"]),
                params=int(rec["params"]),
                gmacs=float(rec["gmacs"]),
                train_min_per_fold=_optional(rec.get("train_min_per_fold")),
                infer_sec_per_image=float(rec["infer_sec_per_image"]),
                published_params=int(published_params) if published_params is not None else None,
                published_gmacs=_optional(rec.get("paper_gmacs")),
            )
        )
    return rows


def _fmt(value: Optional[float], pattern: str) -> str:
    return "" if value is None else format(value, pattern)


def render_markdown(rows: Iterable[ProfileRow]) -> str:
    """Markdown table; published figures sit in their own columns."""
    lines = [
        "| Backbone | Params (M) | Published params (M) | GMacs | Published GMacs "
        "| Train min/fold | Published train min | Inference s/image | Published inference s |",
        "|---|---:|---:|---:|---:|---:|---:|---:|---:|",
    ]
    for row in rows:
        try:
            meta = registry.get_metadata(BackboneId(row.backbone))
            published_train, published_infer = meta.published_train_min, meta.published_infer_sec
        except (KeyError, ValueError):
            published_train = published_infer = None
        lines.append(
            f"| {row.backbone} | {row.params / 1e6:.2f} "
            f"| {_fmt(row.published_params / 1e6 if row.published_params else None, '.2f')} "
            f"| {row.gmacs:.2f} | {_fmt(row.published_gmacs, '.2f')} "
            f"| {_fmt(row.train_min_per_fold, '.2f')} | {_fmt(published_train, '.2f')} "
            f"| {row.infer_sec_per_image:.5f} | {_fmt(published_infer, '.5f')} |"
        )
    return "\n".join(lines) + "\n"


__all__ = [
    "PROFILE_COLUMNS",
    "ProfileRow",
    "profile_backbone",
    "build_profile_table",
    "profile_frame",
    "write_profile_csv",
    "read_profile_csv",
    "render_markdown",
]
