# -*- coding: utf-8 -*-
"""
Command-line entry point.

    tuber synth         --out DIR [--n-potatoes N --horizon D --interval I --seed S]
    tuber label         --manifest F --classes N --out labels.json [--sprout]
    tuber train         --manifest F --labels F --config F [--out runs/ID] [--grid] [--holdout F]
    tuber evaluate      --run runs/ID
    tuber sweep-classes --manifest F --config F [--min 2 --max 8] --out DIR
    tuber explain       --run runs/ID --fold K --image P --class C [--layer L] [--mask M]
    tuber profile       --backbones LIST --out profile.csv
    tuber report        --run runs/ID [--out report.md]
    tuber crop-trays    --image F --rows R --cols C --out DIR

Failures print one line ``error: <Code>: <detail>`` on stderr and exit with 2 (usage),
3 (data) or 4 (runtime).
"""

import argparse
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Callable, Iterator, List, NoReturn, Optional, Tuple

from pydantic import ValidationError
from rich.console import Console

from . import __version__
from .core.cli_dashboard import TrainingDashboard, print_table
from .core.cli_dashboard import console as dashboard_console
from .core.config import settings
from .core.errors import TuberError, UsageError
from .core.logger import logger, setup_logging
from .core.rich_utils import live_view
from .data.manifest import load_manifest
from .data.tray import crop_tray_file
from .evaluation.sweep import class_count_sweep, sweep_frame
from .explain.heatmaps import explain_image
from .labeling.class_scheme import build_class_scheme
from .labeling.labeler import class_summary, label_dataset, load_labels, write_labels
from .models.spec import BackboneId
from .models.zoo import load_model
from .profiling.table import build_profile_table, write_profile_csv
from .reporting.evaluate import evaluate_run
from .reporting.experiment import ExperimentConfig
from .reporting.plots import plot_class_count_sweep
from .reporting.report import write_report
from .reporting.run_dir import create_run_dir, make_run_id, read_json, write_run_config
from .synth.config import SynthConfig, SynthPresets
from .synth.generator import generate_synthetic_dataset
from .training.cross_validation import cross_validate, fold_dir, holdout_validate
from .training.data import samples_from_labels
from .training.grid_search import DEFAULT_GRID, expand_grid, grid_search

stdout = Console()


def _fmt(value, pattern: str = ".4f") -> str:
    return "" if value is None else format(value, pattern)


@contextmanager
def _training_dashboard(
    quiet: bool, total_jobs: int, max_epochs: int, title: str
) -> Iterator[Tuple[Optional[Callable], Optional[Callable]]]:
    """Yield (progress_callback, job_done) wired to a live dashboard, or Nones when quiet."""
    if quiet:
        yield None, None
        return

    dashboard = TrainingDashboard(total_jobs, max_epochs, title)
    with live_view(dashboard.render(), dashboard_console) as live:

        def on_epoch(job: str, epoch: int, stats: dict) -> None:
            dashboard.update_epoch(job, epoch, stats)
            live.update(dashboard.render())

        def on_job(job: str, seconds: float, stop_reason: str) -> None:
            dashboard.complete_job(job, seconds, stop_reason)
            live.update(dashboard.render())

        yield on_epoch, on_job


def _print_summary(title: str, summary: dict) -> None:
    rows = [[name, _fmt(v["mean"]), _fmt(v["std"])] for name, v in summary.items()]
    print_table(title, ["Metric", "Mean", "Std"], rows, out=stdout)


# ===== COMMANDS =====

def cmd_synth(args: argparse.Namespace) -> int:
    base = getattr(SynthPresets, args.preset)() if args.preset else SynthConfig()
    updates = {
        "n_potatoes": args.n_potatoes,
        "horizon_days": args.horizon,
        "sample_interval_days": args.interval,
        "seed": args.seed,
        "image_size": args.image_size,
    }
    config = SynthConfig.model_validate(
        {**base.model_dump(), **{k: v for k, v in updates.items() if v is not None}}
    )
    manifest, records = generate_synthetic_dataset(config, args.out)
    sprouted = sum(1 for r in records if r.sprouted)
    print_table(
        "Synthetic dataset",
        ["Potatoes", "Observations", "Sprouted", "Directory"],
        [[len(manifest.potato_ids()), len(records), sprouted, str(args.out)]],
        out=stdout,
    )
    return 0


def cmd_label(args: argparse.Namespace) -> int:
    scheme = build_class_scheme(2 if args.sprout else args.classes)
    manifest = load_manifest(args.manifest)
    samples = label_dataset(manifest, scheme, sprout_mode=args.sprout)
    write_labels(samples, args.out)

    n = 2 if args.sprout else scheme.n_classes
    names = ["not sprouted", "sprouted"] if args.sprout else scheme.class_names()
    rows = [
        [
            r["class_index"],
            names[r["class_index"] - 1],
            r["count"],
            f"{_fmt(r['loss_min'], '.2f')}-{_fmt(r['loss_max'], '.2f')}",
            f"{_fmt(r['remaining_min'], 'd')}-{_fmt(r['remaining_max'], 'd')}",
            r["censored"],
        ]
        for r in class_summary(samples, n)
    ]
    print_table(
        f"Labels ({'sprout' if args.sprout else f'{n}-class shelf life'})",
        ["Class", "Definition", "Count", "Observed loss %", "Remaining days", "Censored"],
        rows,
        out=stdout,
    )
    return 0


def _load_experiment(args: argparse.Namespace) -> ExperimentConfig:
    config = ExperimentConfig.load_from_file(args.config)
    updates = {}
    if getattr(args, "manifest", None):
        updates["manifest"] = str(args.manifest)
    if getattr(args, "labels", None):
        updates["labels"] = str(args.labels)
    if getattr(args, "holdout", None) is not None:
        updates["holdout"] = args.holdout
    if updates:
        config = ExperimentConfig.model_validate({**config.model_dump(mode="json"), **updates})
    return config


def cmd_train(args: argparse.Namespace) -> int:
    config = _load_experiment(args)
    if config.manifest is None or config.labels is None:
        raise UsageError("train needs --manifest and --labels (or manifest/labels in the config)")
    if args.grid and config.holdout is not None:
        raise UsageError("--grid and --holdout are mutually exclusive")

    manifest = load_manifest(config.manifest)
    labels = load_labels(config.labels)
    mismatched = {s.scheme_n for s in labels} - {config.n_classes}
    if mismatched:
        raise UsageError(
            f"labels use {sorted(mismatched)} classes but the config expects {config.n_classes}"
        )
    if config.task == "shelf_life":
        usable = [s for s in labels if not s.censored]
        if len(usable) < len(labels):
            logger.warning(f"Excluding {len(labels) - len(usable)} censored sample(s) from training")
        labels = usable

    run_dir = Path(args.out) if args.out else settings.runs_dir / make_run_id(config.seed)
    config = config.model_copy(update={"run_id": config.run_id or run_dir.name})
    create_run_dir(run_dir)
    write_run_config(run_dir, config)

    spec = config.model_spec()
    train_config = config.train_config()
    samples = samples_from_labels(labels, manifest.root_dir)

    if args.grid:
        n_jobs = len(expand_grid(config.grid or DEFAULT_GRID)) * train_config.k_folds
    elif config.holdout is not None:
        n_jobs = 1
    else:
        n_jobs = train_config.k_folds

    with _training_dashboard(args.quiet, n_jobs, train_config.max_epochs, f"Training {run_dir.name}") as (
        on_epoch,
        on_job,
    ):
        if args.grid:
            result = grid_search(spec, config.grid, samples, train_config, run_dir, on_epoch, on_job)
            summary = result.best.summary
        elif config.holdout is not None:
            summary = holdout_validate(
                spec, samples, manifest, train_config, run_dir, config.holdout, on_epoch, on_job
            ).summary
        else:
            summary = cross_validate(
                spec, samples, train_config, run_dir,
                progress_callback=on_epoch, job_done=on_job, keep_models=False,
            ).summary

    if args.grid:
        print_table(
            "Grid search",
            ["Point", "Parameters", "Head", "Accuracy"],
            [
                [p.index, p.params, p.head_label, f"{p.mean_accuracy:.4f} ± {p.std_accuracy:.4f}"]
                for p in result.points
            ],
            out=stdout,
        )
    _print_summary(f"Run {run_dir.name}", summary.to_dict())
    stdout.print(str(run_dir))
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    evaluation = evaluate_run(args.run)
    _print_summary(f"Evaluation of {Path(args.run).name}", evaluation.summary.to_dict())
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.min > args.max:
        raise UsageError(f"--min {args.min} exceeds --max {args.max}")
    config = _load_experiment(args)
    if config.manifest is None:
        raise UsageError("sweep-classes needs --manifest")
    manifest = load_manifest(config.manifest)
    out = create_run_dir(args.out)
    config = config.model_copy(update={"task": "shelf_life", "run_id": config.run_id or out.name})
    write_run_config(out, config)

    n_range = list(range(args.min, args.max + 1))
    train_config = config.train_config()
    with _training_dashboard(args.quiet, len(n_range) * train_config.k_folds, train_config.max_epochs,
                             "Class-count sweep") as (on_epoch, on_job):
        rows = class_count_sweep(manifest, config.model_spec(), train_config, out, n_range,
                                 on_epoch, on_job)

    frame = sweep_frame(rows)
    plot_class_count_sweep(frame, out / "plots" / "class_count_sweep.png")
    print_table(
        "Accuracy by number of classes",
        ["Classes", "Samples", "Accuracy", "Published"],
        [
            [r.n_classes, r.n_samples, f"{r.summary.mean():.4f} ± {r.summary.std():.4f}",
             _fmt(row["published_accuracy"])]
            for r, row in zip(rows, frame.to_dict("records"))
        ],
        out=stdout,
    )
    return 0


def cmd_explain(args: argparse.Namespace) -> int:
    run = Path(args.run)
    handle = load_model(fold_dir(run, args.fold) / "checkpoint.bin")
    handle.to(settings.resolve_device())
    result = explain_image(
        handle,
        args.image,
        run / "heatmaps",
        target_class=args.target_class,
        layer_id=args.layer,
        mask_path=args.mask,
        alpha=args.alpha,
    )
    rows = [[
        result.saliency.layer_id,
        result.saliency.target_class,
        result.saliency.predicted_class,
        "yes" if result.saliency.degenerate else "no",
        _fmt(result.localization_score),
        str(result.png_path),
    ]]
    print_table("Grad-CAM", ["Layer", "Class", "Predicted", "Degenerate", "Localization", "Heat map"],
                rows, out=stdout)
    return 0


def _train_minutes(runs: List[Path]) -> dict:
    minutes = {}
    for run in runs:
        config = ExperimentConfig.load_from_file(Path(run) / "config.json")
        per_fold = read_json(Path(run) / "metrics.json").get("per_fold", [])
        seconds = [f["train_seconds"] for f in per_fold if "train_seconds" in f]
        if seconds:
            minutes[config.backbone] = sum(seconds) / len(seconds) / 60.0
    return minutes


def cmd_profile(args: argparse.Namespace) -> int:
    try:
        backbones = [BackboneId(name.strip().upper()) for name in args.backbones.split(",") if name.strip()]
    except ValueError as e:
        raise UsageError(f"{e}; choose from {', '.join(b.value for b in BackboneId)}") from e
    if not backbones:
        raise UsageError("--backbones is empty")

    rows = build_profile_table(
        backbones,
        input_size=args.input_size,
        n_warmup=args.warmup,
        n_timed=args.timed,
        train_minutes=_train_minutes(args.from_run or []),
    )
    write_profile_csv(rows, args.out)
    print_table(
        "Backbone cost",
        ["Backbone", "Params (M)", "Published (M)", "GMacs", "Published GMacs", "s/image"],
        [
            [r.backbone, f"{r.params / 1e6:.2f}", _fmt(r.published_params / 1e6 if r.published_params else None, ".2f"),
             f"{r.gmacs:.2f}", _fmt(r.published_gmacs, ".2f"), f"{r.infer_sec_per_image:.5f}"]
            for r in rows
        ],
        out=stdout,
    )
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    path = write_report(args.run, args.out)
    stdout.print(str(path))
    return 0


def cmd_crop_trays(args: argparse.Namespace) -> int:
    written = crop_tray_file(args.image, args.rows, args.cols, args.out)
    stdout.print(f"{len(written)} tiles written to {args.out}")
    return 0


# ===== PARSER =====

class TuberArgumentParser(argparse.ArgumentParser):
    """Argument errors raise UsageError instead of printing usage and exiting."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = TuberArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="No dashboard; warnings and errors only")
    common.add_argument("--verbose", action="store_true", help="Debug-level console logs")

    parser = TuberArgumentParser(
        prog="tuber",
        description="Potato sprout and shelf-life classification pipeline",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common], help="Generate a synthetic dataset")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--n-potatoes", type=int)
    p.add_argument("--horizon", type=int, help="Last observation day")
    p.add_argument("--interval", type=int, help="Days between observations")
    p.add_argument("--seed", type=int)
    p.add_argument("--image-size", type=int)
    p.add_argument("--preset", choices=["desk", "tiny", "long_storage"])
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("label", parents=[common], help="Derive class labels from a manifest")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--classes", type=int, default=5)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--sprout", action="store_true", help="Binary sprout labels from the manifest")
    p.set_defaults(handler=cmd_label)

    p = sub.add_parser("train", parents=[common], help="Cross-validate (or grid-search) a model")
    p.add_argument("--manifest", type=Path)
    p.add_argument("--labels", type=Path)
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--out", type=Path)
    p.add_argument("--grid", action="store_true", help="Grid search over the config's grid")
    p.add_argument("--holdout", type=float, metavar="FRACTION", help="Single stratified holdout split")
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("evaluate", parents=[common], help="Recompute metrics and plots of a run")
    p.add_argument("--run", type=Path, required=True)
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("sweep-classes", parents=[common], help="Accuracy vs number of classes")
    p.add_argument("--manifest", type=Path)
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--min", type=int, default=2)
    p.add_argument("--max", type=int, default=8)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("explain", parents=[common], help="Grad-CAM heat map of one image")
    p.add_argument("--run", type=Path, required=True)
    p.add_argument("--fold", type=int, required=True)
    p.add_argument("--image", type=Path, required=True)
    p.add_argument("--class", dest="target_class", type=int, help="1-based class (default: predicted)")
    p.add_argument("--layer", help="Dotted module name (default: backbone's last spatial block)")
    p.add_argument("--mask", type=Path, help="Ground-truth mask for a localization score")
    p.add_argument("--alpha", type=float, default=0.4)
    p.set_defaults(handler=cmd_explain)

    p = sub.add_parser("profile", parents=[common], help="Parameters, GMacs and latency per backbone")
    p.add_argument("--backbones", required=True, help="Comma-separated, e.g. RESNET50,TINY_CNN")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--input-size", type=int, default=224)
    p.add_argument("--warmup", type=int, default=10)
    p.add_argument("--timed", type=int, default=100)
    p.add_argument("--from-run", type=Path, action="append", help="Run whose fold times fill train_min_per_fold")
    p.set_defaults(handler=cmd_profile)

    p = sub.add_parser("report", parents=[common], help="Markdown report of a run")
    p.add_argument("--run", type=Path, required=True)
    p.add_argument("--out", type=Path)
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser("crop-trays", parents=[common], help="Grid-crop a tray photo")
    p.add_argument("--image", type=Path, required=True)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(handler=cmd_crop_trays)

    return parser


def _validation_detail(error: ValidationError) -> str:
    first = error.errors()[0]
    loc = ".".join(str(part) for part in first.get("loc", ()))
    return f"{loc}: {first.get('msg', '')}" if loc else first.get("msg", str(error))


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e.one_line(), file=sys.stderr)
        return e.exit_code
    except SystemExit as e:
        return int(e.code or 0)

    if args.verbose or args.quiet:
        setup_logging(level="DEBUG" if args.verbose else "WARNING")
    settings.export_weights_cache()

    try:
        return int(args.handler(args) or 0)
    except TuberError as e:
        logger.debug(f"{args.command} failed: {e.code}: {e.detail}")
        print(e.one_line(), file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        error = UsageError(_validation_detail(e))
        print(error.one_line(), file=sys.stderr)
        return error.exit_code
    except Exception as e:
        logger.opt(exception=e).debug(f"{args.command} failed with an unexpected error")
        print(f"error: RuntimeFailure: {type(e).__name__}: {' '.join(str(e).split())}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
