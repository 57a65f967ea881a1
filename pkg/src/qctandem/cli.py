"""Experiment runner: trains one (dataset, model) pair per invocation and
writes a manifest, a metrics CSV, and per-curve plot data files.

Exit codes: 0 success, 1 configuration or file errors, 2 training diverged.
"""

from __future__ import annotations

import argparse
import subprocess
import sys
from pathlib import Path

from . import __version__
from .circuit import parse_circuit
from .data import (BANKNOTE_FEATURES, BANKNOTE_TARGET, DIABETES_FEATURES,
                   DIABETES_TARGET, SCALE_RANGE, Dataset, generate_synthetic,
                   load_csv, scale_minmax, split)
from .model import MODEL_KINDS, build_model, param_counts
from .trainer import TrainConfig, TrainingDiverged, best_metrics, train

DATASETS = ("synthetic", "diabetes", "banknote")
TRAIN_FRACTION = 0.8

METRICS_FILE = "metrics.csv"
LOSS_FILE = "loss.dat"
ACCURACY_FILE = "accuracy.dat"
MANIFEST_FILE = "manifest.txt"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # config errors must exit 1, not argparse's 2
        raise UsageError(f"{self.prog}: {message}")


def code_version() -> str:
    version = f"qctandem-{__version__}"
    try:
        rev = subprocess.run(["git", "rev-parse", "--short", "HEAD"],
                             capture_output=True, text=True, timeout=5,
                             cwd=Path(__file__).parent)
        if rev.returncode == 0 and rev.stdout.strip():
            version += "+g" + rev.stdout.strip()
    except OSError:
        pass
    return version


def _default_columns(dataset: str) -> tuple[tuple[str, ...], str]:
    if dataset == "diabetes":
        return DIABETES_FEATURES, DIABETES_TARGET
    if dataset == "banknote":
        return BANKNOTE_FEATURES, BANKNOTE_TARGET
    return ("informative_0", "informative_1", "noise"), "target"


def _load_dataset(cfg: dict) -> Dataset:
    if cfg["dataset"] == "synthetic":
        return generate_synthetic(cfg["seed"])
    return load_csv(cfg["csv"], cfg["feature_columns"], cfg["target_column"])


def write_manifest(path: Path, cfg: dict) -> None:
    lines = []
    for key, value in cfg.items():
        if isinstance(value, (tuple, list)):
            value = ",".join(str(v) for v in value)
        lines.append(f"{key}={value}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_manifest(path) -> dict:
    cfg: dict = {}
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}: line {lineno} is not key=value")
        key, value = line.split("=", 1)
        cfg[key] = value
    for key in ("epochs", "batch_size", "seed"):
        cfg[key] = int(cfg[key])
    for key in ("lr", "train_fraction", "scale_min", "scale_max"):
        cfg[key] = float(cfg[key])
    cfg["feature_columns"] = tuple(cfg["feature_columns"].split(","))
    return cfg


def _run_experiment(cfg: dict, out_dir: Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = dict(cfg,
               code_version=code_version(),
               metrics_csv=METRICS_FILE,
               loss_data=LOSS_FILE,
               accuracy_data=ACCURACY_FILE)
    write_manifest(out_dir / MANIFEST_FILE, cfg)

    dataset = _load_dataset(cfg)
    train_raw, val_raw = split(dataset, cfg["train_fraction"], cfg["seed"] + 1)
    train_set = scale_minmax(train_raw)
    val_set = scale_minmax(val_raw, reference=train_set)

    circuit = None
    if cfg["circuit_file"]:
        text = Path(cfg["circuit_file"]).read_text(encoding="utf-8")
        circuit = parse_circuit(text, n_features=dataset.n_features)
    model = build_model(cfg["model"], dataset.n_features, circuit)

    config = TrainConfig(epochs=cfg["epochs"], batch_size=cfg["batch_size"],
                         lr=cfg["lr"], seed=cfg["seed"],
                         dataset=cfg["dataset"], model=cfg["model"])
    history, _ = train(model, train_set, val_set, config)

    metrics_lines = ["epoch,val_loss,val_accuracy"]
    loss_lines = []
    acc_lines = []
    for rec in history:
        metrics_lines.append(f"{rec.epoch},{rec.val_loss!r},{rec.val_accuracy!r}")
        loss_lines.append(f"{rec.epoch} {rec.val_loss!r}")
        acc_lines.append(f"{rec.epoch} {rec.val_accuracy!r}")
    (out_dir / METRICS_FILE).write_text("\n".join(metrics_lines) + "\n")
    (out_dir / LOSS_FILE).write_text("\n".join(loss_lines) + "\n")
    (out_dir / ACCURACY_FILE).write_text("\n".join(acc_lines) + "\n")

    n_classical, n_quantum = param_counts(model)
    min_loss, max_acc = best_metrics(history)
    print(f"{cfg['model']} on {cfg['dataset']} "
          f"({n_classical} classical / {n_quantum} quantum parameters): "
          f"min val loss {min_loss:.4f}, max val accuracy {100 * max_acc:.1f}% "
          f"over {cfg['epochs']} epochs")
    print(f"wrote {out_dir / METRICS_FILE}")
    return 0


def cmd_run(args) -> int:
    if args.dataset != "synthetic" and not args.csv:
        raise UsageError(f"--dataset {args.dataset} requires --csv PATH "
                         f"(file is user-supplied, see README)")
    if args.dataset == "synthetic" and args.csv:
        raise UsageError("--csv does not apply to the synthetic dataset")
    default_features, target = _default_columns(args.dataset)
    if args.features:
        if args.dataset == "synthetic":
            raise UsageError("--features only applies to CSV datasets")
        features = tuple(f.strip() for f in args.features.split(",") if f.strip())
        if not features:
            raise UsageError("--features must name at least one column")
    else:
        features = default_features
    cfg = {
        "dataset": args.dataset,
        "csv": str(Path(args.csv).resolve()) if args.csv else "",
        "model": args.model,
        "epochs": args.epochs,
        "batch_size": args.batch_size,
        "lr": args.lr,
        "seed": args.seed,
        "train_fraction": TRAIN_FRACTION,
        "feature_columns": features,
        "target_column": target,
        "scale_min": SCALE_RANGE[0],
        "scale_max": SCALE_RANGE[1],
        "circuit_file": str(Path(args.circuit_file).resolve()) if args.circuit_file else "",
    }
    out_dir = Path(args.out) if args.out else Path(
        f"runs/{args.dataset}_{args.model}_seed{args.seed}")
    return _run_experiment(cfg, out_dir)


def cmd_replay(args) -> int:
    manifest_path = Path(args.manifest)
    cfg = read_manifest(manifest_path)
    out_dir = Path(args.out) if args.out else manifest_path.parent.with_name(
        manifest_path.parent.name + "_replay")
    return _run_experiment(cfg, out_dir)


def _summary_row(run_dir: Path) -> tuple[str, str, str, str, str]:
    cfg = read_manifest(run_dir / MANIFEST_FILE)
    losses = []
    accs = []
    metrics = (run_dir / cfg.get("metrics_csv", METRICS_FILE)).read_text().splitlines()
    for line in metrics[1:]:
        _, loss, acc = line.split(",")
        losses.append(float(loss))
        accs.append(float(acc))
    if not losses:
        raise ValueError(f"{run_dir}: metrics file has no rows")
    circuit = None
    if cfg["circuit_file"]:
        circuit = parse_circuit(Path(cfg["circuit_file"]).read_text(),
                                n_features=len(cfg["feature_columns"]))
    model = build_model(cfg["model"], len(cfg["feature_columns"]), circuit)
    n_classical, n_quantum = param_counts(model)
    return (run_dir.name, cfg["model"], f"{n_classical} / {n_quantum}",
            f"{min(losses):.3f}", f"{100 * max(accs):.1f}%")


def cmd_summarize(args) -> int:
    header = ("run", "model", "classical / quantum", "min loss", "max accuracy")
    rows = [header]
    for name in args.run_dirs:
        run_dir = Path(name)
        try:
            rows.append(_summary_row(run_dir))
        except Exception as exc:  # a broken run dir must not sink the table
            rows.append((run_dir.name, "FAILED", "-", "-", str(exc)[:40]))
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    for row in rows:
        print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    if args.csv:
        lines = [",".join(header)]
        lines += [",".join(row) for row in rows[1:]]
        Path(args.csv).write_text("\n".join(lines) + "\n")
        print(f"wrote {args.csv}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="qctandem",
                     description="Train hybrid quantum-classical binary "
                                 "classifiers on an exact statevector simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="train one (dataset, model) pair")
    run.add_argument("--dataset", required=True, choices=DATASETS)
    run.add_argument("--csv", help="path to the dataset CSV (diabetes/banknote)")
    run.add_argument("--model", required=True, choices=MODEL_KINDS)
    run.add_argument("--epochs", type=int, default=100)
    run.add_argument("--batch-size", type=int, default=16)
    run.add_argument("--lr", type=float, default=0.05)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--features",
                     help="comma-separated feature column override (CSV datasets)")
    run.add_argument("--circuit-file",
                     help="gate-list file replacing the default circuit "
                          "(quantum models only)")
    run.add_argument("--out", help="output directory "
                                   "(default runs/<dataset>_<model>_seed<seed>)")
    run.set_defaults(func=cmd_run)

    replay = sub.add_parser("replay", help="rerun an experiment from its manifest")
    replay.add_argument("manifest", help="path to a run's manifest.txt")
    replay.add_argument("--out", help="output directory (default <run>_replay)")
    replay.set_defaults(func=cmd_replay)

    summarize = sub.add_parser("summarize",
                               help="tabulate best metrics over run directories")
    summarize.add_argument("run_dirs", nargs="+", metavar="RUN_DIR")
    summarize.add_argument("--csv", help="also write the table as CSV")
    summarize.set_defaults(func=cmd_summarize)
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except TrainingDiverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
