import csv
import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

import config
from bench import plot_config_bars, run_benchmark_suite, summarize_methods, write_results_csv, write_results_jsonl
from data import LabeledDataset, load_mnist, normalize, subset
from db import Database
from errors import ConfigError
from models import fit, predictive_class_probabilities, predictive_entropy, preset, save_checkpoint
from oracle import run_gp_checks
from tensor import RngStream
from . import settings
from .formatter import Formatter
from .manifest import RunManifest

logger = logging.getLogger(__name__)

CLASSIFY_COLUMNS = [
    "method", "method_id", "architecture", "hparams", "epochs",
    "val_accuracy", "test_accuracy", "mean_entropy", "final_loss", "top2",
]


def _master_seed(args, manifest_seed: int | None) -> int:
    seed = args.seed if args.seed is not None else manifest_seed
    seed = config.DEFAULT_SEED if seed is None else seed
    if not 0 <= seed < 2**64:
        raise ConfigError("seed", f"must be an unsigned 64-bit integer, got {seed}")
    return seed


def _out_dir(args, command: str) -> Path:
    out = Path(args.out) if args.out else config.OUT_DIR / command
    out.mkdir(parents=True, exist_ok=True)
    return out


def _prepare(args, command: str) -> tuple[dict, int, Path]:
    """Resolve settings and write the manifest before any computation."""
    raw, manifest_seed = settings.load_raw(command, args.config)
    resolved = settings.resolve(command, raw, getattr(args, "profile", None))
    seed = _master_seed(args, manifest_seed)
    out = _out_dir(args, command)
    RunManifest(command, resolved, seed, str(out)).write(out)
    return resolved, seed, out


# --- bench-uq ---

def cmd_bench_uq(args) -> int:
    resolved, seed, out = _prepare(args, "bench-uq")
    configs = settings.bench_grid(resolved)
    logger.info(f"bench-uq: {len(configs)} cells, master seed {seed}, output {out}")

    suite = run_benchmark_suite(configs, seed, jobs=args.jobs)
    write_results_csv(suite.aggregates, out / "results.csv")
    write_results_jsonl(suite, out / "results.jsonl")
    plots = plot_config_bars(suite.aggregates, out)

    db_path = out / "results.db"
    if db_path.exists():
        db_path.unlink()
    db = Database(db_path)
    db.add_results(suite.results, suite.configs, seed)
    db.add_failures(suite.failures, seed)

    formatter = Formatter()
    print(formatter.format_bench_summary(suite, summarize_methods(suite.aggregates)))
    summary = db.method_summary()
    if summary:
        worst = {s["method"]: max(db.get_results(method=s["method"]), key=lambda r: r["mean_kl"]) for s in summary}
        print()
        print(formatter.format_store_summary(summary, worst, db.count_failures()))
    print(f"\nWrote results.csv, results.jsonl, results.db and {len(plots)} plot(s) to {out}")
    return 0 if suite.results else 1


# --- classify ---

@dataclass
class ClassificationRow:
    method: str
    method_id: str
    architecture: str
    hparams: str
    epochs: int
    val_accuracy: float
    test_accuracy: float
    mean_entropy: float
    final_loss: float | None
    top2: bool = False


def _split(dataset: LabeledDataset, fraction: float, rng: np.random.Generator) -> tuple[LabeledDataset, LabeledDataset]:
    n_val = int(round(len(dataset) * fraction))
    if not 1 <= n_val < len(dataset):
        raise ConfigError("classify.validation_fraction", f"leaves {n_val} of {len(dataset)} samples for validation")
    order = rng.permutation(len(dataset))
    return dataset.take(np.sort(order[n_val:])), dataset.take(np.sort(order[:n_val]))


def _accuracy(probs: np.ndarray, labels: np.ndarray) -> float:
    return float(np.mean(np.argmax(probs, axis=1) == labels))


def mark_top2(rows: list[ClassificationRow]):
    """Flag the two best hyperparameter settings of every (method, architecture) by validation accuracy."""
    groups: dict[tuple[str, str], list[ClassificationRow]] = {}
    for row in rows:
        groups.setdefault((row.method, row.architecture), []).append(row)
    for group in groups.values():
        for row in sorted(group, key=lambda r: -r.val_accuracy)[:2]:
            row.top2 = True


def load_classification_data(c: dict, stream: RngStream) -> tuple[LabeledDataset, LabeledDataset, LabeledDataset]:
    train_full = load_mnist(config.DATA_DIR, "train")
    test_full = load_mnist(config.DATA_DIR, "test")
    train = subset(train_full, min(c["train_size"], len(train_full)), stream.spawn("subset", 0).generator())
    test = subset(test_full, min(c["test_size"], len(test_full)), stream.spawn("subset", 1).generator())
    fit_set, val = _split(train, c["validation_fraction"], stream.spawn("split", 0).generator())
    mean, std = float(fit_set.inputs.mean()), float(fit_set.inputs.std())
    return normalize(fit_set, mean, std), normalize(val, mean, std), normalize(test, mean, std)


def cmd_classify(args) -> int:
    resolved, seed, out = _prepare(args, "classify")
    c = resolved["classify"]
    grid = settings.classify_grid(resolved)
    architectures = [preset(name, activation=c["activation"]) for name in c["architectures"]]
    stream = RngStream(seed).spawn("classify", 0)

    fit_set, val, test = load_classification_data(c, stream.spawn("data", 0))
    logger.info(f"classify: {len(fit_set)} train / {len(val)} validation / {len(test)} test images")
    logger.info(f"classify: {len(grid)} settings x {len(architectures)} architectures")

    rows = []
    for point in grid:
        method = point.method
        for architecture in architectures:
            label = f"{method.method_id}-{architecture.name}-g{point.index}"
            logger.info(f"Training {label} ({point.hparams})")
            model_stream = stream.spawn(f"model:{method.method}-{architecture.name}", point.index)
            model, trace = fit(method, architecture, fit_set, point.training, model_stream)
            draws = 1 if method.method == "deterministic" else c["mc_samples"]
            rng = model_stream.spawn("predict", 0).generator()
            val_probs = predictive_class_probabilities(model, val.inputs, draws, rng)
            test_probs = predictive_class_probabilities(model, test.inputs, draws, rng)
            rows.append(
                ClassificationRow(
                    method.method,
                    method.method_id,
                    architecture.name,
                    point.hparams,
                    point.training.epochs,
                    _accuracy(val_probs, val.labels),
                    _accuracy(test_probs, test.labels),
                    float(np.mean(predictive_entropy(test_probs))),
                    trace.final_loss if trace is not None and trace.epoch_losses else None,
                )
            )
            logger.info(f"Finished {label}: test accuracy {rows[-1].test_accuracy:.4f}")
            if c["save_checkpoints"]:
                ckpt_dir = out / "checkpoints"
                ckpt_dir.mkdir(exist_ok=True)
                save_checkpoint(model, ckpt_dir / f"{label}.ckpt")

    mark_top2(rows)
    with open(out / "classification.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CLASSIFY_COLUMNS)
        for r in rows:
            writer.writerow([
                r.method, r.method_id, r.architecture, r.hparams, r.epochs, repr(r.val_accuracy),
                repr(r.test_accuracy), repr(r.mean_entropy), "" if r.final_loss is None else repr(r.final_loss),
                int(r.top2),
            ])
    with open(out / "classification.jsonl", "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(asdict(r), sort_keys=True) + "\n")

    print(Formatter().format_classification(rows))
    print("top2: best two hyperparameter settings per method and architecture by validation accuracy")
    return 0


# --- gp-check ---

def cmd_gp_check(args) -> int:
    _, seed, _ = _prepare(args, "gp-check")
    results = run_gp_checks(
        RngStream(seed).spawn("gp-check", 0),
        perturb_kernel=args.perturb_kernel,
        width=args.width,
        n_networks=args.networks,
        pairs=args.pairs,
    )
    print(Formatter().format_checks(results))
    return 0 if all(r.passed for r in results) else 1
