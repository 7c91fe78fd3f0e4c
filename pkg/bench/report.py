import csv
import json
import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

import config
from .suite import AggregateRow, SuiteResult

CSV_COLUMNS = ["config_id", "D_x", "lambda", "eps", "method", "seeds", "mean_kl", "std_kl"]

# stable SVG element ids across runs
plt.rcParams["svg.hashsalt"] = "varnet"


def write_results_csv(aggregates: list[AggregateRow], path: Path):
    """Aggregate table, one row per (config, method); floats written with repr for exact replay."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in aggregates:
            writer.writerow([
                row.config_id,
                row.input_dim,
                row.data_ratio,
                repr(row.noise_std),
                row.method_id,
                row.seeds,
                repr(row.mean_kl),
                repr(row.std_kl),
            ])


def write_results_jsonl(suite: SuiteResult, path: Path):
    """One record per run, failed runs included with their error text."""
    with open(path, "w", encoding="utf-8") as f:
        for r in suite.results:
            cfg = suite.configs[r.config_id]
            record = {
                "status": "ok",
                "config_id": r.config_id,
                "D_x": cfg.input_dim,
                "lambda": cfg.data_ratio,
                "eps": cfg.noise_std,
                "method": r.method_id,
                "seed": r.seed,
                "mean_kl": r.mean_kl,
                "per_point_kl": [float(v) for v in r.per_point_kl],
            }
            f.write(json.dumps(record, sort_keys=True) + "\n")
        for failure in suite.failures:
            cfg = suite.configs[failure.config_id]
            record = {
                "status": "failed",
                "config_id": failure.config_id,
                "D_x": cfg.input_dim,
                "lambda": cfg.data_ratio,
                "eps": cfg.noise_std,
                "method": failure.method_id,
                "seed": failure.seed,
                "error": failure.error,
            }
            f.write(json.dumps(record, sort_keys=True) + "\n")


def _svg_name(config_id: str) -> str:
    return "kl_" + re.sub(r"[^A-Za-z0-9_.-]", "_", config_id) + ".svg"


def plot_config_bars(aggregates: list[AggregateRow], out_dir: Path) -> list[Path]:
    """One 800x500 SVG per config: mean KL per method with 1-std whiskers."""
    by_config: dict[str, list[AggregateRow]] = {}
    for row in aggregates:
        by_config.setdefault(row.config_id, []).append(row)

    paths = []
    # SVG user units are points: 72 per inch gives an 800x500 viewBox
    dpi = 72
    for config_id, rows in by_config.items():
        fig, ax = plt.subplots(figsize=(config.PLOT_WIDTH_PX / dpi, config.PLOT_HEIGHT_PX / dpi), dpi=dpi)
        labels = [r.method_id for r in rows]
        bars = ax.bar(labels, [r.mean_kl for r in rows], yerr=[r.std_kl for r in rows], capsize=6, color="tab:blue")
        ax.bar_label(bars, fmt="%.3g", padding=3)
        ax.set_ylabel("mean KL (raw mean over seeds, ±1 std)")
        ax.set_title(config_id)
        ax.set_ylim(bottom=0)
        fig.tight_layout()
        path = Path(out_dir) / _svg_name(config_id)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        paths.append(path)
    return paths
