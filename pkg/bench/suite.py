import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.linalg import LinAlgError

from errors import UsageError, VarnetError
from models import MethodConfig, Model, fit
from data import RegressionDataset
from tensor import RngStream
from .config import BenchConfig
from .dataset import generate_regression_dataset, oracle_posterior
from .metrics import KLResult, evaluate_uncertainty_quality

logger = logging.getLogger(__name__)

# (cfg, method, train set, stream) -> trained model
ModelFactory = Callable[[BenchConfig, MethodConfig, RegressionDataset, RngStream], Model]


@dataclass(frozen=True)
class BenchTask:
    cfg: BenchConfig
    method: MethodConfig
    seed: int


@dataclass
class FailedTask:
    config_id: str
    method_id: str
    seed: int
    error: str


@dataclass
class AggregateRow:
    config_id: str
    input_dim: int
    data_ratio: int
    noise_std: float
    method_id: str
    seeds: int
    mean_kl: float
    std_kl: float


@dataclass
class MethodSummary:
    method_id: str
    cells: int
    raw_mean_kl: float
    std_kl: float


@dataclass
class SuiteResult:
    results: list[KLResult] = field(default_factory=list)
    aggregates: list[AggregateRow] = field(default_factory=list)
    failures: list[FailedTask] = field(default_factory=list)
    configs: dict[str, BenchConfig] = field(default_factory=dict)


def trained_model(cfg: BenchConfig, method: MethodConfig, train: RegressionDataset, stream: RngStream) -> Model:
    model, _ = fit(method, cfg.architecture(), train, cfg.training, stream)
    return model


def task_stream(master_seed: int, cfg: BenchConfig, seed: int) -> RngStream:
    """Stream of one (config, seed) cell, shared by every method so they see the same data."""
    return RngStream(master_seed).spawn(f"config:{cfg.config_id}", 0).spawn("seed", seed)


def run_task(task: BenchTask, master_seed: int, model_factory: ModelFactory = trained_model) -> KLResult:
    cfg, method = task.cfg, task.method
    stream = task_stream(master_seed, cfg, task.seed)
    train, test = generate_regression_dataset(cfg, stream.spawn("data", 0))
    oracle = oracle_posterior(cfg, train, test)

    method_stream = stream.spawn(f"method:{method.method_id}", 0)
    model = model_factory(cfg, method, train, method_stream.spawn("train", 0))
    result = evaluate_uncertainty_quality(
        model,
        oracle,
        test.inputs,
        cfg.mc_samples,
        method_stream.spawn("predict", 0).generator(),
        config_id=cfg.config_id,
        seed=task.seed,
    )
    result.method_id = method.method_id
    return result


def _run_logged(task: BenchTask, master_seed: int, model_factory: ModelFactory) -> KLResult | FailedTask:
    label = f"{task.cfg.config_id}/{task.method.method_id}/seed={task.seed}"
    logger.info(f"Starting {label}")
    try:
        result = run_task(task, master_seed, model_factory)
    except (VarnetError, LinAlgError) as e:
        logger.error(f"Run {label} failed: {e}")
        return FailedTask(task.cfg.config_id, task.method.method_id, task.seed, str(e))
    logger.info(f"Finished {label}: mean KL {result.mean_kl:.6g}")
    return result


def aggregate(configs: list[BenchConfig], results: list[KLResult]) -> list[AggregateRow]:
    """Mean and population std of mean_kl across seeds, in grid order."""
    by_key: dict[tuple[str, str], list[KLResult]] = {}
    for r in results:
        by_key.setdefault((r.config_id, r.method_id), []).append(r)

    rows = []
    for cfg in configs:
        for method in cfg.methods:
            runs = sorted(by_key.get((cfg.config_id, method.method_id), []), key=lambda r: r.seed)
            if not runs:
                continue
            values = np.array([r.mean_kl for r in runs])
            rows.append(
                AggregateRow(
                    cfg.config_id,
                    cfg.input_dim,
                    cfg.data_ratio,
                    cfg.noise_std,
                    method.method_id,
                    len(runs),
                    float(values.mean()),
                    float(values.std()),
                )
            )
    return rows


def summarize_methods(aggregates: list[AggregateRow]) -> list[MethodSummary]:
    """Raw (unnormalized) mean of the per-cell mean KL for each method across all cells."""
    per_method: dict[str, list[float]] = {}
    for row in aggregates:
        per_method.setdefault(row.method_id, []).append(row.mean_kl)
    return [
        MethodSummary(method_id, len(values), float(np.mean(values)), float(np.std(values)))
        for method_id, values in per_method.items()
    ]


def run_benchmark_suite(
    configs: list[BenchConfig],
    master_seed: int,
    jobs: int = 1,
    model_factory: ModelFactory = trained_model,
) -> SuiteResult:
    """Every (config, method, seed) run, its KL score and the per-cell aggregates.

    Results do not depend on ``jobs``: each task owns its random stream and the
    reduction runs over sorted keys.
    """
    if jobs < 1:
        raise UsageError(f"jobs must be >= 1, got {jobs}")
    ids = [cfg.config_id for cfg in configs]
    if len(set(ids)) != len(ids):
        raise UsageError("benchmark grid contains duplicate cells")

    tasks = [BenchTask(cfg, method, seed) for cfg in configs for method in cfg.methods for seed in cfg.seeds]
    logger.info(f"Running {len(tasks)} benchmark tasks with {jobs} worker(s)")
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        outcomes = list(pool.map(lambda t: _run_logged(t, master_seed, model_factory), tasks))

    order = {cfg.config_id: i for i, cfg in enumerate(configs)}
    suite = SuiteResult(configs={cfg.config_id: cfg for cfg in configs})
    for outcome in outcomes:
        if isinstance(outcome, FailedTask):
            suite.failures.append(outcome)
        else:
            suite.results.append(outcome)
    suite.results.sort(key=lambda r: (order[r.config_id], r.method_id, r.seed))
    suite.aggregates = aggregate(configs, suite.results)
    if suite.failures:
        logger.warning(f"{len(suite.failures)} of {len(tasks)} runs failed and were excluded from aggregates")
    return suite
