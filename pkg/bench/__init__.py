from .config import BenchConfig, build_grid
from .dataset import generate_regression_dataset, oracle_posterior
from .metrics import KLResult, evaluate_uncertainty_quality, kl_univariate_gaussian
from .suite import (
    AggregateRow,
    FailedTask,
    MethodSummary,
    SuiteResult,
    aggregate,
    run_benchmark_suite,
    run_task,
    summarize_methods,
)
from .report import CSV_COLUMNS, plot_config_bars, write_results_csv, write_results_jsonl

__all__ = [
    "BenchConfig",
    "build_grid",
    "generate_regression_dataset",
    "oracle_posterior",
    "KLResult",
    "evaluate_uncertainty_quality",
    "kl_univariate_gaussian",
    "AggregateRow",
    "FailedTask",
    "MethodSummary",
    "SuiteResult",
    "aggregate",
    "run_benchmark_suite",
    "run_task",
    "summarize_methods",
    "CSV_COLUMNS",
    "plot_config_bars",
    "write_results_csv",
    "write_results_jsonl",
]
