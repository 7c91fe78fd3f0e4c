import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import norm

from bench import (
    BenchConfig,
    build_grid,
    evaluate_uncertainty_quality,
    generate_regression_dataset,
    kl_univariate_gaussian,
    oracle_posterior,
    plot_config_bars,
    run_benchmark_suite,
    summarize_methods,
    write_results_csv,
    write_results_jsonl,
)
from errors import ConfigError, DomainError, TrainingError, UsageError
from models import Architecture, EpistemicIndex, MethodConfig, Model, TrainingConfig
from models.architecture import dense
from oracle import GPPosterior
from tensor import RngStream, Tensor


class SpreadModel(Model):
    """Two-member model whose predictive moments are exactly (mean, variance)."""

    def __init__(self, mean, variance, method: MethodConfig | None = None):
        mean = np.atleast_1d(np.asarray(mean, dtype=np.float64))
        super().__init__(Architecture("stub", (1,), (dense(1),)), method or MethodConfig("ensemble", ensemble_size=2))
        self.mean = mean
        self.spread = np.sqrt(np.broadcast_to(variance, mean.shape))

    def named_parameters(self):
        return []

    def enumerate_indices(self):
        return [EpistemicIndex("ensemble", member=k) for k in range(2)]

    def forward(self, x, z):
        n = np.asarray(x).shape[0]
        sign = 1.0 if z.member == 0 else -1.0
        mean = np.broadcast_to(self.mean, (n,))
        spread = np.broadcast_to(self.spread, (n,))
        return Tensor((mean + sign * spread).reshape(-1, 1))


def stub_oracle(mean, variance, noise=0.0) -> GPPosterior:
    return GPPosterior(np.asarray(mean, dtype=np.float64), np.diag(variance), noise, np.zeros(0))


def spread_factory(cfg, method, train, stream):
    return SpreadModel(0.0, 1.0, method)


def small_config(**kwargs) -> BenchConfig:
    defaults = dict(
        input_dim=2,
        data_ratio=3,
        noise_std=0.1,
        n_test=5,
        seeds=(0, 1),
        mc_samples=4,
        methods=(MethodConfig("vnn"),),
    )
    defaults.update(kwargs)
    return BenchConfig(**defaults)


# --- Config ---

def test_train_size_is_dim_times_ratio():
    assert small_config(input_dim=2, data_ratio=3).train_size == 6
    assert small_config(input_dim=10, data_ratio=1).train_size == 10


def test_config_id():
    assert small_config(input_dim=10, data_ratio=100, noise_std=0.01).config_id == "D10-lam100-eps0.01"


@pytest.mark.parametrize("field,kwargs", [
    ("bench.input_dims", {"input_dim": 0}),
    ("bench.data_ratios", {"data_ratio": 0}),
    ("bench.noise_stds", {"noise_std": 0.0}),
    ("bench.seeds", {"seeds": ()}),
    ("bench.mc_samples", {"mc_samples": 0}),
    ("bench.methods", {"methods": ()}),
])
def test_config_validation(field, kwargs):
    with pytest.raises(ConfigError) as info:
        small_config(**kwargs)
    assert info.value.field == field


def test_grid_order():
    grid = build_grid([2, 10], [1, 10], [0.1], n_test=5)
    assert [c.config_id for c in grid] == ["D2-lam1-eps0.1", "D2-lam10-eps0.1", "D10-lam1-eps0.1", "D10-lam10-eps0.1"]


def test_architecture_matches_oracle_depth():
    arch = small_config(oracle_depth=2, hidden_width=7).architecture()
    assert [arch.shapes[i] for i in arch.parametric_layers()] == [(7,), (7,), (1,)]


# --- Dataset ---

def test_dataset_sizes_and_determinism():
    cfg = small_config(input_dim=3, data_ratio=4, n_test=7)
    train, test = generate_regression_dataset(cfg, RngStream(5))
    again, _ = generate_regression_dataset(cfg, RngStream(5))
    assert train.inputs.shape == (12, 3)
    assert test.inputs.shape == (7, 3)
    assert np.array_equal(train.targets, again.targets)
    other, _ = generate_regression_dataset(cfg, RngStream(6))
    assert not np.array_equal(train.targets, other.targets)


def test_oracle_posterior_covers_test_set():
    cfg = small_config()
    train, test = generate_regression_dataset(cfg, RngStream(0))
    post = oracle_posterior(cfg, train, test)
    assert post.mean.shape == (cfg.n_test,)
    assert post.noise_variance == pytest.approx(0.01)
    assert np.all(post.variance >= -1e-12)


# --- KL ---

@pytest.mark.parametrize("mu1,v1,mu2,v2,expected", [
    (0.0, 1.0, 0.0, 1.0, 0.0),
    (1.0, 1.0, 0.0, 1.0, 0.5),
    (0.0, 4.0, 0.0, 1.0, 0.5 * (math.log(0.25) + 3.0)),
])
def test_kl_known_values(mu1, v1, mu2, v2, expected):
    assert kl_univariate_gaussian(mu1, v1, mu2, v2) == pytest.approx(expected, abs=1e-12)


def test_kl_matches_numerical_integral():
    rng = np.random.default_rng(0)
    for _ in range(100):
        mu1, mu2 = rng.standard_normal(2)
        v1, v2 = rng.uniform(0.2, 3.0, 2)
        s1 = math.sqrt(v1)

        def integrand(x):
            return norm.pdf(x, mu1, s1) * (norm.logpdf(x, mu1, s1) - norm.logpdf(x, mu2, math.sqrt(v2)))

        numeric, _ = quad(integrand, mu1 - 15 * s1, mu1 + 15 * s1, epsabs=1e-10)
        assert kl_univariate_gaussian(mu1, v1, mu2, v2) == pytest.approx(numeric, abs=1e-6)


def test_kl_rejects_non_positive_variance():
    with pytest.raises(DomainError):
        kl_univariate_gaussian(0.0, 0.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        kl_univariate_gaussian(np.zeros(2), np.ones(2), np.zeros(2), np.array([1.0, -1.0]))


def test_model_equal_to_oracle_scores_zero():
    mean = np.array([0.3, -1.2, 2.0])
    var = np.array([0.5, 1.0, 0.1])
    result = evaluate_uncertainty_quality(SpreadModel(mean, var), stub_oracle(mean, var, 0.01), np.zeros((3, 1)))
    assert result.mean_kl <= 1e-10
    assert result.per_point_kl.shape == (3,)


def test_mean_offset_gives_closed_form_kl():
    delta, v = 0.4, 0.8
    result = evaluate_uncertainty_quality(
        SpreadModel(np.full(4, delta), v),
        stub_oracle(np.zeros(4), np.full(4, v)),
        np.zeros((4, 1)),
    )
    assert result.mean_kl == pytest.approx(delta ** 2 / (2 * v), rel=1e-12)


def test_overconfidence_is_penalized():
    oracle = stub_oracle(np.zeros(3), np.ones(3))
    scores = [
        evaluate_uncertainty_quality(SpreadModel(np.zeros(3), v), oracle, np.zeros((3, 1))).mean_kl
        for v in (1.0, 0.5, 0.1, 0.01)
    ]
    assert scores == sorted(scores)
    assert scores[0] <= 1e-12


def test_zero_variance_model_is_floored():
    result = evaluate_uncertainty_quality(SpreadModel(np.zeros(2), 0.0), stub_oracle(np.zeros(2), np.ones(2)), np.zeros((2, 1)))
    assert math.isfinite(result.mean_kl)
    assert result.mean_kl > 0


def test_evaluate_checks_sizes():
    with pytest.raises(UsageError):
        evaluate_uncertainty_quality(SpreadModel(np.zeros(3), 1.0), stub_oracle(np.zeros(2), np.ones(2)), np.zeros((3, 1)))


# --- Suite ---

def test_suite_single_config():
    suite = run_benchmark_suite([small_config()], master_seed=1, model_factory=spread_factory)
    assert len(suite.results) == 2
    assert len(suite.aggregates) == 1
    row = suite.aggregates[0]
    assert row.seeds == 2
    assert row.method_id == "vnn"
    assert row.mean_kl == pytest.approx(np.mean([r.mean_kl for r in suite.results]))


def test_suite_grid_counts():
    grid = build_grid([2, 3], [1, 2], [0.1], n_test=4, seeds=(0, 1), mc_samples=2,
                      methods=(MethodConfig("vnn"), MethodConfig("bbb")))
    suite = run_benchmark_suite(grid, master_seed=3, model_factory=spread_factory)
    assert len(suite.results) == 16
    assert len(suite.aggregates) == 8
    assert [r.config_id for r in suite.aggregates][::2] == [c.config_id for c in grid]


def test_suite_is_independent_of_jobs():
    grid = build_grid([2], [1, 2], [0.1, 1.0], n_test=4, seeds=(0, 1, 2), mc_samples=2)
    one = run_benchmark_suite(grid, master_seed=7, jobs=1, model_factory=spread_factory)
    four = run_benchmark_suite(grid, master_seed=7, jobs=4, model_factory=spread_factory)
    assert [r.mean_kl for r in one.results] == [r.mean_kl for r in four.results]
    assert one.aggregates == four.aggregates


def test_methods_share_the_dataset():
    cfg = small_config(methods=(MethodConfig("vnn"), MethodConfig("mcd")), seeds=(0,))
    suite = run_benchmark_suite([cfg], master_seed=2, model_factory=spread_factory)
    vnn, mcd = sorted(suite.results, key=lambda r: r.method_id)[::-1]
    assert vnn.mean_kl == mcd.mean_kl


def test_failed_runs_are_reported_and_excluded():
    def flaky(cfg, method, train, stream):
        if method.method == "bbb":
            raise TrainingError("loss diverged")
        return spread_factory(cfg, method, train, stream)

    cfg = small_config(methods=(MethodConfig("vnn"), MethodConfig("bbb")))
    suite = run_benchmark_suite([cfg], master_seed=0, model_factory=flaky)
    assert len(suite.failures) == 2
    assert {f.method_id for f in suite.failures} == {"bbb"}
    assert "diverged" in suite.failures[0].error
    assert [row.method_id for row in suite.aggregates] == ["vnn"]


def test_suite_rejects_bad_arguments():
    with pytest.raises(UsageError):
        run_benchmark_suite([small_config()], master_seed=0, jobs=0)
    with pytest.raises(UsageError):
        run_benchmark_suite([small_config(), small_config()], master_seed=0)


def test_summarize_methods_uses_raw_mean():
    grid = build_grid([2], [1, 2], [0.1], n_test=4, seeds=(0,), mc_samples=2)
    suite = run_benchmark_suite(grid, master_seed=0, model_factory=spread_factory)
    [summary] = summarize_methods(suite.aggregates)
    assert summary.cells == 2
    assert summary.raw_mean_kl == pytest.approx(np.mean([row.mean_kl for row in suite.aggregates]))


def test_real_methods_end_to_end():
    cfg = small_config(
        data_ratio=5,
        seeds=(0,),
        methods=(MethodConfig("vnn"), MethodConfig("mcd"), MethodConfig("ensemble", ensemble_size=2)),
        training=TrainingConfig(epochs=3, batch_size=5),
        hidden_width=8,
    )
    suite = run_benchmark_suite([cfg], master_seed=4)
    assert not suite.failures
    assert len(suite.results) == 3
    assert all(math.isfinite(r.mean_kl) and r.mean_kl >= 0 for r in suite.results)


# --- Report ---

def test_csv_is_deterministic(tmp_path):
    grid = build_grid([2], [1, 2], [0.1], n_test=4, seeds=(0, 1), mc_samples=2)
    for name in ("a.csv", "b.csv"):
        suite = run_benchmark_suite(grid, master_seed=9, model_factory=spread_factory)
        write_results_csv(suite.aggregates, tmp_path / name)
    content = (tmp_path / "a.csv").read_bytes()
    assert content == (tmp_path / "b.csv").read_bytes()
    lines = content.decode().splitlines()
    assert lines[0] == "config_id,D_x,lambda,eps,method,seeds,mean_kl,std_kl"
    assert len(lines) == 3


def test_jsonl_lists_failures(tmp_path):
    def broken(cfg, method, train, stream):
        raise TrainingError("nan loss")

    suite = run_benchmark_suite([small_config(seeds=(0,))], master_seed=0, model_factory=broken)
    write_results_jsonl(suite, tmp_path / "runs.jsonl")
    text = (tmp_path / "runs.jsonl").read_text()
    assert '"status": "failed"' in text
    assert "nan loss" in text


def test_svg_size(tmp_path):
    suite = run_benchmark_suite([small_config()], master_seed=0, model_factory=spread_factory)
    [path] = plot_config_bars(suite.aggregates, tmp_path)
    assert path.name == "kl_D2-lam3-eps0.1.svg"
    assert 'viewBox="0 0 800 500"' in path.read_text()
